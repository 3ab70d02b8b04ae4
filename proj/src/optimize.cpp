// optimize.cpp — Grid + golden-section time optimization, parameter sweeps

#include "spinprobe/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "spinprobe/parallel.hpp"

namespace spinprobe::opt {

namespace {

constexpr double kInvGolden = 0.6180339887498949; // (sqrt(5) - 1) / 2

// Golden-section maximization on [a, b]; collapsed evaluations count as -inf.
std::pair<double, double> golden_section(
    const std::function<std::optional<double>(double)>& objective, double a, double b,
    double tol) {
    auto value = [&](double t) {
        const auto v = objective(t);
        return v ? *v : -std::numeric_limits<double>::infinity();
    };
    double c = b - kInvGolden * (b - a);
    double d = a + kInvGolden * (b - a);
    double fc = value(c);
    double fd = value(d);
    while (b - a > tol) {
        if (fc > fd) { // maximum lies in [a, d]; ties move left (earliest time)
            b = d;
            d = c;
            fd = fc;
            c = b - kInvGolden * (b - a);
            fc = value(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvGolden * (b - a);
            fd = value(d);
        }
    }
    return fc >= fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

} // namespace

void TimeWindow::validate() const {
    if (!(t_min > 0.0)) throw std::invalid_argument("time window: t_min must be > 0");
    if (!(t_min < t_max)) throw std::invalid_argument("time window: t_min must be < t_max");
    if (n_grid < 16) throw std::invalid_argument("time window: n_grid must be >= 16");
}

std::vector<double> TimeWindow::grid() const {
    std::vector<double> ts(n_grid);
    for (int i = 0; i < n_grid; ++i) {
        ts[i] = t_min + (t_max - t_min) * static_cast<double>(i) / (n_grid - 1);
    }
    ts.back() = t_max;
    return ts;
}

OptimizeResult maximize_over_grid(
    const std::function<std::optional<double>(double)>& objective, const TimeWindow& window) {
    window.validate();
    const std::vector<double> ts = window.grid();
    std::vector<std::optional<double>> fs(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) fs[i] = objective(ts[i]);

    OptimizeResult result;
    std::ptrdiff_t best = -1;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        if (!fs[i]) {
            ++result.excluded;
            continue;
        }
        if (best < 0 || *fs[i] > *fs[best]) best = static_cast<std::ptrdiff_t>(i);
    }
    if (result.excluded * 2 > fs.size()) {
        throw CollapseDominatedGrid(result.excluded, fs.size());
    }

    // Monotone classification: best sample at the window end and no backward
    // step beyond the ripple tolerance between consecutive valid samples.
    if (best == static_cast<std::ptrdiff_t>(fs.size()) - 1) {
        bool monotone = true;
        std::optional<double> prev;
        for (const auto& f : fs) {
            if (!f) continue;
            if (prev && *f < *prev - kMonotoneStepTol * std::abs(*prev)) {
                monotone = false;
                break;
            }
            prev = *f;
        }
        if (monotone) {
            result.t_star = ts.back();
            result.fq_star = *fs[best];
            result.monotone = true;
            return result;
        }
    }

    result.t_star = ts[best];
    result.fq_star = *fs[best];

    // Refine inside the bracket enclosing the best grid sample.
    const double lo = best > 0 ? ts[best - 1] : ts.front();
    const double hi = best + 1 < static_cast<std::ptrdiff_t>(ts.size()) ? ts[best + 1]
                                                                        : ts.back();
    const auto [t_ref, f_ref] = golden_section(objective, lo, hi, kRefineTol * window.t_max);
    if (f_ref > result.fq_star) {
        result.t_star = t_ref;
        result.fq_star = f_ref;
    }
    return result;
}

OptimizeResult optimize_over_time(const env::ModelSpec& spec, const qfi::ParamSelector& sel,
                                  const TimeWindow& window, bool correlated,
                                  qfi::DerivativeMethod method, int threads) {
    window.validate();
    const qfi::Evaluator ev(spec, sel, correlated, method);

    // Pre-evaluate the coarse grid in parallel; the core then consumes the
    // cached values and only the golden-section probes hit the evaluator.
    const std::vector<double> ts = window.grid();
    std::vector<std::optional<double>> cache(ts.size());
    par::parallel_for(ts.size(), threads, [&](std::size_t i) {
        try {
            cache[i] = ev.value(ts[i]);
        } catch (const dyn::CoherenceCollapse&) {
            cache[i] = std::nullopt;
        }
    });

    std::size_t next = 0;
    auto objective = [&](double t) -> std::optional<double> {
        if (next < ts.size() && t == ts[next]) return cache[next++];
        try {
            return ev.value(t);
        } catch (const dyn::CoherenceCollapse&) {
            return std::nullopt;
        }
    };
    return maximize_over_grid(objective, window);
}

SweepResult sweep(const env::ModelSpec& spec, qfi::Parameter which,
                  const std::vector<double>& values, const TimeWindow& window,
                  qfi::DerivativeMethod method, int threads) {
    if (values.size() < 2) throw std::invalid_argument("sweep needs at least 2 values");
    for (double v : values) {
        if (which == qfi::Parameter::temperature && !(v > 0.0)) {
            throw std::invalid_argument("sweep temperatures must be > 0");
        }
    }

    SweepResult result;
    result.swept = which;
    result.points.resize(values.size());

    auto optimize_both = [&](double value, int point_threads)
        -> std::pair<std::optional<OptimizeResult>, std::optional<OptimizeResult>> {
        const qfi::ParamSelector sel{which, value};
        std::optional<OptimizeResult> corr, unc;
        try {
            corr = optimize_over_time(spec, sel, window, true, method, point_threads);
        } catch (const CollapseDominatedGrid&) {
        }
        try {
            unc = optimize_over_time(spec, sel, window, false, method, point_threads);
        } catch (const CollapseDominatedGrid&) {
        }
        return {corr, unc};
    };

    par::parallel_for(values.size(), threads, [&](std::size_t i) {
        result.points[i].value = values[i];
        auto [corr, unc] = optimize_both(values[i], 1);
        result.points[i].corr = corr;
        result.points[i].unc = unc;
        if (!corr || !unc) result.points[i].error = "coherence collapse dominated the grid";
    });

    // Crossovers of fq_corr - fq_unc between consecutive clean points,
    // refined by bisection on the parameter axis.
    auto difference = [&](double value) -> std::optional<double> {
        auto [corr, unc] = optimize_both(value, threads);
        if (!corr || !unc) return std::nullopt;
        return corr->fq_star - unc->fq_star;
    };
    for (std::size_t i = 0; i + 1 < result.points.size(); ++i) {
        const auto& lhs = result.points[i];
        const auto& rhs = result.points[i + 1];
        if (!lhs.corr || !lhs.unc || !rhs.corr || !rhs.unc) continue;
        double da = lhs.corr->fq_star - lhs.unc->fq_star;
        const double db = rhs.corr->fq_star - rhs.unc->fq_star;
        if (da == 0.0) {
            result.crossovers.push_back(lhs.value);
            continue;
        }
        if (da * db >= 0.0) continue;
        double a = lhs.value;
        double b = rhs.value;
        while (b - a > kCrossoverTol) {
            const double mid = 0.5 * (a + b);
            const auto dm = difference(mid);
            if (!dm) break; // collapse at the midpoint: report the bracket center
            if (*dm == 0.0 || da * *dm < 0.0) {
                b = mid;
            } else {
                a = mid;
                da = *dm;
            }
        }
        result.crossovers.push_back(0.5 * (a + b));
    }
    return result;
}

} // namespace spinprobe::opt
