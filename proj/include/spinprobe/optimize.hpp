// optimize.hpp — QFI maximization over interaction time and parameter sweeps
//
// F_q(t) is oscillatory (every class contributes its own Rabi frequency), so
// optimization is a dense coarse grid followed by golden-section refinement of
// the winning bracket.  Monotone-increasing curves — the coupling-estimation
// regime, where waiting longer always helps — are reported as boundary optima
// with a flag instead of an error.

#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinprobe/model.hpp"
#include "spinprobe/qfi.hpp"

namespace spinprobe::opt {

// Thrown when more than half of the time grid is unusable (coherence
// collapse); maps to the CLI's computational-failure exit code.
class CollapseDominatedGrid : public std::runtime_error {
public:
    CollapseDominatedGrid(std::size_t excluded, std::size_t total)
        : std::runtime_error("more than 50% of the time grid collapsed (" +
                             std::to_string(excluded) + "/" + std::to_string(total) + ")") {}
};

struct TimeWindow {
    double t_min{1e-3}; // > 0: the closed-form QFI is singular at t = 0
    double t_max{20.0};
    int n_grid{512};

    void validate() const; // throws std::invalid_argument
    std::vector<double> grid() const;
};

// Relative refinement target: bracket shrinks below 1e-6 * t_max.
inline constexpr double kRefineTol = 1e-6;
// Monotone classification: every backward step within 0.5% relative...
inline constexpr double kMonotoneStepTol = 5e-3;
// ...and the best grid sample is the last one (keeps fq_star = grid max exact).

struct OptimizeResult {
    double t_star{0.0};
    double fq_star{0.0};
    bool monotone{false};    // curve judged monotone-increasing; t_star = t_max
    std::size_t excluded{0}; // grid points dropped by coherence collapse
};

// Core search over any objective; nullopt marks an excluded grid point.
// Ties break toward the earliest time; refinement never loses to the grid.
OptimizeResult maximize_over_grid(const std::function<std::optional<double>(double)>& objective,
                                  const TimeWindow& window);

// F_q(t) maximization for one parameter point and pipeline.
OptimizeResult optimize_over_time(
    const env::ModelSpec& spec, const qfi::ParamSelector& sel, const TimeWindow& window,
    bool correlated, qfi::DerivativeMethod method = qfi::DerivativeMethod::finite_difference,
    int threads = 1);

struct SweepPoint {
    double value{0.0}; // swept parameter value
    std::optional<OptimizeResult> corr;
    std::optional<OptimizeResult> unc;
    std::string error; // nonempty when a pipeline failed at this value
};

struct SweepResult {
    qfi::Parameter swept{qfi::Parameter::temperature};
    std::vector<SweepPoint> points;
    std::vector<double> crossovers; // sign changes of fq_corr - fq_unc, bisected
};

// Crossover bisection target on the swept parameter axis.
inline constexpr double kCrossoverTol = 1e-3;

// Optimizes both pipelines at each value of the selected parameter and
// locates crossovers of the optimal-QFI difference by bisection.  Per-value
// computational failures are recorded on the point; the sweep continues.
SweepResult sweep(const env::ModelSpec& spec, qfi::Parameter which,
                  const std::vector<double>& values, const TimeWindow& window,
                  qfi::DerivativeMethod method = qfi::DerivativeMethod::finite_difference,
                  int threads = 1);

} // namespace spinprobe::opt
