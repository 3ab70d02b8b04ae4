// qfi.cpp — QFI forms and Bloch-vector parameter derivatives

#include "spinprobe/qfi.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "spinprobe/parallel.hpp"

namespace spinprobe::qfi {

namespace {

constexpr double kPureBranch = 1.0 - 1e-9;   // |p| above this: pure-state branch
constexpr double kSupportCutoff = 1e-12;     // SLD eigenvalue-pair support cutoff
constexpr double kSingularFloor = 1e-12;     // closed-form denominator floor

// Finite-difference step for parameter x (spec'd: one Richardson level on top).
double fd_step(Parameter which, double x) {
    double h = std::max(1e-5 * std::abs(x), 1e-7);
    if (which == Parameter::temperature && x - h <= 0.0) {
        h *= 0.1; // shrink once near the domain edge
        if (x - h <= 0.0) {
            throw std::invalid_argument(
                "temperature too close to 0 for the finite-difference stencil");
        }
    }
    return h;
}

struct ClosedFormInputs {
    double gamma, e2g, f, pz;
    double dgamma, domega, dpz;
};

// (Gamma, Omega, p_z) derivatives from (p, dp); quotient forms dodge the
// arctan branch cuts.
ClosedFormInputs closed_form_inputs(const Eigen::Vector3d& p, const Eigen::Vector3d& dp) {
    const double pt2 = p.x() * p.x() + p.y() * p.y();
    if (pt2 < dyn::kCoherenceFloor) throw dyn::CoherenceCollapse(0.0);
    ClosedFormInputs in;
    in.gamma = -0.5 * std::log(pt2);
    in.e2g = 1.0 / pt2;
    in.pz = p.z();
    in.f = 1.0 + in.pz * in.pz * in.e2g;
    in.dgamma = -(p.x() * dp.x() + p.y() * dp.y()) / pt2;
    in.domega = (p.x() * dp.y() - p.y() * dp.x()) / pt2;
    in.dpz = dp.z();
    return in;
}

// The three-term closed form.  The middle term is the corrected expression
// (dp_z + p_z dGamma)^2 / f, which makes the whole sum algebraically identical
// to the Bloch identity under p = (e^-Gamma cos Omega, e^-Gamma sin Omega, p_z).
double closed_form_value(const ClosedFormInputs& in) {
    const double denom = in.e2g - in.f;
    if (denom <= kSingularFloor) {
        throw std::domain_error("closed-form QFI singular (pure state, e^{2G} - f ~ 0)");
    }
    const double t1 = in.dgamma - in.pz * in.dpz * in.e2g;
    const double t2 = in.dpz + in.pz * in.dgamma;
    const double fq =
        t1 * t1 / (in.f * denom) + t2 * t2 / in.f + in.domega * in.domega / in.e2g;
    return std::max(fq, 0.0);
}

} // namespace

env::ModelSpec with_parameter(const env::ModelSpec& spec, const ParamSelector& sel) {
    env::ModelSpec out = spec;
    if (sel.which == Parameter::temperature) {
        out.temperature = sel.value;
    } else {
        out.g = sel.value;
    }
    return out;
}

double qfi_bloch_identity(const Eigen::Vector3d& p, const Eigen::Vector3d& dp) {
    const double n2 = p.squaredNorm();
    double fq = dp.squaredNorm();
    if (std::sqrt(n2) <= kPureBranch) {
        const double pdp = p.dot(dp);
        fq += pdp * pdp / (1.0 - n2);
    }
    return std::max(fq, 0.0);
}

double qfi_sld(const dyn::ReducedDensity& density, const Eigen::Matrix2cd& drho) {
    double fq = 0.0;
    for (int n = 0; n < 2; ++n) {
        for (int m = 0; m < 2; ++m) {
            const double weight = density.eigenvalues[n] + density.eigenvalues[m];
            if (weight <= kSupportCutoff) continue;
            const std::complex<double> elem =
                density.eigenvectors[n].dot(drho * density.eigenvectors[m]);
            fq += 2.0 * std::norm(elem) / weight;
        }
    }
    return std::max(fq, 0.0);
}

Evaluator::Evaluator(const env::ModelSpec& spec, const ParamSelector& sel, bool correlated,
                     DerivativeMethod method)
    : sel_(sel), correlated_(correlated), method_(method) {
    if (spec.epsilon == 0.0 && spec.delta == 0.0) {
        throw std::invalid_argument("epsilon and delta must not both be zero for QFI");
    }
    center_ = env::build_class_table(with_parameter(spec, sel));
    if (method_ == DerivativeMethod::finite_difference) {
        step_ = fd_step(sel.which, sel.value);
        for (double h : {step_, -step_, 0.5 * step_, -0.5 * step_}) {
            ParamSelector shifted{sel.which, sel.value + h};
            stencil_.push_back(env::build_class_table(with_parameter(spec, shifted)));
        }
    }
}

dyn::BlochState Evaluator::state(double t) const { return dyn::bloch_at(center_, t, correlated_); }

Eigen::Vector3d Evaluator::fd_derivative(double t) const {
    const Eigen::Vector3d p_ph = dyn::bloch_at(stencil_[0], t, correlated_).p;
    const Eigen::Vector3d p_mh = dyn::bloch_at(stencil_[1], t, correlated_).p;
    const Eigen::Vector3d p_ph2 = dyn::bloch_at(stencil_[2], t, correlated_).p;
    const Eigen::Vector3d p_mh2 = dyn::bloch_at(stencil_[3], t, correlated_).p;
    const Eigen::Vector3d d_h = (p_ph - p_mh) / (2.0 * step_);
    const Eigen::Vector3d d_h2 = (p_ph2 - p_mh2) / step_;
    return (4.0 * d_h2 - d_h) / 3.0; // one Richardson level
}

Eigen::Vector3d Evaluator::analytic_derivative(double t) const {
    const auto& table = center_;
    const auto& log_w = correlated_ ? table.log_w_corr : table.log_w_unc;
    const std::size_t n = table.quantities.size();
    const double beta = table.spec.beta();

    // Log-derivatives of the unnormalized weights w.r.t. the raw knob
    // (beta for temperature, g for coupling); normalization subtracts the
    // weighted mean, d w_i = w_i (dlog_i - <dlog>).
    std::vector<double> w(n), dlog(n);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& q = table.quantities[i];
        const auto& cls = table.classes[i];
        w[i] = std::exp(log_w[i]);
        if (sel_.which == Parameter::temperature) {
            // d log c / d beta; plus d log A / d beta on the correlated path.
            dlog[i] = -(0.5 * cls.omega_n + cls.alpha_n);
            if (correlated_ && q.eta > 0.0) {
                const double th = std::tanh(beta * q.eta);
                const double den = q.eta - q.h * th;
                // den -> 0 only when the preparation is exactly the sector
                // eigenstate (h = eta) at tanh saturation; the limit is -eta.
                dlog[i] += den > 0.0 ? q.eta * (q.eta * th - q.h) / den : -q.eta;
            }
        } else {
            // Only A_n depends on g among the weight factors.
            dlog[i] = 0.0;
            if (correlated_ && q.eta > 0.0) {
                const double m = static_cast<double>(cls.m);
                const double deta = q.eps_tilde * m / (4.0 * q.eta);
                const double dh = 0.5 * m * table.spec.preparation.z();
                const double th = std::tanh(beta * q.eta);
                const double r = q.h / q.eta;
                const double denom = 1.0 - r * th;
                // Zero multipliers are skipped outright so a saturated
                // denominator (preparation = sector eigenstate at large
                // beta*eta, where the log-derivative genuinely blows up)
                // cannot turn an exact zero into 0 * inf.
                if (deta != 0.0) {
                    dlog[i] += deta * (beta * (th - r) + r * th / q.eta) / denom;
                }
                if (dh != 0.0) dlog[i] += dh * (-th / (q.eta * denom));
            }
        }
        mean += w[i] * dlog[i];
    }

    Eigen::Vector3d dp = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& q = table.quantities[i];
        const double dw = w[i] * (dlog[i] - mean);
        const Eigen::Matrix3d r_mat = dyn::class_propagator(q, t).matrix();
        dp += dw * (r_mat * table.spec.preparation);

        if (sel_.which == Parameter::coupling && w[i] > 0.0) {
            // Rotation derivative: angle 2 eta t and axis (delta,0,eps~)/(2 eta)
            // both move with g through eps~ = epsilon + g m.
            const double m = static_cast<double>(table.classes[i].m);
            Eigen::Matrix3d dr;
            if (q.eta == 0.0) {
                // Degenerate sector (eps~ = delta = 0): rotation about z turns
                // on at rate m t.
                dr = t * m *
                     (Eigen::Matrix3d() << 0, -1, 0, 1, 0, 0, 0, 0, 0).finished();
            } else {
                const double deta = q.eps_tilde * m / (4.0 * q.eta);
                const Eigen::Vector3d u(q.delta / (2.0 * q.eta), 0.0,
                                        q.eps_tilde / (2.0 * q.eta));
                const Eigen::Vector3d du =
                    Eigen::Vector3d(0.0, 0.0, m) / (2.0 * q.eta) - u * (deta / q.eta);
                const double theta = 2.0 * q.eta * t;
                const double dtheta = 2.0 * t * deta;
                const double c = std::cos(theta);
                const double s = std::sin(theta);
                Eigen::Matrix3d ku, kdu;
                ku << 0, -u.z(), u.y(), u.z(), 0, -u.x(), -u.y(), u.x(), 0;
                kdu << 0, -du.z(), du.y(), du.z(), 0, -du.x(), -du.y(), du.x(), 0;
                dr = dtheta * (-s * Eigen::Matrix3d::Identity() + c * ku +
                               s * (u * u.transpose())) +
                     s * kdu +
                     (1.0 - c) * (du * u.transpose() + u * du.transpose());
            }
            dp += w[i] * (dr * table.spec.preparation);
        }
    }

    if (sel_.which == Parameter::temperature) {
        dp *= -beta * beta; // chain rule d beta / d T = -1/T^2
    }
    return dp;
}

Eigen::Vector3d Evaluator::bloch_derivative(double t) const {
    return method_ == DerivativeMethod::finite_difference ? fd_derivative(t)
                                                          : analytic_derivative(t);
}

QfiPoint Evaluator::at(double t) const {
    const dyn::BlochState st = state(t);
    const double pt2 = st.p.x() * st.p.x() + st.p.y() * st.p.y();
    if (pt2 < dyn::kCoherenceFloor) throw dyn::CoherenceCollapse(t);

    const Eigen::Vector3d dp = bloch_derivative(t);
    QfiPoint point;
    point.t = t;
    point.derivative_method = method_;
    point.fq_bloch = qfi_bloch_identity(st.p, dp);

    Eigen::Matrix2cd drho;
    drho << 0.5 * dp.z(), 0.5 * std::complex<double>(dp.x(), -dp.y()),
            0.5 * std::complex<double>(dp.x(), dp.y()), -0.5 * dp.z();
    point.fq_sld = qfi_sld(dyn::reduced_density(st), drho);

    try {
        point.fq_closed = closed_form_value(closed_form_inputs(st.p, dp));
    } catch (const std::domain_error&) {
        point.fq_closed = point.fq_bloch;
        point.closed_fell_back = true;
    }
    return point;
}

double Evaluator::value(double t) const {
    const QfiPoint point = at(t);
    return point.closed_fell_back ? point.fq_bloch : point.fq_closed;
}

Eigen::Vector3d bloch_derivative(const env::ModelSpec& spec, double t, const ParamSelector& sel,
                                 bool correlated, DerivativeMethod method) {
    return Evaluator(spec, sel, correlated, method).bloch_derivative(t);
}

double qfi_closed_form(const env::ModelSpec& spec, double t, const ParamSelector& sel,
                       bool correlated, DerivativeMethod method) {
    const Evaluator ev(spec, sel, correlated, method);
    const dyn::BlochState st = ev.state(t);
    return closed_form_value(closed_form_inputs(st.p, ev.bloch_derivative(t)));
}

QfiPoint qfi_point(const env::ModelSpec& spec, double t, const ParamSelector& sel,
                   bool correlated, DerivativeMethod method) {
    return Evaluator(spec, sel, correlated, method).at(t);
}

std::vector<std::optional<QfiPoint>> qfi_curve(const env::ModelSpec& spec,
                                               const std::vector<double>& times,
                                               const ParamSelector& sel, bool correlated,
                                               DerivativeMethod method, int threads) {
    const Evaluator ev(spec, sel, correlated, method);
    std::vector<std::optional<QfiPoint>> out(times.size());
    par::parallel_for(times.size(), threads, [&](std::size_t i) {
        try {
            out[i] = ev.at(times[i]);
        } catch (const dyn::CoherenceCollapse&) {
            out[i] = std::nullopt;
        }
    });
    return out;
}

} // namespace spinprobe::qfi
