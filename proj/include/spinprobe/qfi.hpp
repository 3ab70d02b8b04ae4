// qfi.hpp — Quantum Fisher information for bath temperature or probe-bath coupling
//
// Three independent evaluations of the same quantity are kept side by side:
//   closed   — the three-term expression in (Gamma, Omega, p_z) and their
//              parameter derivatives; singular where the state is pure
//              (e^{2 Gamma} = f), where callers fall back to the Bloch form
//   bloch    — the single-qubit identity |dp|^2 + (p.dp)^2 / (1 - |p|^2)
//   sld      — the spectral (symmetric-logarithmic-derivative) form from the
//              eigendecomposition of the density matrix
// Their agreement is a structural cross-check, not redundancy: each one
// exercises a different algebraic route from (p, dp) to F_q.
//
// Parameter derivatives of the Bloch vector come either from central finite
// differences with one Richardson extrapolation level (default), or from the
// analytic path that differentiates the Gibbs weights (temperature) plus the
// class rotations (coupling).

#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "spinprobe/dynamics.hpp"
#include "spinprobe/model.hpp"

namespace spinprobe::qfi {

enum class Parameter { temperature, coupling };
enum class DerivativeMethod { finite_difference, analytic };

struct ParamSelector {
    Parameter which{Parameter::temperature};
    double value{1.0}; // the point x at which F_q(x) is evaluated (overrides the spec field)
};

struct QfiPoint {
    double t{0.0};
    double fq_closed{0.0};
    double fq_bloch{0.0};
    double fq_sld{0.0};
    DerivativeMethod derivative_method{DerivativeMethod::finite_difference};
    bool closed_fell_back{false}; // closed form was singular; Bloch value reported instead
};

// Copy of `spec` with the selected parameter set to sel.value.
env::ModelSpec with_parameter(const env::ModelSpec& spec, const ParamSelector& sel);

// F_q from the Bloch identity.  Pure branch (|p| > 1 - 1e-9) drops the
// (p.dp)^2 term, which vanishes there for any physical family.
double qfi_bloch_identity(const Eigen::Vector3d& p, const Eigen::Vector3d& dp);

// F_q from the spectral form: 2 Sum_{nm} |<v_n| drho |v_m>|^2 / (l_n + l_m),
// pairs with l_n + l_m <= 1e-12 dropped (support convention).  Algebraically
// equal to the eigenvalue/eigenvector-derivative split, but needs no
// eigenvector derivatives (which are gauge-ambiguous under finite differences).
double qfi_sld(const dyn::ReducedDensity& density, const Eigen::Matrix2cd& drho);

// Evaluates F_q(t) at a fixed parameter point.  Builds the class tables once
// (including the finite-difference stencil) and is immutable afterwards, so
// one evaluator serves a whole time grid concurrently.
class Evaluator {
public:
    Evaluator(const env::ModelSpec& spec, const ParamSelector& sel, bool correlated,
              DerivativeMethod method = DerivativeMethod::finite_difference);

    // Probe state at the selected parameter point.
    dyn::BlochState state(double t) const;

    // d p(t) / d x for the selected parameter.
    Eigen::Vector3d bloch_derivative(double t) const;

    // All three QFI forms; throws dyn::CoherenceCollapse at collapsed times.
    QfiPoint at(double t) const;

    // The production scalar: closed form with automatic Bloch fallback.
    double value(double t) const;

    const env::ClassTable& table() const { return center_; }

private:
    Eigen::Vector3d fd_derivative(double t) const;
    Eigen::Vector3d analytic_derivative(double t) const;

    ParamSelector sel_;
    bool correlated_;
    DerivativeMethod method_;
    env::ClassTable center_;
    std::vector<env::ClassTable> stencil_; // x+h, x-h, x+h/2, x-h/2 (FD only)
    double step_{0.0};
};

// Spec-level wrappers over Evaluator (one-shot; prefer Evaluator for grids).
Eigen::Vector3d bloch_derivative(const env::ModelSpec& spec, double t,
                                 const ParamSelector& sel, bool correlated,
                                 DerivativeMethod method = DerivativeMethod::finite_difference);

// Closed form only; throws std::domain_error when e^{2 Gamma} - f <= 1e-12
// (pure-state singularity) instead of falling back.
double qfi_closed_form(const env::ModelSpec& spec, double t, const ParamSelector& sel,
                       bool correlated,
                       DerivativeMethod method = DerivativeMethod::finite_difference);

// Full cross-check point (closed with fallback, bloch, sld).
QfiPoint qfi_point(const env::ModelSpec& spec, double t, const ParamSelector& sel,
                   bool correlated,
                   DerivativeMethod method = DerivativeMethod::finite_difference);

// F_q over a time grid; collapsed times yield std::nullopt.  Grid points are
// independent work items.
std::vector<std::optional<QfiPoint>> qfi_curve(
    const env::ModelSpec& spec, const std::vector<double>& times, const ParamSelector& sel,
    bool correlated, DerivativeMethod method = DerivativeMethod::finite_difference,
    int threads = 1);

} // namespace spinprobe::qfi
