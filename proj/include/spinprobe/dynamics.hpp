// dynamics.hpp — Exact probe Bloch-vector evolution under per-class propagators
//
// Within one bath class the probe evolves unitarily under the shifted 2x2
// Hamiltonian (splitting eps_tilde_n, tunneling delta), which rotates the
// Bloch vector about the unit axis (delta, 0, eps_tilde_n)/(2 eta_n) by angle
// 2 eta_n t.  The reduced probe state is the class-weighted average of these
// rigid rotations; mixing rotations of different speed shrinks the transverse
// component, which is the dephasing signal Gamma(t).

#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "spinprobe/model.hpp"

namespace spinprobe::dyn {

// Thrown when the transverse coherence underflows and Gamma is undefined.
class CoherenceCollapse : public std::runtime_error {
public:
    explicit CoherenceCollapse(double t)
        : std::runtime_error("transverse coherence collapsed (p_x^2 + p_y^2 < 1e-300)"),
          time(t) {}
    double time;
};

// Transverse norms below this are treated as a coherence collapse.
inline constexpr double kCoherenceFloor = 1e-300;

struct BlochState {
    double t{0.0};
    Eigen::Vector3d p{Eigen::Vector3d::Zero()};
    double gamma{0.0};       // -0.5*ln(p_x^2 + p_y^2); +inf at a coherence collapse
    double omega_phase{0.0}; // atan2(p_y, p_x) in (-pi, pi]; 0 at a collapse
};

// Rotation action of one class propagator on the Bloch vector.
struct ClassPropagator {
    Eigen::Vector3d axis{Eigen::Vector3d::UnitZ()}; // unit rotation axis
    double angle{0.0};                              // 2 eta_n t

    Eigen::Matrix3d matrix() const; // Rodrigues form; orthogonal, det = 1
};

// Axis-angle propagator for one class at time t.  eta = 0 (trivial sector
// Hamiltonian) yields the identity rotation.
ClassPropagator class_propagator(const env::ClassQuantities& q, double t);

// Rodrigues rotation matrix about a unit axis.
Eigen::Matrix3d rotation_matrix(const Eigen::Vector3d& axis, double angle);

// Probe Bloch state at time t for the correlated (A_n c_n / Z~) or
// uncorrelated (c_n / Z_E) weighting.  gamma/omega_phase are filled with the
// collapse-tolerant convention documented on BlochState.
BlochState bloch_at(const env::ClassTable& table, double t, bool correlated);

// bloch_at over a time grid; grid points are independent work items.
std::vector<BlochState> bloch_curve(const env::ClassTable& table,
                                    const std::vector<double>& times, bool correlated,
                                    int threads = 1);

// (gamma, omega_phase) from a Bloch vector.  Throws CoherenceCollapse when
// p_x^2 + p_y^2 < kCoherenceFloor; QFI grids must exclude such times.
std::pair<double, double> gamma_and_phase(const Eigen::Vector3d& p);

// The probe density matrix 0.5*(I + p.sigma) with its spectral decomposition.
struct ReducedDensity {
    Eigen::Matrix2cd rho;
    std::array<double, 2> eigenvalues;            // 0.5*(1 +/- |p|), descending
    std::array<Eigen::Vector2cd, 2> eigenvectors; // orthonormal, paired by index
};

ReducedDensity reduced_density(const BlochState& state);

} // namespace spinprobe::dyn
