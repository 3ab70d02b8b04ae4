// dynamics.cpp — Bloch propagation, decoherence function, reduced density matrix

#include "spinprobe/dynamics.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include "spinprobe/parallel.hpp"

namespace spinprobe::dyn {

Eigen::Matrix3d rotation_matrix(const Eigen::Vector3d& axis, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Eigen::Matrix3d cross;
    cross << 0.0, -axis.z(), axis.y(),
             axis.z(), 0.0, -axis.x(),
             -axis.y(), axis.x(), 0.0;
    return c * Eigen::Matrix3d::Identity() + s * cross +
           (1.0 - c) * (axis * axis.transpose());
}

Eigen::Matrix3d ClassPropagator::matrix() const { return rotation_matrix(axis, angle); }

ClassPropagator class_propagator(const env::ClassQuantities& q, double t) {
    ClassPropagator prop;
    if (q.eta == 0.0) return prop; // trivial sector: identity rotation
    prop.axis = Eigen::Vector3d(q.delta, 0.0, q.eps_tilde) / (2.0 * q.eta);
    prop.angle = 2.0 * q.eta * t;
    return prop;
}

namespace {

// gamma/omega with the collapse-tolerant convention used by BlochState.
void fill_gamma_phase(BlochState& state) {
    const double pt2 = state.p.x() * state.p.x() + state.p.y() * state.p.y();
    if (pt2 < kCoherenceFloor) {
        state.gamma = std::numeric_limits<double>::infinity();
        state.omega_phase = 0.0;
        return;
    }
    state.gamma = -0.5 * std::log(pt2);
    state.omega_phase = std::atan2(state.p.y(), state.p.x());
}

} // namespace

BlochState bloch_at(const env::ClassTable& table, double t, bool correlated) {
    const auto& log_w = correlated ? table.log_w_corr : table.log_w_unc;
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < table.quantities.size(); ++i) {
        const double w = std::exp(log_w[i]);
        if (w == 0.0) continue;
        p += w * (class_propagator(table.quantities[i], t).matrix() * table.spec.preparation);
    }
    BlochState state;
    state.t = t;
    state.p = p;
    fill_gamma_phase(state);
    return state;
}

std::vector<BlochState> bloch_curve(const env::ClassTable& table,
                                    const std::vector<double>& times, bool correlated,
                                    int threads) {
    std::vector<BlochState> out(times.size());
    par::parallel_for(times.size(), threads,
                      [&](std::size_t i) { out[i] = bloch_at(table, times[i], correlated); });
    return out;
}

std::pair<double, double> gamma_and_phase(const Eigen::Vector3d& p) {
    const double pt2 = p.x() * p.x() + p.y() * p.y();
    if (pt2 < kCoherenceFloor) throw CoherenceCollapse(0.0);
    return {-0.5 * std::log(pt2), std::atan2(p.y(), p.x())};
}

ReducedDensity reduced_density(const BlochState& state) {
    using namespace std::complex_literals;
    const Eigen::Vector3d& p = state.p;
    ReducedDensity out;
    // The complements are written as 1 - a so the trace and the eigenvalue
    // sum are exactly 1.0 in floating point.
    const double rho00 = 0.5 * (1.0 + p.z());
    out.rho << rho00, 0.5 * (p.x() - 1i * p.y()),
               0.5 * (p.x() + 1i * p.y()), 1.0 - rho00;

    const double norm = p.norm();
    const double upper = 0.5 * (1.0 + norm);
    out.eigenvalues = {upper, 1.0 - upper};

    // Eigenvectors of n.sigma for the unit direction n = p/|p| via stable
    // half-angle forms; |p| = 0 degenerates to the z basis.
    Eigen::Vector3d n = norm > 0.0 ? Eigen::Vector3d(p / norm) : Eigen::Vector3d::UnitZ();
    const double cos_half = std::sqrt(std::max(0.0, 0.5 * (1.0 + n.z())));
    const double sin_half = std::sqrt(std::max(0.0, 0.5 * (1.0 - n.z())));
    const double nt = std::hypot(n.x(), n.y());
    const std::complex<double> phase =
        nt > 0.0 ? std::complex<double>(n.x() / nt, n.y() / nt) : 1.0;
    out.eigenvectors[0] = Eigen::Vector2cd(cos_half, phase * sin_half);
    out.eigenvectors[1] = Eigen::Vector2cd(-std::conj(phase) * sin_half, cos_half);
    return out;
}

} // namespace spinprobe::dyn
