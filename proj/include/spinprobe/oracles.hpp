// oracles.hpp — Independent brute-force references for property tests
//
// Everything here re-derives the physics from scratch: configurations are
// enumerated one by one (no degeneracy classes), probe unitaries are built as
// explicit 2x2 matrices (no Bloch rotations), and the dense oracle works in
// the full 2^{N+1} joint Hilbert space (no per-sector structure at all).
// Shared code with the main path is limited to primitive scalar math — the
// duplication is the point.

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "spinprobe/model.hpp"
#include "spinprobe/qfi.hpp"

namespace spinprobe::oracles {

// Full 2^N configuration list with unnormalized weights (linear space; valid
// while beta * eta stays below ~700, ample for test regimes).
struct BruteForceState {
    struct Config {
        double omega_n{0.0};
        double alpha_n{0.0};
        double e_tilde_n{0.0};
        double weight_unc{0.0};  // c_n
        double weight_corr{0.0}; // A_n c_n, A_n by 2x2 eigendecomposition
    };
    std::vector<Config> configs;
    double z_env{0.0};
    double z_corr{0.0};
};

// N <= 20 enforced on every operation in this module.
BruteForceState brute_force_state(const env::ModelSpec& spec);

// Probe Bloch vector by summing explicitly evolved 2x2 density matrices over
// all configurations; unitaries use e^{-iHt} = cos(eta t) I - i sin(eta t) H/eta.
Eigen::Vector3d brute_force_bloch(const env::ModelSpec& spec, double t, bool correlated);

// <psi| e^{-beta H} |psi> for the 2x2 sector Hamiltonian with splitting
// eps_tilde and tunneling delta, by eigendecomposition (adjudicates the
// hyperbolic form used by the main path).
double a_factor_oracle(double eps_tilde, double delta, const Eigen::Vector3d& preparation,
                       double beta);

// End-to-end numeric QFI: finite-difference d rho / dx over brute-force
// states, spectral QFI via a dense eigensolver.  Independent of every closed
// form in the main path.
double qfi_finite_difference_oracle(const env::ModelSpec& spec, double t,
                                    const qfi::ParamSelector& sel, bool correlated);

// Fully dense joint-space oracle (N <= 10): builds the 2^{N+1} Hamiltonian,
// prepares the exact correlated (probe-projected Gibbs) or uncorrelated
// (product Gibbs) initial state, evolves with the dense matrix exponential,
// and partial-traces the bath out.  The strongest conceptual cross-check.
Eigen::Vector3d dense_bloch(const env::ModelSpec& spec, double t, bool correlated);

} // namespace spinprobe::oracles
