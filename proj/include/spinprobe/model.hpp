// model.hpp — Probe + spin-bath model: parameters, degeneracy classes, Gibbs weights
//
// A single qubit (splitting epsilon, tunneling delta) dephases against a chain
// of N spin-1/2 bath sites (level spacings omega_i, nearest-neighbour Ising
// couplings chi_i) through a sigma_z ⊗ sigma_z coupling of strength g.  All
// bath operators commute, so the 2^N bath configurations act on the probe only
// through two integers per configuration: the magnetization m = Σ s_i and the
// bond alignment a = Σ s_i s_{i+1} (s_i = ±1).  Configurations sharing (m, a)
// are dynamically identical and are collapsed into one weighted class, which
// turns the exponential configuration sum into an O(N²) class sum for uniform
// chains.  Units: ħ = k_B = 1.

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace spinprobe::env {

enum class Boundary { open, periodic };

// Exact class multiplicities: counts fit 128 bits comfortably for the
// supported chain lengths (total mass is 2^N).
using exact_count = unsigned __int128;

struct ModelSpec {
    double epsilon{2.0};          // probe level spacing
    double delta{1.0};            // probe tunneling amplitude
    int n_spins{10};              // bath size N
    double omega{1.0};            // uniform bath level spacing
    double chi{0.0};              // uniform nearest-neighbour bath coupling (>= 0)
    double g{0.01};               // probe-bath coupling strength
    double temperature{1.0};      // bath temperature T (> 0); beta = 1/T
    Eigen::Vector3d preparation{1.0, 0.0, 0.0}; // probe Bloch vector after preparation
    Boundary chain_boundary{Boundary::open};
    std::vector<double> omega_list; // per-site spacings; empty = uniform `omega`
    std::vector<double> chi_list;   // per-bond couplings; empty = uniform `chi`

    double beta() const { return 1.0 / temperature; }
    bool heterogeneous() const { return !omega_list.empty() || !chi_list.empty(); }
    double site_omega(int i) const {
        return omega_list.empty() ? omega : omega_list[static_cast<std::size_t>(i)];
    }
    double bond_chi(int b) const {
        return chi_list.empty() ? chi : chi_list[static_cast<std::size_t>(b)];
    }

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

// One degeneracy class of bath configurations.
struct ConfigClass {
    int m{0};                  // magnetization Σ s_i
    int a{0};                  // bond alignment Σ s_i s_{i+1} (0 when unused, e.g. chi = 0)
    exact_count multiplicity{1};
    double log_multiplicity{0.0};
    double omega_n{0.0};       // Σ omega_i s_i  (= omega * m for uniform chains)
    double alpha_n{0.0};       // Σ chi_i s_i s_{i+1}  (= chi * a for uniform chains)
    double e_tilde_n{0.0};     // shifted probe splitting epsilon + g * m
};

// Per-class derived scalars entering the propagator and the Gibbs weights.
struct ClassQuantities {
    double eps_tilde{0.0};     // shifted probe splitting epsilon + g*m
    double delta{0.0};         // probe tunneling (copied from the spec; enters eta and h)
    double eta{0.0};           // half Rabi frequency, 0.5*sqrt(eps_tilde² + delta²)
    double h{0.0};             // probe energy in this sector, (eps_tilde*p_z0 + delta*p_x0)/2
    double log_c{0.0};         // log Gibbs factor, -beta*(omega_n/2 + alpha_n)
    double log_a{0.0};         // log of the correlation factor A_n

    // A_n itself; may overflow to +inf for very large beta*eta (use log_a then).
    double a_factor() const { return std::exp(log_a); }
};

// Everything downstream modules need, computed once per parameter point:
// classes, per-class scalars, and normalized log-weights for both pipelines.
struct ClassTable {
    ModelSpec spec;
    std::vector<ConfigClass> classes;
    std::vector<ClassQuantities> quantities;
    std::vector<double> log_w_unc;  // log( mult * c_n / Z_E )
    std::vector<double> log_w_corr; // log( mult * A_n c_n / Z_corr )
    double log_z_env{0.0};          // log Z_E  = log Σ mult * c_n
    double log_z_corr{0.0};         // log Z~   = log Σ mult * A_n c_n
};

// All (m, a) classes with nonzero multiplicity.  Uniform chains use a transfer
// dynamic program over (last spin, m, a); heterogeneous chains (omega_list or
// chi_list set) enumerate all 2^N configurations and return one class each.
// Deterministic order: ascending (m, a).
std::vector<ConfigClass> enumerate_classes(const ModelSpec& spec);

// eps_tilde, eta, h, log_c, log_a for one class.
ClassQuantities compute_class_quantities(const ConfigClass& cls, const ModelSpec& spec);

// Correlation factor A_n = <psi| exp(-beta H~_n) |psi> for the 2x2 sector
// Hamiltonian H~_n with splitting eps_tilde and tunneling delta:
//   A_n = cosh(beta eta) - sinh(beta eta) * h / eta,
// evaluated in log space (beta*eta can exceed 700).  h = <psi|H~_n|psi> obeys
// |h| <= eta, so A_n > 0 always; beta = 0 returns exactly 0 (A_n = 1).
double log_a_factor(double eta, double h, double beta);

// Spec-level wrapper: h from the preparation vector.
double compute_a_factor(const ClassQuantities& q, const Eigen::Vector3d& preparation,
                        double beta);

struct PartitionFunctions {
    double log_z_env;  // uncorrelated: log Σ mult * c_n
    double log_z_corr; // correlated:   log Σ mult * A_n c_n
};

PartitionFunctions partition_functions(const std::vector<ConfigClass>& classes,
                                       const ModelSpec& spec);

// Validates the spec and assembles the full table (classes, quantities,
// normalized weights, partition functions).
ClassTable build_class_table(const ModelSpec& spec);

} // namespace spinprobe::env
