// model.cpp — Class enumeration, correlation factors, and Gibbs weights

#include "spinprobe/model.hpp"

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>

#include "spinprobe/numerics.hpp"

namespace spinprobe::env {

namespace {

constexpr int kMaxSpinsUniform = 64;       // exact 128-bit multiplicities
constexpr int kMaxSpinsHeterogeneous = 20; // full 2^N enumeration

double log_count(exact_count n) {
    return static_cast<double>(std::log(static_cast<long double>(n)));
}

// C(n, k) exactly; n <= 64 keeps every intermediate within 128 bits.
exact_count binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    exact_count result = 1;
    for (int i = 1; i <= k; ++i) {
        result = result * static_cast<exact_count>(n - k + i) / static_cast<exact_count>(i);
    }
    return result;
}

// Transfer dynamic program over (first spin, last spin, m, a); the first-spin
// coordinate only matters for the closing bond of a periodic chain.
std::map<std::array<int, 2>, exact_count> count_by_class(int n, Boundary boundary) {
    std::map<std::array<int, 4>, exact_count> states; // {first, last, m, a}
    for (int s : {+1, -1}) states[{s, s, s, 0}] = 1;
    for (int site = 2; site <= n; ++site) {
        std::map<std::array<int, 4>, exact_count> next;
        for (const auto& [key, count] : states) {
            const auto [first, last, m, a] = std::array{key[0], key[1], key[2], key[3]};
            for (int s : {+1, -1}) next[{first, s, m + s, a + last * s}] += count;
        }
        states = std::move(next);
    }
    std::map<std::array<int, 2>, exact_count> classes;
    for (const auto& [key, count] : states) {
        int a = key[3];
        if (boundary == Boundary::periodic && n > 1) a += key[1] * key[0];
        classes[{key[2], a}] += count;
    }
    return classes;
}

std::vector<ConfigClass> enumerate_uniform(const ModelSpec& spec) {
    std::vector<ConfigClass> out;
    if (spec.chi == 0.0) {
        // Alignment never enters the weights: classes collapse to magnetization
        // alone with binomial multiplicity.
        out.reserve(spec.n_spins + 1);
        for (int m = -spec.n_spins; m <= spec.n_spins; m += 2) {
            ConfigClass cls;
            cls.m = m;
            cls.a = 0;
            cls.multiplicity = binomial(spec.n_spins, (spec.n_spins - m) / 2);
            cls.log_multiplicity = log_count(cls.multiplicity);
            cls.omega_n = spec.omega * m;
            cls.alpha_n = 0.0;
            cls.e_tilde_n = spec.epsilon + spec.g * m;
            out.push_back(cls);
        }
        return out;
    }
    for (const auto& [key, count] : count_by_class(spec.n_spins, spec.chain_boundary)) {
        ConfigClass cls;
        cls.m = key[0];
        cls.a = key[1];
        cls.multiplicity = count;
        cls.log_multiplicity = log_count(count);
        cls.omega_n = spec.omega * cls.m;
        cls.alpha_n = spec.chi * cls.a;
        cls.e_tilde_n = spec.epsilon + spec.g * cls.m;
        out.push_back(cls);
    }
    return out;
}

std::vector<ConfigClass> enumerate_heterogeneous(const ModelSpec& spec) {
    const int n = spec.n_spins;
    std::vector<double> omegas(n, spec.omega);
    if (!spec.omega_list.empty()) omegas = spec.omega_list;
    const int bonds = (spec.chain_boundary == Boundary::open) ? n - 1 : n;
    std::vector<double> chis(bonds, spec.chi);
    if (!spec.chi_list.empty()) chis = spec.chi_list;

    std::vector<ConfigClass> out;
    out.reserve(std::size_t{1} << n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        auto spin = [&](int i) { return (mask >> i) & 1 ? -1 : +1; };
        ConfigClass cls;
        for (int i = 0; i < n; ++i) {
            cls.m += spin(i);
            cls.omega_n += omegas[i] * spin(i);
        }
        for (int b = 0; b < bonds; ++b) {
            const int s2 = spin((b + 1) % n);
            cls.a += spin(b) * s2;
            cls.alpha_n += chis[b] * spin(b) * s2;
        }
        cls.e_tilde_n = spec.epsilon + spec.g * cls.m;
        out.push_back(cls);
    }
    std::sort(out.begin(), out.end(), [](const ConfigClass& x, const ConfigClass& y) {
        return std::tie(x.m, x.a, x.omega_n, x.alpha_n) <
               std::tie(y.m, y.a, y.omega_n, y.alpha_n);
    });
    return out;
}

} // namespace

void ModelSpec::validate() const {
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        throw std::invalid_argument("temperature must be a positive finite number");
    }
    if (n_spins < 1) throw std::invalid_argument("n_spins must be >= 1");
    const int cap = heterogeneous() ? kMaxSpinsHeterogeneous : kMaxSpinsUniform;
    if (n_spins > cap) {
        throw std::invalid_argument("n_spins exceeds the supported maximum (" +
                                    std::to_string(cap) +
                                    (heterogeneous() ? " for heterogeneous chains)" : ")"));
    }
    if (chi < 0.0) throw std::invalid_argument("chi must be >= 0");
    if (std::abs(preparation.norm() - 1.0) > 1e-12) {
        throw std::invalid_argument("preparation must be a unit vector (|p| = 1 within 1e-12)");
    }
    if (!omega_list.empty() && static_cast<int>(omega_list.size()) != n_spins) {
        throw std::invalid_argument("omega_list must have n_spins entries");
    }
    const int bonds = (chain_boundary == Boundary::open) ? n_spins - 1 : n_spins;
    if (!chi_list.empty() && static_cast<int>(chi_list.size()) != bonds) {
        throw std::invalid_argument("chi_list must have one entry per bond (" +
                                    std::to_string(bonds) + ")");
    }
    for (double w : omega_list) {
        if (!std::isfinite(w)) throw std::invalid_argument("omega_list entries must be finite");
    }
    for (double c : chi_list) {
        if (!std::isfinite(c) || c < 0.0) {
            throw std::invalid_argument("chi_list entries must be finite and >= 0");
        }
    }
}

std::vector<ConfigClass> enumerate_classes(const ModelSpec& spec) {
    spec.validate();
    return spec.heterogeneous() ? enumerate_heterogeneous(spec) : enumerate_uniform(spec);
}

double log_a_factor(double eta, double h, double beta) {
    if (beta < 0.0) throw std::invalid_argument("beta must be >= 0");
    // beta = 0 (infinite temperature) and eta = 0 (trivial sector Hamiltonian)
    // both give A = 1 identically; return exactly 0 rather than rounding noise.
    if (beta == 0.0 || eta == 0.0) return 0.0;
    // A = cosh(x) - sinh(x) r = [e^x (1-r) + e^{-x} (1+r)] / 2 with x = beta*eta,
    // r = h/eta in [-1, 1] (clamped against rounding), evaluated in log space.
    const double x = beta * eta;
    const double r = std::clamp(h / eta, -1.0, 1.0);
    return num::logsumexp(x + std::log1p(-r), -x + std::log1p(r)) - std::numbers::ln2;
}

ClassQuantities compute_class_quantities(const ConfigClass& cls, const ModelSpec& spec) {
    ClassQuantities q;
    q.eps_tilde = spec.epsilon + spec.g * cls.m;
    q.delta = spec.delta;
    q.eta = 0.5 * std::hypot(q.eps_tilde, spec.delta);
    q.h = 0.5 * (q.eps_tilde * spec.preparation.z() + spec.delta * spec.preparation.x());
    q.log_c = -spec.beta() * (0.5 * cls.omega_n + cls.alpha_n);
    q.log_a = log_a_factor(q.eta, q.h, spec.beta());
    return q;
}

double compute_a_factor(const ClassQuantities& q, const Eigen::Vector3d& preparation,
                        double beta) {
    // h is recomputed from the given preparation so the call is self-contained.
    const double h = 0.5 * (q.eps_tilde * preparation.z() + q.delta * preparation.x());
    return std::exp(log_a_factor(q.eta, h, beta));
}

PartitionFunctions partition_functions(const std::vector<ConfigClass>& classes,
                                       const ModelSpec& spec) {
    std::vector<double> unc(classes.size()), corr(classes.size());
    for (std::size_t i = 0; i < classes.size(); ++i) {
        const ClassQuantities q = compute_class_quantities(classes[i], spec);
        unc[i] = classes[i].log_multiplicity + q.log_c;
        corr[i] = unc[i] + q.log_a;
    }
    return {num::logsumexp(unc), num::logsumexp(corr)};
}

ClassTable build_class_table(const ModelSpec& spec) {
    ClassTable table;
    table.spec = spec;
    table.classes = enumerate_classes(spec);
    table.quantities.reserve(table.classes.size());
    table.log_w_unc.resize(table.classes.size());
    table.log_w_corr.resize(table.classes.size());
    for (std::size_t i = 0; i < table.classes.size(); ++i) {
        table.quantities.push_back(compute_class_quantities(table.classes[i], spec));
        table.log_w_unc[i] = table.classes[i].log_multiplicity + table.quantities[i].log_c;
        table.log_w_corr[i] = table.log_w_unc[i] + table.quantities[i].log_a;
    }
    table.log_z_env = num::logsumexp(table.log_w_unc);
    table.log_z_corr = num::logsumexp(table.log_w_corr);
    for (std::size_t i = 0; i < table.classes.size(); ++i) {
        table.log_w_unc[i] -= table.log_z_env;
        table.log_w_corr[i] -= table.log_z_corr;
    }
    return table;
}

} // namespace spinprobe::env
