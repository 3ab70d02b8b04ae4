// oracles.cpp — Independent brute-force references for property tests

#include "spinprobe/oracles.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace spinprobe::oracles {

namespace {

using complexd = std::complex<double>;
using Matrix2cd = Eigen::Matrix2cd;
using Vector2cd = Eigen::Vector2cd;

constexpr int kMaxBruteForceSpins = 20;
constexpr int kMaxDenseSpins = 10;

void check_brute_force_size(const env::ModelSpec& spec, int cap) {
    if (spec.n_spins > cap) {
        throw std::invalid_argument("oracle limited to " + std::to_string(cap) + " bath spins");
    }
}

// Spin of site i in configuration mask: bit set means s_i = -1.
int spin_at(unsigned mask, int i) { return (mask >> i) & 1u ? -1 : +1; }

// Probe ket for a unit Bloch vector: |psi> = cos(t/2)|0> + e^{i phi} sin(t/2)|1>.
Vector2cd ket_from_bloch(const Eigen::Vector3d& p) {
    const double z = std::min(1.0, std::max(-1.0, p.z()));
    const double cos_half = std::sqrt(0.5 * (1.0 + z));
    const double sin_half = std::sqrt(0.5 * (1.0 - z));
    const double pt = std::hypot(p.x(), p.y());
    complexd phase{1.0, 0.0};
    if (pt > 0.0) {
        phase = complexd{p.x() / pt, p.y() / pt};
    }
    Vector2cd psi;
    psi << complexd{cos_half, 0.0}, phase * sin_half;
    return psi;
}

// Sector Hamiltonian (eps_tilde sigma_z + delta sigma_x) / 2 as a dense matrix.
Matrix2cd sector_hamiltonian(double eps_tilde, double delta) {
    Matrix2cd h;
    h << complexd{0.5 * eps_tilde, 0.0}, complexd{0.5 * delta, 0.0},
        complexd{0.5 * delta, 0.0}, complexd{-0.5 * eps_tilde, 0.0};
    return h;
}

// e^{-i H t} for a traceless 2x2 H with H^2 = eta^2 I.
Matrix2cd sector_unitary(const Matrix2cd& h, double eta, double t) {
    if (eta == 0.0) {
        return Matrix2cd::Identity();
    }
    const complexd minus_i{0.0, -1.0};
    return std::cos(eta * t) * Matrix2cd::Identity() +
           minus_i * (std::sin(eta * t) / eta) * h;
}

Eigen::Vector3d bloch_from_density(const Matrix2cd& rho) {
    Eigen::Vector3d p;
    p.x() = 2.0 * rho(1, 0).real();
    p.y() = 2.0 * rho(1, 0).imag();
    p.z() = (rho(0, 0) - rho(1, 1)).real();
    return p;
}

struct ConfigGeometry {
    double omega_n;
    double alpha_n;
    int m;
};

ConfigGeometry config_geometry(const env::ModelSpec& spec, unsigned mask) {
    ConfigGeometry geo{0.0, 0.0, 0};
    const int n = spec.n_spins;
    for (int i = 0; i < n; ++i) {
        const int s = spin_at(mask, i);
        geo.m += s;
        geo.omega_n += spec.site_omega(i) * s;
    }
    const int bonds = spec.chain_boundary == env::Boundary::periodic ? n : n - 1;
    for (int b = 0; b < bonds; ++b) {
        geo.alpha_n += spec.bond_chi(b) * spin_at(mask, b) * spin_at(mask, (b + 1) % n);
    }
    return geo;
}

} // namespace

BruteForceState brute_force_state(const env::ModelSpec& spec) {
    spec.validate();
    check_brute_force_size(spec, kMaxBruteForceSpins);
    const double beta = spec.beta();
    const unsigned total = 1u << spec.n_spins;

    BruteForceState state;
    state.configs.reserve(total);
    for (unsigned mask = 0; mask < total; ++mask) {
        const ConfigGeometry geo = config_geometry(spec, mask);
        BruteForceState::Config cfg;
        cfg.omega_n = geo.omega_n;
        cfg.alpha_n = geo.alpha_n;
        cfg.e_tilde_n = spec.epsilon + spec.g * geo.m;
        cfg.weight_unc = std::exp(-beta * (0.5 * geo.omega_n + geo.alpha_n));
        cfg.weight_corr =
            cfg.weight_unc *
            a_factor_oracle(cfg.e_tilde_n, spec.delta, spec.preparation, beta);
        state.z_env += cfg.weight_unc;
        state.z_corr += cfg.weight_corr;
        state.configs.push_back(cfg);
    }
    return state;
}

Eigen::Vector3d brute_force_bloch(const env::ModelSpec& spec, double t, bool correlated) {
    const BruteForceState state = brute_force_state(spec);
    const Vector2cd psi = ket_from_bloch(spec.preparation);
    const Matrix2cd rho0 = psi * psi.adjoint();
    const double norm = correlated ? state.z_corr : state.z_env;

    Matrix2cd rho = Matrix2cd::Zero();
    for (const auto& cfg : state.configs) {
        const double w = (correlated ? cfg.weight_corr : cfg.weight_unc) / norm;
        const Matrix2cd h = sector_hamiltonian(cfg.e_tilde_n, spec.delta);
        const double eta = 0.5 * std::hypot(cfg.e_tilde_n, spec.delta);
        const Matrix2cd u = sector_unitary(h, eta, t);
        rho += w * (u * rho0 * u.adjoint());
    }
    return bloch_from_density(rho);
}

double a_factor_oracle(double eps_tilde, double delta, const Eigen::Vector3d& preparation,
                       double beta) {
    const Matrix2cd h = sector_hamiltonian(eps_tilde, delta);
    Eigen::SelfAdjointEigenSolver<Matrix2cd> es(h);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("a_factor_oracle: eigendecomposition failed");
    }
    const Vector2cd psi = ket_from_bloch(preparation);
    double value = 0.0;
    for (int k = 0; k < 2; ++k) {
        const complexd overlap = es.eigenvectors().col(k).adjoint() * psi;
        value += std::exp(-beta * es.eigenvalues()(k)) * std::norm(overlap);
    }
    return value;
}

double qfi_finite_difference_oracle(const env::ModelSpec& spec, double t,
                                    const qfi::ParamSelector& sel, bool correlated) {
    check_brute_force_size(spec, kMaxBruteForceSpins);
    const double x = sel.value;
    double h = std::max(1e-5 * std::abs(x), 1e-7);
    if (sel.which == qfi::Parameter::temperature && x - h <= 0.0) {
        h *= 0.1;
        if (x - h <= 0.0) {
            throw std::domain_error("qfi_finite_difference_oracle: temperature too close to zero");
        }
    }

    const auto density_at = [&](double xv) {
        const env::ModelSpec shifted = qfi::with_parameter(spec, {sel.which, xv});
        const Eigen::Vector3d p = brute_force_bloch(shifted, t, correlated);
        Matrix2cd rho;
        rho << complexd{0.5 * (1.0 + p.z()), 0.0},
            complexd{0.5 * p.x(), -0.5 * p.y()},
            complexd{0.5 * p.x(), 0.5 * p.y()},
            complexd{0.5 * (1.0 - p.z()), 0.0};
        return rho;
    };

    // Central difference with one Richardson level, written out independently.
    const Matrix2cd d_wide = (density_at(x + h) - density_at(x - h)) / (2.0 * h);
    const Matrix2cd d_half = (density_at(x + 0.5 * h) - density_at(x - 0.5 * h)) / h;
    const Matrix2cd drho = (4.0 * d_half - d_wide) / 3.0;

    const Matrix2cd rho = density_at(x);
    Eigen::SelfAdjointEigenSolver<Matrix2cd> es(rho);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("qfi_finite_difference_oracle: eigendecomposition failed");
    }
    double fq = 0.0;
    for (int n = 0; n < 2; ++n) {
        for (int m = 0; m < 2; ++m) {
            const double weight = es.eigenvalues()(n) + es.eigenvalues()(m);
            if (weight <= 1e-12) {
                continue;
            }
            const complexd elem =
                es.eigenvectors().col(n).adjoint() * drho * es.eigenvectors().col(m);
            fq += 2.0 * std::norm(elem) / weight;
        }
    }
    return fq;
}

Eigen::Vector3d dense_bloch(const env::ModelSpec& spec, double t, bool correlated) {
    spec.validate();
    check_brute_force_size(spec, kMaxDenseSpins);
    const int n = spec.n_spins;
    const int bath_dim = 1 << n;
    const int dim = 2 * bath_dim;
    const double beta = spec.beta();

    using MatrixXcd = Eigen::MatrixXcd;

    // Joint basis |probe> (x) |bath>, probe index slow: index = s * bath_dim + mask.
    MatrixXcd ham = MatrixXcd::Zero(dim, dim);
    for (int s = 0; s < 2; ++s) {
        const double sz = s == 0 ? +1.0 : -1.0;
        for (int mask = 0; mask < bath_dim; ++mask) {
            const ConfigGeometry geo = config_geometry(spec, static_cast<unsigned>(mask));
            const int idx = s * bath_dim + mask;
            // Probe splitting, bath energies, and the dephasing coupling are
            // all diagonal in this basis.
            ham(idx, idx) += 0.5 * spec.epsilon * sz;
            ham(idx, idx) += 0.5 * geo.omega_n + geo.alpha_n;
            ham(idx, idx) += 0.5 * sz * spec.g * geo.m;
            // Probe tunneling flips the probe index only.
            const int flipped = (1 - s) * bath_dim + mask;
            ham(flipped, idx) += 0.5 * spec.delta;
        }
    }

    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(ham);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("dense_bloch: eigendecomposition failed");
    }
    const MatrixXcd& vecs = es.eigenvectors();
    const Eigen::VectorXd& vals = es.eigenvalues();

    const Vector2cd psi = ket_from_bloch(spec.preparation);

    MatrixXcd bath_rho = MatrixXcd::Zero(bath_dim, bath_dim);
    if (correlated) {
        // Probe-projected Gibbs state: B = <psi| e^{-beta H} |psi>, a bath
        // operator obtained by contracting the probe indices of the joint
        // Gibbs matrix.
        MatrixXcd gibbs = MatrixXcd::Zero(dim, dim);
        for (int k = 0; k < dim; ++k) {
            gibbs += std::exp(-beta * vals(k)) * (vecs.col(k) * vecs.col(k).adjoint());
        }
        for (int s = 0; s < 2; ++s) {
            for (int sp = 0; sp < 2; ++sp) {
                const complexd coeff = std::conj(psi(s)) * psi(sp);
                bath_rho += coeff * gibbs.block(s * bath_dim, sp * bath_dim, bath_dim, bath_dim);
            }
        }
    } else {
        for (int mask = 0; mask < bath_dim; ++mask) {
            const ConfigGeometry geo = config_geometry(spec, static_cast<unsigned>(mask));
            bath_rho(mask, mask) = std::exp(-beta * (0.5 * geo.omega_n + geo.alpha_n));
        }
    }
    bath_rho /= bath_rho.trace();

    MatrixXcd rho0 = MatrixXcd::Zero(dim, dim);
    for (int s = 0; s < 2; ++s) {
        for (int sp = 0; sp < 2; ++sp) {
            rho0.block(s * bath_dim, sp * bath_dim, bath_dim, bath_dim) =
                psi(s) * std::conj(psi(sp)) * bath_rho;
        }
    }

    // U = e^{-i H t} from the spectral decomposition.
    MatrixXcd evolved_rows = MatrixXcd::Zero(dim, dim);
    {
        Eigen::VectorXcd phases(dim);
        for (int k = 0; k < dim; ++k) {
            phases(k) = std::exp(complexd{0.0, -vals(k) * t});
        }
        const MatrixXcd u = vecs * phases.asDiagonal() * vecs.adjoint();
        evolved_rows = u * rho0 * u.adjoint();
    }

    Matrix2cd probe = Matrix2cd::Zero();
    for (int s = 0; s < 2; ++s) {
        for (int sp = 0; sp < 2; ++sp) {
            probe(s, sp) =
                evolved_rows.block(s * bath_dim, sp * bath_dim, bath_dim, bath_dim).trace();
        }
    }
    return bloch_from_density(probe);
}

} // namespace spinprobe::oracles
