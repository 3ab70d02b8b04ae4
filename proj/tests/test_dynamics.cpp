// test_dynamics.cpp — propagators, Bloch curves, dephasing factor, density matrices

#include <cmath>
#include <limits>
#include <random>

#include <doctest.h>

#include "spinprobe/dynamics.hpp"
#include "spinprobe/model.hpp"
#include "spinprobe/oracles.hpp"

using namespace spinprobe;

namespace {

env::ModelSpec random_spec(std::mt19937& rng, int n_spins) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    env::ModelSpec spec;
    spec.n_spins = n_spins;
    spec.epsilon = 0.5 + 3.0 * unit(rng);
    spec.delta = 0.25 + 2.0 * unit(rng);
    spec.omega = 0.5 + 1.5 * unit(rng);
    spec.chi = 0.5 * unit(rng);
    spec.g = 0.02 + 0.8 * unit(rng);
    spec.temperature = 0.3 + 2.5 * unit(rng);
    return spec;
}

} // namespace

TEST_SUITE_BEGIN("dynamics");

TEST_CASE("class propagators are proper rotations") {
    std::mt19937 rng(11u);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int rep = 0; rep < 25; ++rep) {
        env::ConfigClass cls;
        cls.m = static_cast<int>(unit(rng) * 7) - 3;
        env::ModelSpec spec;
        spec.epsilon = -2.0 + 4.0 * unit(rng);
        spec.delta = -1.5 + 3.0 * unit(rng);
        spec.g = unit(rng);
        const env::ClassQuantities q = env::compute_class_quantities(cls, spec);
        const Eigen::Matrix3d r = dyn::class_propagator(q, 5.0 * unit(rng)).matrix();
        CHECK((r * r.transpose() - Eigen::Matrix3d::Identity()).norm() < 1e-12);
        CHECK(r.determinant() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("propagator entries follow the corrected axis-angle forms") {
    // R_xx = (delta^2 + eps_tilde^2 cos(theta)) / (4 eta^2), and the z-z entry
    // swaps the roles; both reduce to the axis-angle (Rodrigues) expression.
    std::mt19937 rng(12u);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int rep = 0; rep < 25; ++rep) {
        env::ConfigClass cls;
        env::ModelSpec spec;
        spec.epsilon = 0.2 + 3.0 * unit(rng);
        spec.delta = 0.2 + 2.0 * unit(rng);
        const env::ClassQuantities q = env::compute_class_quantities(cls, spec);
        const double t = 4.0 * unit(rng);
        const Eigen::Matrix3d r = dyn::class_propagator(q, t).matrix();
        const double four_eta2 = 4.0 * q.eta * q.eta;
        const double theta = 2.0 * q.eta * t;
        const double e2 = q.eps_tilde * q.eps_tilde;
        const double d2 = spec.delta * spec.delta;
        CHECK(r(0, 0) ==
              doctest::Approx((d2 + e2 * std::cos(theta)) / four_eta2).epsilon(1e-12));
        CHECK(r(2, 2) ==
              doctest::Approx((e2 + d2 * std::cos(theta)) / four_eta2).epsilon(1e-12));
    }
}

TEST_CASE("class-aggregated evolution equals brute-force configuration sums") {
    std::mt19937 rng(13u);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int rep = 0; rep < 10; ++rep) {
        const env::ModelSpec spec = random_spec(rng, 6);
        const env::ClassTable table = env::build_class_table(spec);
        const double t = 10.0 * unit(rng);
        for (const bool correlated : {true, false}) {
            const Eigen::Vector3d fast = dyn::bloch_at(table, t, correlated).p;
            const Eigen::Vector3d slow = oracles::brute_force_bloch(spec, t, correlated);
            CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("dephasing factor and phase at hand-computed points") {
    const auto [gamma, phase] = dyn::gamma_and_phase(Eigen::Vector3d(0.5, 0.0, 0.1));
    CHECK(gamma == doctest::Approx(std::log(2.0)).epsilon(1e-14)); // -0.5 ln(0.25)
    CHECK(phase == doctest::Approx(0.0).epsilon(1e-14));

    const auto [g2, p2] = dyn::gamma_and_phase(Eigen::Vector3d(-0.3, -0.3, 0.0));
    CHECK(p2 == doctest::Approx(-3.0 * std::acos(-1.0) / 4.0).epsilon(1e-14));
    CHECK(g2 == doctest::Approx(-0.5 * std::log(0.18)).epsilon(1e-14));
}

TEST_CASE("zero coupling and zero tunneling: free precession, no dephasing") {
    env::ModelSpec spec;
    spec.g = 0.0;
    spec.delta = 0.0;
    spec.n_spins = 6;
    const env::ClassTable table = env::build_class_table(spec);
    for (const double t : {0.0, 0.37, 2.0, 11.5, 20.0}) {
        for (const bool correlated : {true, false}) {
            const dyn::BlochState s = dyn::bloch_at(table, t, correlated);
            CHECK(std::abs(s.gamma) < 1e-14);
            CHECK(s.p.norm() == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(std::abs(s.p.z() - spec.preparation.z()) < 1e-14);
        }
    }
}

TEST_CASE("weak coupling at high temperature: pipelines coincide") {
    env::ModelSpec spec;
    spec.n_spins = 8;
    spec.g = 1e-4;
    spec.temperature = 1e3;
    const env::ClassTable table = env::build_class_table(spec);
    for (const double t : {0.5, 3.0, 9.0}) {
        const Eigen::Vector3d corr = dyn::bloch_at(table, t, true).p;
        const Eigen::Vector3d unc = dyn::bloch_at(table, t, false).p;
        CHECK((corr - unc).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("bloch_curve is deterministic across thread counts") {
    env::ModelSpec spec;
    spec.n_spins = 12;
    spec.chi = 0.2;
    spec.g = 0.3;
    const env::ClassTable table = env::build_class_table(spec);
    std::vector<double> times;
    for (int i = 0; i < 97; ++i) {
        times.push_back(0.01 + 0.2 * i);
    }
    const auto one = dyn::bloch_curve(table, times, true, 1);
    const auto four = dyn::bloch_curve(table, times, true, 4);
    REQUIRE(one.size() == four.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].p.x() == four[i].p.x()); // bitwise equality, not approximate
        CHECK(one[i].p.y() == four[i].p.y());
        CHECK(one[i].p.z() == four[i].p.z());
    }
}

TEST_CASE("coherence collapse convention") {
    CHECK_THROWS_AS((void)dyn::gamma_and_phase(Eigen::Vector3d(0.0, 0.0, 0.3)),
                    dyn::CoherenceCollapse);

    // With no tunneling, a z-axis preparation never develops transverse
    // coherence (the rotation axis is the z axis itself).
    env::ModelSpec spec;
    spec.n_spins = 4;
    spec.delta = 0.0;
    spec.preparation = Eigen::Vector3d(0.0, 0.0, 1.0);
    const env::ClassTable table = env::build_class_table(spec);
    const dyn::BlochState s = dyn::bloch_at(table, 1.0, true);
    CHECK(std::isinf(s.gamma));
    CHECK(s.omega_phase == 0.0);
}

TEST_CASE("reduced density matrix: exact trace and spectral pairing") {
    dyn::BlochState state;
    state.p = Eigen::Vector3d(0.0, 0.0, 0.6);
    dyn::ReducedDensity d = dyn::reduced_density(state);
    CHECK(d.rho.trace().real() == 1.0);
    CHECK(d.eigenvalues[0] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(d.eigenvalues[1] == doctest::Approx(0.2).epsilon(1e-15));

    std::mt19937 rng(14u);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        Eigen::Vector3d p(unit(rng), unit(rng), unit(rng));
        if (p.norm() > 1.0) {
            p /= p.norm() * 1.0001;
        }
        state.p = p;
        d = dyn::reduced_density(state);
        CHECK(d.rho.trace().real() == 1.0);
        for (int k = 0; k < 2; ++k) {
            const Eigen::Vector2cd residual =
                d.rho * d.eigenvectors[k] - d.eigenvalues[k] * d.eigenvectors[k];
            CHECK(residual.norm() < 1e-14);
        }
        // Orthonormal pair.
        CHECK(std::abs(d.eigenvectors[0].dot(d.eigenvectors[1])) < 1e-14);
        CHECK(d.eigenvectors[0].norm() == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_SUITE_END();
