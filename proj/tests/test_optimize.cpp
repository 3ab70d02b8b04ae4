// test_optimize.cpp — grid+golden-section maximization, monotone flag, sweeps

#include <cmath>
#include <optional>
#include <stdexcept>

#include <doctest.h>

#include "spinprobe/model.hpp"
#include "spinprobe/optimize.hpp"

using namespace spinprobe;

TEST_SUITE_BEGIN("optimize");

TEST_CASE("injected parabola: refined maximum within the bracket tolerance") {
    opt::TimeWindow window{0.5, 2.0, 64};
    const auto objective = [](double t) -> std::optional<double> {
        return 1.0 - (t - 1.0) * (t - 1.0);
    };
    const opt::OptimizeResult result = opt::maximize_over_grid(objective, window);
    CHECK(std::abs(result.t_star - 1.0) < 2e-6); // bracket target 1e-6 * t_max
    CHECK(result.fq_star == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(!result.monotone);
    CHECK(result.excluded == 0);
}

TEST_CASE("constant objective: tie-break toward the earliest time") {
    opt::TimeWindow window{0.2, 3.0, 32};
    const auto objective = [](double) -> std::optional<double> { return 0.7; };
    const opt::OptimizeResult result = opt::maximize_over_grid(objective, window);
    CHECK(result.t_star == window.t_min);
    CHECK(result.fq_star == 0.7);
}

TEST_CASE("monotone-increasing objective: boundary optimum with flag") {
    opt::TimeWindow window{0.1, 5.0, 64};
    const auto objective = [](double t) -> std::optional<double> { return t; };
    const opt::OptimizeResult result = opt::maximize_over_grid(objective, window);
    CHECK(result.monotone);
    CHECK(result.t_star == window.t_max);
    CHECK(result.fq_star == window.t_max);
}

TEST_CASE("oscillatory objective: interior optimum, refinement beats the grid") {
    opt::TimeWindow window{0.1, 10.0, 64};
    const auto objective = [](double t) -> std::optional<double> {
        return std::sin(t) + 0.3 * std::sin(3.7 * t);
    };
    const opt::OptimizeResult result = opt::maximize_over_grid(objective, window);
    CHECK(!result.monotone);
    double grid_best = -1e300;
    for (const double t : window.grid()) {
        grid_best = std::max(grid_best, *objective(t));
    }
    CHECK(result.fq_star >= grid_best); // refinement never loses to the grid
    CHECK(result.t_star < window.t_max);
}

TEST_CASE("grid refinement is stable under doubling the density") {
    const auto objective = [](double t) -> std::optional<double> {
        return -(t - 2.3) * (t - 2.3);
    };
    opt::TimeWindow coarse{0.5, 4.0, 64};
    opt::TimeWindow fine{0.5, 4.0, 128};
    const double t_coarse = opt::maximize_over_grid(objective, coarse).t_star;
    const double t_fine = opt::maximize_over_grid(objective, fine).t_star;
    CHECK(std::abs(t_coarse - t_fine) < opt::kRefineTol * coarse.t_max * 2.0);
}

TEST_CASE("excluded points: tolerated up to half, fatal beyond") {
    opt::TimeWindow window{0.1, 2.0, 16};
    int calls = 0;
    const auto half_excluded = [&](double t) -> std::optional<double> {
        ++calls;
        if (t < 1.05) {
            return std::nullopt; // 8 of 16 grid points
        }
        return -t;
    };
    const opt::OptimizeResult result = opt::maximize_over_grid(half_excluded, window);
    CHECK(result.excluded == 8);

    const auto mostly_excluded = [](double t) -> std::optional<double> {
        if (t < 1.2) {
            return std::nullopt;
        }
        return -t;
    };
    CHECK_THROWS_AS((void)opt::maximize_over_grid(mostly_excluded, window),
                    opt::CollapseDominatedGrid);
}

TEST_CASE("window validation") {
    opt::TimeWindow window;
    window.t_min = 0.0;
    CHECK_THROWS_AS(window.validate(), std::invalid_argument);
    window = opt::TimeWindow{};
    window.n_grid = 8;
    CHECK_THROWS_AS(window.validate(), std::invalid_argument);
    window = opt::TimeWindow{};
    window.t_max = window.t_min;
    CHECK_THROWS_AS(window.validate(), std::invalid_argument);

    const std::vector<double> grid = opt::TimeWindow{1e-3, 20.0, 512}.grid();
    CHECK(grid.size() == 512);
    CHECK(grid.front() == 1e-3);
    CHECK(grid.back() == 20.0);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        CHECK(grid[i] > grid[i - 1]);
    }
}

TEST_CASE("model-level optimization and sweep determinism across threads") {
    env::ModelSpec spec;
    spec.n_spins = 6;
    spec.g = 0.3;
    const qfi::ParamSelector sel{qfi::Parameter::temperature, spec.temperature};
    const opt::TimeWindow window{1e-3, 8.0, 64};

    const opt::OptimizeResult one = opt::optimize_over_time(spec, sel, window, true,
                                                            qfi::DerivativeMethod::analytic, 1);
    const opt::OptimizeResult four = opt::optimize_over_time(spec, sel, window, true,
                                                             qfi::DerivativeMethod::analytic, 4);
    CHECK(one.t_star == four.t_star); // bitwise: same grid, same refinement path
    CHECK(one.fq_star == four.fq_star);
    CHECK(one.fq_star > 0.0);

    const std::vector<double> values{0.6, 1.0, 1.6};
    const opt::SweepResult s1 = opt::sweep(spec, qfi::Parameter::temperature, values, window,
                                           qfi::DerivativeMethod::analytic, 1);
    const opt::SweepResult s4 = opt::sweep(spec, qfi::Parameter::temperature, values, window,
                                           qfi::DerivativeMethod::analytic, 4);
    REQUIRE(s1.points.size() == values.size());
    REQUIRE(s4.points.size() == values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        REQUIRE(s1.points[i].corr.has_value());
        REQUIRE(s1.points[i].unc.has_value());
        CHECK(s1.points[i].corr->fq_star == s4.points[i].corr->fq_star);
        CHECK(s1.points[i].unc->fq_star == s4.points[i].unc->fq_star);
        CHECK(s1.points[i].error.empty());
    }
}

TEST_CASE("sweep input validation") {
    env::ModelSpec spec;
    spec.n_spins = 4;
    const opt::TimeWindow window{1e-3, 5.0, 32};
    CHECK_THROWS_AS((void)opt::sweep(spec, qfi::Parameter::temperature, {1.0}, window),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        (void)opt::sweep(spec, qfi::Parameter::temperature, {-0.5, 1.0}, window),
        std::invalid_argument);
}

TEST_SUITE_END();
