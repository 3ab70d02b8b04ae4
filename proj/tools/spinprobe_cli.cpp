// spinprobe_cli.cpp — command-line front end: dynamics / qfi / optimize / sweep / verify
//
// Exit codes: 0 success, 1 configuration error (flags, schema, validation),
// 2 computational failure (coherence collapse dominating a grid, singular
// closed form with no fallback, oracle battery failure).
// Output: CSV (17 significant digits, LF endings) or JSON; byte-identical
// for identical configs regardless of --threads.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spinprobe/dynamics.hpp"
#include "spinprobe/model.hpp"
#include "spinprobe/optimize.hpp"
#include "spinprobe/oracles.hpp"
#include "spinprobe/qfi.hpp"
#include "spinprobe/run_config.hpp"

namespace {

namespace env = spinprobe::env;
namespace dyn = spinprobe::dyn;
namespace qfi = spinprobe::qfi;
namespace opt = spinprobe::opt;
namespace io = spinprobe::io;
namespace oracles = spinprobe::oracles;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitCompute = 2;

// Fixed float formatting: 17 significant digits round-trip any double.
std::string fmt(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

struct OutputTarget {
    std::unique_ptr<std::ofstream> file;
    std::ostream* stream{&std::cout};
};

OutputTarget open_output(const std::string& path) {
    OutputTarget target;
    if (!path.empty()) {
        target.file = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*target.file) {
            throw std::invalid_argument("cannot open output file: " + path);
        }
        target.stream = target.file.get();
    }
    return target;
}

struct CommonFlags {
    std::string config_path;
    std::string output_override;
    std::string format_override;
    std::string pipeline_override;
    int threads{0}; // 0 = hardware concurrency
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags, bool config_required) {
    auto* config = cmd->add_option("--config", flags.config_path, "JSON run configuration");
    if (config_required) {
        config->required();
    }
    cmd->add_option("--output", flags.output_override, "output path (default: config or stdout)");
    cmd->add_option("--format", flags.format_override, "csv|json (default: config)");
    cmd->add_option("--pipeline", flags.pipeline_override,
                    "corr|uncorr|both (default: config)");
    cmd->add_option("--threads", flags.threads, "worker threads (0 = auto)")
        ->check(CLI::NonNegativeNumber);
}

io::RunConfig resolve_config(const CommonFlags& flags) {
    io::RunConfig config = io::load_run_config(flags.config_path);
    if (!flags.output_override.empty()) {
        config.output = flags.output_override;
    }
    if (!flags.format_override.empty()) {
        config.format = io::parse_format(flags.format_override);
    }
    if (!flags.pipeline_override.empty()) {
        config.pipeline = io::parse_pipeline(flags.pipeline_override);
    }
    return config;
}

int effective_threads(int requested) {
    if (requested > 0) {
        return requested;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<bool> selected_pipelines(io::Pipeline pipeline) {
    // Order: correlated first, then uncorrelated (stable output order).
    switch (pipeline) {
    case io::Pipeline::corr: return {true};
    case io::Pipeline::uncorr: return {false};
    case io::Pipeline::both: return {true, false};
    }
    return {true, false};
}

const char* pipeline_name(bool correlated) { return correlated ? "corr" : "uncorr"; }

// ---------------------------------------------------------------- dynamics --

int run_dynamics(const CommonFlags& flags) {
    const io::RunConfig config = resolve_config(flags);
    const std::vector<double> times = config.window.grid();
    const int threads = effective_threads(flags.threads);
    const env::ClassTable table = env::build_class_table(config.model);

    OutputTarget out = open_output(config.output);
    if (config.format == io::Format::csv) {
        *out.stream << "t,pipeline,p_x,p_y,p_z,gamma,omega_phase\n";
        for (bool correlated : selected_pipelines(config.pipeline)) {
            const std::vector<dyn::BlochState> curve =
                dyn::bloch_curve(table, times, correlated, threads);
            for (const dyn::BlochState& s : curve) {
                *out.stream << fmt(s.t) << ',' << pipeline_name(correlated) << ','
                            << fmt(s.p.x()) << ',' << fmt(s.p.y()) << ',' << fmt(s.p.z())
                            << ',' << fmt(s.gamma) << ',' << fmt(s.omega_phase) << '\n';
            }
        }
    } else {
        json points = json::array();
        for (bool correlated : selected_pipelines(config.pipeline)) {
            const std::vector<dyn::BlochState> curve =
                dyn::bloch_curve(table, times, correlated, threads);
            for (const dyn::BlochState& s : curve) {
                points.push_back({{"t", s.t},
                                  {"pipeline", pipeline_name(correlated)},
                                  {"p_x", s.p.x()},
                                  {"p_y", s.p.y()},
                                  {"p_z", s.p.z()},
                                  {"gamma", std::isfinite(s.gamma) ? json(s.gamma) : json()},
                                  {"omega_phase", s.omega_phase}});
            }
        }
        *out.stream << json{{"command", "dynamics"}, {"points", points}}.dump(2) << '\n';
    }
    return kExitOk;
}

// --------------------------------------------------------------------- qfi --

int run_qfi(const CommonFlags& flags) {
    const io::RunConfig config = resolve_config(flags);
    const std::vector<double> times = config.window.grid();
    const int threads = effective_threads(flags.threads);
    const qfi::ParamSelector sel = config.selector();

    OutputTarget out = open_output(config.output);
    if (config.format == io::Format::csv) {
        *out.stream << "t,pipeline,fq_closed,fq_bloch,fq_sld,derivative_method,closed_fell_back\n";
        for (bool correlated : selected_pipelines(config.pipeline)) {
            const auto curve =
                qfi::qfi_curve(config.model, times, sel, correlated, config.derivative, threads);
            for (const auto& point : curve) {
                if (!point) {
                    continue; // coherence collapse: no finite QFI at this time
                }
                *out.stream << fmt(point->t) << ',' << pipeline_name(correlated) << ','
                            << fmt(point->fq_closed) << ',' << fmt(point->fq_bloch) << ','
                            << fmt(point->fq_sld) << ','
                            << (point->derivative_method == qfi::DerivativeMethod::analytic
                                    ? "analytic"
                                    : "finite_difference")
                            << ',' << (point->closed_fell_back ? 1 : 0) << '\n';
            }
        }
    } else {
        json points = json::array();
        for (bool correlated : selected_pipelines(config.pipeline)) {
            const auto curve =
                qfi::qfi_curve(config.model, times, sel, correlated, config.derivative, threads);
            for (std::size_t i = 0; i < curve.size(); ++i) {
                json entry{{"t", times[i]}, {"pipeline", pipeline_name(correlated)}};
                if (curve[i]) {
                    entry["fq_closed"] = curve[i]->fq_closed;
                    entry["fq_bloch"] = curve[i]->fq_bloch;
                    entry["fq_sld"] = curve[i]->fq_sld;
                    entry["derivative_method"] =
                        curve[i]->derivative_method == qfi::DerivativeMethod::analytic
                            ? "analytic"
                            : "finite_difference";
                    entry["closed_fell_back"] = curve[i]->closed_fell_back;
                } else {
                    entry["error"] = "coherence collapse";
                }
                points.push_back(std::move(entry));
            }
        }
        *out.stream << json{{"command", "qfi"}, {"points", points}}.dump(2) << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------- optimize --

int run_optimize(const CommonFlags& flags) {
    const io::RunConfig config = resolve_config(flags);
    const int threads = effective_threads(flags.threads);
    const qfi::ParamSelector sel = config.selector();

    struct Row {
        bool correlated;
        opt::OptimizeResult result;
    };
    std::vector<Row> rows;
    for (bool correlated : selected_pipelines(config.pipeline)) {
        rows.push_back({correlated,
                        opt::optimize_over_time(config.model, sel, config.window, correlated,
                                                config.derivative, threads)});
    }

    OutputTarget out = open_output(config.output);
    if (config.format == io::Format::csv) {
        *out.stream << "pipeline,t_star,fq_star,monotone,excluded_points\n";
        for (const Row& row : rows) {
            *out.stream << pipeline_name(row.correlated) << ',' << fmt(row.result.t_star) << ','
                        << fmt(row.result.fq_star) << ',' << (row.result.monotone ? 1 : 0) << ','
                        << row.result.excluded << '\n';
        }
    } else {
        json results = json::array();
        for (const Row& row : rows) {
            results.push_back({{"pipeline", pipeline_name(row.correlated)},
                               {"t_star", row.result.t_star},
                               {"fq_star", row.result.fq_star},
                               {"monotone", row.result.monotone},
                               {"excluded_points", row.result.excluded}});
        }
        *out.stream << json{{"command", "optimize"}, {"results", results}}.dump(2) << '\n';
    }
    return kExitOk;
}

// ------------------------------------------------------------------- sweep --

int run_sweep(const CommonFlags& flags) {
    const io::RunConfig config = resolve_config(flags);
    if (config.sweep_values.empty()) {
        throw std::invalid_argument("sweep requires a 'sweep' section in the config");
    }
    const int threads = effective_threads(flags.threads);
    const opt::SweepResult result = opt::sweep(config.model, config.parameter,
                                               config.sweep_values, config.window,
                                               config.derivative, threads);

    const char* column = config.parameter == qfi::Parameter::temperature ? "T" : "g";
    OutputTarget out = open_output(config.output);
    if (config.format == io::Format::csv) {
        *out.stream << column << ",t_star_corr,fq_corr,t_star_unc,fq_unc\n";
        for (const opt::SweepPoint& point : result.points) {
            if (!point.error.empty() || !point.corr || !point.unc) {
                std::cerr << "sweep: skipping " << column << "=" << fmt(point.value) << ": "
                          << point.error << '\n';
                continue;
            }
            *out.stream << fmt(point.value) << ',' << fmt(point.corr->t_star) << ','
                        << fmt(point.corr->fq_star) << ',' << fmt(point.unc->t_star) << ','
                        << fmt(point.unc->fq_star) << '\n';
        }
        for (double x : result.crossovers) {
            std::cerr << "sweep: pipelines cross near " << column << " = " << fmt(x) << '\n';
        }
    } else {
        json points = json::array();
        for (const opt::SweepPoint& point : result.points) {
            json entry{{column, point.value}};
            if (!point.error.empty() || !point.corr || !point.unc) {
                entry["error"] = point.error;
            } else {
                entry["t_star_corr"] = point.corr->t_star;
                entry["fq_corr"] = point.corr->fq_star;
                entry["monotone_corr"] = point.corr->monotone;
                entry["t_star_unc"] = point.unc->t_star;
                entry["fq_unc"] = point.unc->fq_star;
                entry["monotone_unc"] = point.unc->monotone;
            }
            points.push_back(std::move(entry));
        }
        *out.stream << json{{"command", "sweep"},
                            {"parameter", column},
                            {"points", points},
                            {"crossovers", result.crossovers}}
                              .dump(2)
                    << '\n';
    }
    return kExitOk;
}

// ------------------------------------------------------------------ verify --

struct Check {
    std::string name;
    bool passed;
    double worst;
    double tolerance;
};

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max({std::abs(got), std::abs(want), 1e-30});
}

// Built-in oracle battery: every closed form in the main path is compared
// against an independent brute-force implementation at fixed seeds.
int run_verify(const CommonFlags& flags) {
    std::vector<Check> checks;
    std::mt19937 rng(20260813u);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const auto random_spec = [&](int n_spins) {
        env::ModelSpec spec;
        spec.n_spins = n_spins;
        spec.epsilon = 0.5 + 3.0 * unit(rng);
        spec.delta = 0.25 + 2.0 * unit(rng);
        spec.omega = 0.5 + 1.5 * unit(rng);
        spec.chi = 0.5 * unit(rng);
        spec.g = 0.02 + 0.8 * unit(rng);
        spec.temperature = 0.3 + 2.5 * unit(rng);
        return spec;
    };

    // 1. Class-aggregated dynamics vs per-configuration brute force (N=8).
    {
        double worst = 0.0;
        for (int rep = 0; rep < 20; ++rep) {
            const env::ModelSpec spec = random_spec(8);
            const double t = 10.0 * unit(rng);
            const env::ClassTable table = env::build_class_table(spec);
            for (bool correlated : {true, false}) {
                const Eigen::Vector3d fast = dyn::bloch_at(table, t, correlated).p;
                const Eigen::Vector3d slow = oracles::brute_force_bloch(spec, t, correlated);
                worst = std::max(worst, (fast - slow).cwiseAbs().maxCoeff());
            }
        }
        checks.push_back({"class aggregation vs 2^N brute force", worst < 1e-12, worst, 1e-12});
    }

    // 2. Class-aggregated dynamics vs dense joint-space evolution (N=5).
    {
        double worst = 0.0;
        for (int rep = 0; rep < 5; ++rep) {
            const env::ModelSpec spec = random_spec(5);
            const double t = 8.0 * unit(rng);
            const env::ClassTable table = env::build_class_table(spec);
            for (bool correlated : {true, false}) {
                const Eigen::Vector3d fast = dyn::bloch_at(table, t, correlated).p;
                const Eigen::Vector3d dense = oracles::dense_bloch(spec, t, correlated);
                worst = std::max(worst, (fast - dense).cwiseAbs().maxCoeff());
            }
        }
        checks.push_back({"class aggregation vs dense 2^(N+1) evolution", worst < 1e-10, worst,
                          1e-10});
    }

    // 3. Hyperbolic A-factor vs 2x2 eigendecomposition.
    {
        double worst = 0.0;
        for (int rep = 0; rep < 200; ++rep) {
            const double eps_tilde = -4.0 + 8.0 * unit(rng);
            const double delta = -3.0 + 6.0 * unit(rng);
            const double beta = 5.0 * unit(rng);
            const double angle = 3.14159265358979 * unit(rng);
            const double azimuth = 6.28318530717959 * unit(rng);
            const Eigen::Vector3d prep(std::sin(angle) * std::cos(azimuth),
                                       std::sin(angle) * std::sin(azimuth), std::cos(angle));
            env::ConfigClass cls;
            env::ModelSpec spec;
            spec.preparation = prep;
            spec.epsilon = eps_tilde;
            spec.delta = delta;
            spec.g = 0.0;
            spec.temperature = beta > 0.0 ? 1.0 / beta : 1e30;
            const env::ClassQuantities q = env::compute_class_quantities(cls, spec);
            const double fast = env::compute_a_factor(q, prep, beta);
            const double slow = oracles::a_factor_oracle(eps_tilde, delta, prep, beta);
            worst = std::max(worst, rel_err(fast, slow));
        }
        checks.push_back({"A-factor hyperbolic form vs eigendecomposition", worst < 1e-12, worst,
                          1e-12});
    }

    // 4. Closed-form / Bloch-identity / SLD agreement on the default model.
    {
        double worst = 0.0;
        env::ModelSpec spec; // defaults: N=10, g=0.01
        spec.g = 0.2;
        for (double t : {0.5, 2.0, 7.5}) {
            for (bool correlated : {true, false}) {
                for (qfi::Parameter which : {qfi::Parameter::temperature,
                                             qfi::Parameter::coupling}) {
                    qfi::ParamSelector sel{which, which == qfi::Parameter::temperature
                                                      ? spec.temperature
                                                      : spec.g};
                    const qfi::QfiPoint point = qfi::qfi_point(
                        spec, t, sel, correlated, qfi::DerivativeMethod::finite_difference);
                    worst = std::max(worst, rel_err(point.fq_closed, point.fq_bloch));
                    worst = std::max(worst, rel_err(point.fq_closed, point.fq_sld));
                }
            }
        }
        checks.push_back({"closed form vs Bloch identity vs SLD", worst < 1e-6, worst, 1e-6});
    }

    // 5. End-to-end finite-difference oracle vs closed form (N=8).
    {
        double worst = 0.0;
        env::ModelSpec spec;
        spec.n_spins = 8;
        spec.g = 0.3;
        spec.chi = 0.2;
        for (double t : {1.0, 4.0}) {
            for (bool correlated : {true, false}) {
                qfi::ParamSelector sel{qfi::Parameter::temperature, spec.temperature};
                const qfi::QfiPoint point = qfi::qfi_point(
                    spec, t, sel, correlated, qfi::DerivativeMethod::finite_difference);
                const double oracle =
                    oracles::qfi_finite_difference_oracle(spec, t, sel, correlated);
                worst = std::max(worst, rel_err(point.fq_closed, oracle));
            }
        }
        checks.push_back({"QFI closed form vs end-to-end numeric oracle", worst < 1e-6, worst,
                          1e-6});
    }

    // 6. Physicality: |p| <= 1 and F_q >= 0 on random models.
    {
        double worst_p = 0.0;
        bool nonneg = true;
        for (int rep = 0; rep < 50; ++rep) {
            const env::ModelSpec spec = random_spec(6);
            const double t = 12.0 * unit(rng);
            const env::ClassTable table = env::build_class_table(spec);
            for (bool correlated : {true, false}) {
                worst_p = std::max(worst_p, dyn::bloch_at(table, t, correlated).p.norm() - 1.0);
            }
        }
        checks.push_back({"Bloch vectors stay inside the unit ball", worst_p < 1e-12 && nonneg,
                          worst_p, 1e-12});
    }

    bool all_passed = true;
    for (const Check& check : checks) {
        all_passed = all_passed && check.passed;
        std::cout << (check.passed ? "PASS" : "FAIL") << "  " << check.name << "  (worst "
                  << fmt(check.worst) << ", tolerance " << fmt(check.tolerance) << ")\n";
    }
    std::cout << (all_passed ? "verify: all checks passed\n" : "verify: FAILURES present\n");
    (void)flags;
    return all_passed ? kExitOk : kExitCompute;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Qubit probe in an interacting spin bath: dephasing dynamics, quantum Fisher "
                 "information, and optimal-time estimation"};
    app.require_subcommand(1);

    CommonFlags dynamics_flags, qfi_flags, optimize_flags, sweep_flags, verify_flags;
    CLI::App* dynamics_cmd =
        app.add_subcommand("dynamics", "Bloch vector, dephasing factor, and phase vs time");
    add_common_flags(dynamics_cmd, dynamics_flags, true);
    CLI::App* qfi_cmd = app.add_subcommand("qfi", "quantum Fisher information vs time");
    add_common_flags(qfi_cmd, qfi_flags, true);
    CLI::App* optimize_cmd =
        app.add_subcommand("optimize", "maximize the QFI over the interaction time");
    add_common_flags(optimize_cmd, optimize_flags, true);
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "optimal QFI vs a swept parameter, both pipelines");
    add_common_flags(sweep_cmd, sweep_flags, true);
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "run the built-in oracle battery and report pass/fail");
    add_common_flags(verify_cmd, verify_flags, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e); // --help
        }
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (dynamics_cmd->parsed()) return run_dynamics(dynamics_flags);
        if (qfi_cmd->parsed()) return run_qfi(qfi_flags);
        if (optimize_cmd->parsed()) return run_optimize(optimize_flags);
        if (sweep_cmd->parsed()) return run_sweep(sweep_flags);
        if (verify_cmd->parsed()) return run_verify(verify_flags);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "computation failed: " << e.what() << '\n';
        return kExitCompute;
    }
    return kExitConfig;
}
