// run_config.hpp — JSON run configuration: schema, validation, loading
//
// One structured config file drives every CLI subcommand.  Layout:
//
//   {
//     "model":     { ... ModelSpec fields ... },
//     "time":      { "t_min": 1e-3, "t_max": 20.0, "n_grid": 512 },
//     "parameter": { "which": "temperature" | "coupling" },
//     "sweep":     [v1, v2, ...]  or  { "from": a, "to": b, "count": k },
//     "pipeline":  "corr" | "uncorr" | "both",
//     "derivative": "finite_difference" | "analytic",
//     "output":    "path.csv",
//     "format":    "csv" | "json"
//   }
//
// Every block is optional except "model"; unknown keys anywhere are rejected.
// All failures throw std::invalid_argument naming the offending key (exit
// code 1 territory — nothing is computed before the schema passes).

#pragma once

#include <string>
#include <vector>

#include "spinprobe/model.hpp"
#include "spinprobe/optimize.hpp"
#include "spinprobe/qfi.hpp"

namespace spinprobe::io {

enum class Pipeline { corr, uncorr, both };
enum class Format { csv, json };

struct RunConfig {
    env::ModelSpec model;
    opt::TimeWindow window;
    qfi::Parameter parameter{qfi::Parameter::temperature};
    qfi::DerivativeMethod derivative{qfi::DerivativeMethod::finite_difference};
    std::vector<double> sweep_values; // empty unless the config carries a sweep block
    Pipeline pipeline{Pipeline::both};
    Format format{Format::csv};
    std::string output; // empty = stdout

    // The selector the model currently implies: parameter + its model value.
    qfi::ParamSelector selector() const;
};

// Parse from JSON text / file.  Unknown keys, type mismatches, and value
// violations all surface as std::invalid_argument.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

// Shared parsers for the CLI flag values (same tokens as the config file).
Pipeline parse_pipeline(const std::string& token);
Format parse_format(const std::string& token);

} // namespace spinprobe::io
