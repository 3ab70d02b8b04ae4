// run_config.cpp — JSON run configuration: schema, validation, loading

#include "spinprobe/run_config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace spinprobe::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw std::invalid_argument(message); }

void reject_unknown_keys(const json& node, const std::string& section,
                         std::initializer_list<const char*> allowed) {
    for (const auto& item : node.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            fail("unknown key '" + item.key() + "' in " + section);
        }
    }
}

const json* find(const json& node, const char* key) {
    const auto it = node.find(key);
    return it == node.end() ? nullptr : &*it;
}

double as_double(const json& node, const std::string& where) {
    if (!node.is_number()) {
        fail(where + " must be a number");
    }
    return node.get<double>();
}

int as_int(const json& node, const std::string& where) {
    if (!node.is_number_integer()) {
        fail(where + " must be an integer");
    }
    return node.get<int>();
}

std::string as_string(const json& node, const std::string& where) {
    if (!node.is_string()) {
        fail(where + " must be a string");
    }
    return node.get<std::string>();
}

std::vector<double> as_double_list(const json& node, const std::string& where) {
    if (!node.is_array()) {
        fail(where + " must be an array of numbers");
    }
    std::vector<double> values;
    values.reserve(node.size());
    for (const auto& entry : node) {
        values.push_back(as_double(entry, where + " entry"));
    }
    return values;
}

void parse_model(const json& node, env::ModelSpec& model) {
    if (!node.is_object()) {
        fail("'model' must be an object");
    }
    reject_unknown_keys(node, "'model'",
                        {"epsilon", "delta", "n_spins", "omega", "chi", "g", "temperature",
                         "preparation", "chain_boundary", "omega_list", "chi_list"});
    if (const json* v = find(node, "epsilon")) model.epsilon = as_double(*v, "model.epsilon");
    if (const json* v = find(node, "delta")) model.delta = as_double(*v, "model.delta");
    if (const json* v = find(node, "n_spins")) model.n_spins = as_int(*v, "model.n_spins");
    if (const json* v = find(node, "omega")) model.omega = as_double(*v, "model.omega");
    if (const json* v = find(node, "chi")) model.chi = as_double(*v, "model.chi");
    if (const json* v = find(node, "g")) model.g = as_double(*v, "model.g");
    if (const json* v = find(node, "temperature")) {
        model.temperature = as_double(*v, "model.temperature");
    }
    if (const json* v = find(node, "preparation")) {
        const std::vector<double> p = as_double_list(*v, "model.preparation");
        if (p.size() != 3) {
            fail("model.preparation must have exactly 3 components");
        }
        model.preparation = Eigen::Vector3d(p[0], p[1], p[2]);
    }
    if (const json* v = find(node, "chain_boundary")) {
        const std::string token = as_string(*v, "model.chain_boundary");
        if (token == "open") {
            model.chain_boundary = env::Boundary::open;
        } else if (token == "periodic") {
            model.chain_boundary = env::Boundary::periodic;
        } else {
            fail("model.chain_boundary must be 'open' or 'periodic'");
        }
    }
    if (const json* v = find(node, "omega_list")) {
        model.omega_list = as_double_list(*v, "model.omega_list");
    }
    if (const json* v = find(node, "chi_list")) {
        model.chi_list = as_double_list(*v, "model.chi_list");
    }
    model.validate();
}

void parse_time(const json& node, opt::TimeWindow& window) {
    if (!node.is_object()) {
        fail("'time' must be an object");
    }
    reject_unknown_keys(node, "'time'", {"t_min", "t_max", "n_grid"});
    if (const json* v = find(node, "t_min")) window.t_min = as_double(*v, "time.t_min");
    if (const json* v = find(node, "t_max")) window.t_max = as_double(*v, "time.t_max");
    if (const json* v = find(node, "n_grid")) window.n_grid = as_int(*v, "time.n_grid");
    window.validate();
}

qfi::Parameter parse_parameter(const json& node) {
    if (!node.is_object()) {
        fail("'parameter' must be an object");
    }
    reject_unknown_keys(node, "'parameter'", {"which"});
    const json* v = find(node, "which");
    if (v == nullptr) {
        fail("'parameter' requires 'which'");
    }
    const std::string token = as_string(*v, "parameter.which");
    if (token == "temperature") {
        return qfi::Parameter::temperature;
    }
    if (token == "coupling") {
        return qfi::Parameter::coupling;
    }
    fail("parameter.which must be 'temperature' or 'coupling'");
}

std::vector<double> parse_sweep(const json& node) {
    if (node.is_array()) {
        const std::vector<double> values = as_double_list(node, "'sweep'");
        if (values.size() < 2) {
            fail("'sweep' needs at least 2 values");
        }
        return values;
    }
    if (node.is_object()) {
        reject_unknown_keys(node, "'sweep'", {"from", "to", "count"});
        const json* from = find(node, "from");
        const json* to = find(node, "to");
        const json* count = find(node, "count");
        if (from == nullptr || to == nullptr || count == nullptr) {
            fail("'sweep' object requires 'from', 'to', and 'count'");
        }
        const double a = as_double(*from, "sweep.from");
        const double b = as_double(*to, "sweep.to");
        const int k = as_int(*count, "sweep.count");
        if (k < 2) {
            fail("sweep.count must be >= 2");
        }
        if (!(a < b)) {
            fail("sweep.from must be < sweep.to");
        }
        std::vector<double> values(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            values[static_cast<std::size_t>(i)] = a + (b - a) * i / (k - 1);
        }
        values.back() = b;
        return values;
    }
    fail("'sweep' must be an array or a {from, to, count} object");
}

qfi::DerivativeMethod parse_derivative(const json& node) {
    const std::string token = as_string(node, "'derivative'");
    if (token == "finite_difference") {
        return qfi::DerivativeMethod::finite_difference;
    }
    if (token == "analytic") {
        return qfi::DerivativeMethod::analytic;
    }
    fail("'derivative' must be 'finite_difference' or 'analytic'");
}

} // namespace

qfi::ParamSelector RunConfig::selector() const {
    qfi::ParamSelector sel;
    sel.which = parameter;
    sel.value = parameter == qfi::Parameter::temperature ? model.temperature : model.g;
    return sel;
}

Pipeline parse_pipeline(const std::string& token) {
    if (token == "corr") return Pipeline::corr;
    if (token == "uncorr") return Pipeline::uncorr;
    if (token == "both") return Pipeline::both;
    fail("pipeline must be 'corr', 'uncorr', or 'both'");
}

Format parse_format(const std::string& token) {
    if (token == "csv") return Format::csv;
    if (token == "json") return Format::json;
    fail("format must be 'csv' or 'json'");
}

RunConfig parse_run_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        fail(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) {
        fail("config root must be an object");
    }
    reject_unknown_keys(root, "config root",
                        {"model", "time", "parameter", "sweep", "pipeline", "derivative",
                         "output", "format"});

    RunConfig config;
    const json* model = find(root, "model");
    if (model == nullptr) {
        fail("config requires a 'model' section");
    }
    parse_model(*model, config.model);
    if (const json* v = find(root, "time")) {
        parse_time(*v, config.window);
    }
    if (const json* v = find(root, "parameter")) {
        config.parameter = parse_parameter(*v);
    }
    if (const json* v = find(root, "sweep")) {
        config.sweep_values = parse_sweep(*v);
    }
    if (const json* v = find(root, "pipeline")) {
        config.pipeline = parse_pipeline(as_string(*v, "'pipeline'"));
    }
    if (const json* v = find(root, "derivative")) {
        config.derivative = parse_derivative(*v);
    }
    if (const json* v = find(root, "output")) {
        config.output = as_string(*v, "'output'");
    }
    if (const json* v = find(root, "format")) {
        config.format = parse_format(as_string(*v, "'format'"));
    }
    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail("cannot open config file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_run_config(buffer.str());
}

} // namespace spinprobe::io
