#include "mb/config.hpp"

#include <fstream>

#include "json.hpp"

namespace mb {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw ConfigError("config field '" + field + "': " + why);
}

} // namespace

Norm parse_norm(const std::string& name) {
    if (name == "inf") return Norm::inf;
    if (name == "one") return Norm::one;
    if (name == "two") return Norm::two;
    fail("norm", "expected one of inf, one, two (got '" + name + "')");
}

DerivMode parse_deriv_mode(const std::string& name) {
    if (name == "ad") return DerivMode::ad;
    if (name == "paper_fd") return DerivMode::paper_fd;
    fail("derivative_mode", "expected ad or paper_fd (got '" + name + "')");
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }

    RunConfig cfg;

    if (!j.contains("variables") || !j["variables"].is_array() || j["variables"].empty())
        fail("variables", "required non-empty array of names");
    std::vector<std::string> variables = j["variables"].get<std::vector<std::string>>();

    if (!j.contains("functions") || !j["functions"].is_array())
        fail("functions", "required array of expressions");
    std::vector<std::string> functions = j["functions"].get<std::vector<std::string>>();
    if (functions.size() != variables.size())
        fail("functions", "expected " + std::to_string(variables.size()) +
                              " entries to match the variables, got " +
                              std::to_string(functions.size()));

    std::optional<std::vector<std::vector<std::string>>> jac;
    if (j.contains("jacobian")) {
        if (!j["jacobian"].is_array()) fail("jacobian", "expected an array of rows");
        jac = j["jacobian"].get<std::vector<std::vector<std::string>>>();
    }

    try {
        cfg.system = parse_system(variables, functions, jac);
    } catch (const ParseError& e) {
        fail("functions", e.what());
    } catch (const std::invalid_argument& e) {
        fail("jacobian", e.what());
    }

    if (!j.contains("box") || !j["box"].is_array()) fail("box", "required array of [lo, hi] pairs");
    auto rows = j["box"];
    if (rows.size() != variables.size())
        fail("box", "expected " + std::to_string(variables.size()) + " rows to match the variables, got " +
                        std::to_string(rows.size()));
    std::vector<Interval> dims;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].is_array() || rows[i].size() != 2 || !rows[i][0].is_number() ||
            !rows[i][1].is_number())
            fail("box", "row " + std::to_string(i) + " must be [lo, hi]");
        double lo = rows[i][0].get<double>(), hi = rows[i][1].get<double>();
        try {
            dims.emplace_back(lo, hi);
        } catch (const std::invalid_argument& e) {
            fail("box", "row " + std::to_string(i) + ": " + e.what());
        }
    }
    cfg.box = Box(std::move(dims));

    if (j.contains("delta")) {
        if (!j["delta"].is_number() || j["delta"].get<double>() <= 0.0)
            fail("delta", "must be a positive number");
        cfg.solver.delta = j["delta"].get<double>();
    }
    if (j.contains("subdivisions")) {
        if (!j["subdivisions"].is_number_integer() || j["subdivisions"].get<int>() < 1)
            fail("subdivisions", "must be an integer >= 1");
        cfg.solver.subdivisions = j["subdivisions"].get<int>();
    }
    if (j.contains("norm")) {
        if (!j["norm"].is_string()) fail("norm", "must be a string");
        cfg.solver.norm = parse_norm(j["norm"].get<std::string>());
    }
    if (j.contains("max_consecutive_failures")) {
        if (!j["max_consecutive_failures"].is_number_integer() ||
            j["max_consecutive_failures"].get<int>() < 1)
            fail("max_consecutive_failures", "must be an integer >= 1");
        cfg.solver.max_consecutive_failures = j["max_consecutive_failures"].get<int>();
    }
    if (j.contains("max_iterations")) {
        if (!j["max_iterations"].is_number_integer() || j["max_iterations"].get<int>() < 1)
            fail("max_iterations", "must be an integer >= 1");
        cfg.solver.max_iterations = j["max_iterations"].get<int>();
    }
    if (j.contains("derivative_mode")) {
        if (!j["derivative_mode"].is_string()) fail("derivative_mode", "must be a string");
        cfg.solver.derivative_mode = parse_deriv_mode(j["derivative_mode"].get<std::string>());
    }
    if (j.contains("trace")) {
        if (!j["trace"].is_string()) fail("trace", "must be a path string");
        cfg.trace_path = j["trace"].get<std::string>();
    }
    if (j.contains("boxes")) {
        if (!j["boxes"].is_string()) fail("boxes", "must be a path string");
        cfg.boxes_path = j["boxes"].get<std::string>();
    }
    return cfg;
}

} // namespace mb
