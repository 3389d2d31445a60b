#pragma once

#include <optional>
#include <string>

#include "mb/solver.hpp"

namespace mb {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One solver run as described by a JSON config file.
struct RunConfig {
    SystemDef system;
    Box box;
    SolverConfig solver;
    std::optional<std::string> trace_path;
    std::optional<std::string> boxes_path;
};

/// Loads and validates a config; throws ConfigError naming the offending
/// field.  Keys: variables, functions, jacobian (optional), box, delta,
/// subdivisions, norm, max_consecutive_failures, max_iterations,
/// derivative_mode, trace, boxes.
RunConfig load_config(const std::string& path);

Norm parse_norm(const std::string& name);
DerivMode parse_deriv_mode(const std::string& name);

} // namespace mb
