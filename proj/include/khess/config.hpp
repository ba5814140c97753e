// Run configuration: a small sectioned key=value file that fixes the problem
// parameters, the weight, integrator tolerances, and output options.
#pragma once

#include <map>
#include <optional>
#include <string>

#include "khess/common.hpp"
#include "khess/solver.hpp"
#include "khess/weights.hpp"

namespace khess {

struct OutputConfig {
    std::string format = "json";  // json | csv (stdout payloads are always json)
};

struct RunConfig {
    ProblemParams params;
    WeightSpec weight;
    IntegratorConfig integrator;
    OutputConfig output;
    double r_max = 1e4;  // default right endpoint for profile runs

    // raw key lookup for overrides ([section] prefix + '.' + key)
    std::map<std::string, std::string> raw;
};

// Parses the sectioned key=value format:
//
//   [params]
//   n = 3
//   k = 1
//   q = 6
//   lambda = 1
//
//   [weight]
//   kind = rational
//   a = 1
//   atilde = 1
//   beta = 3
//   gamma = 1
//
//   [integrator]   # optional
//   rel_tol = 1e-10
//
//   [output]       # optional
//   format = json
//
// Unknown keys and malformed lines raise config_error with file:line.
RunConfig load_config(const std::string& path);

// Same parser over an in-memory string (used by tests); `name` is used in
// diagnostics.
RunConfig parse_config(const std::string& text, const std::string& name = "<config>");

}  // namespace khess
