#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "ocl/harness/experiment.hpp"

namespace ocl::harness {

// Strict parse: unknown keys anywhere in the document are rejected.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);

// Constants file for the regret-bound calculator.
struct BoundSpec {
    policy::RegretBoundParams params;
    double delta = 0.1;
    std::optional<double> alpha_q;
    std::optional<double> alpha_c;
};

BoundSpec parse_bound_constants(const nlohmann::json& j);
BoundSpec load_bound_constants(const std::string& path);

} // namespace ocl::harness
