#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "twostep/simulation.hpp"

namespace twostep {

using json = nlohmann::json;

/// Parses one config object. "s" may be an integer or a list of integers; a
/// list expands into one config per value, in order. Throws InputError naming
/// every offending field.
std::vector<ExperimentConfig> parse_experiment_configs(const json& j);
std::vector<ExperimentConfig> load_experiment_configs(const std::string& path);

json to_json(const ExperimentConfig& cfg);

/// Bundled experiment definitions. scale multiplies replication counts
/// (rounded, at least 1).
enum class BuiltinExperiment { figure1, table1, table1_p16, table2, table3 };
BuiltinExperiment parse_builtin(const std::string& name);
std::vector<ExperimentConfig> builtin_experiments(BuiltinExperiment which, double scale, std::uint64_t seed);

}  // namespace twostep
