#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "froshe/engine.hpp"

namespace froshe {

/// Parses a YAML run configuration. Every key is optional and falls back to
/// the SimConfig defaults; unknown keys are rejected. Sections:
/// scenario, sensor, robot, sim, swarm, batching, shepherd, monitor, planner,
/// utility.
SimConfig parse_config(std::string_view yaml);
SimConfig load_config(const std::string& path);

/// YAML for a config, every field written out. Emitting a resolved config
/// gives a manifest that parse_config() reads back to the same values.
std::string emit_config(const SimConfig& config);

struct MatrixCell {
  std::string label;
  SimConfig config;
};

/// Cartesian product of environment x side length x robot count x strategy
/// over a shared base config, repeat count and seed schedule.
struct ExperimentMatrix {
  SimConfig base;
  std::vector<EnvironmentKind> environments;
  std::vector<double> side_lengths;
  std::vector<int> robot_counts;
  std::vector<std::string> strategies;

  std::vector<MatrixCell> cells() const;
};

/// Matrix file: optional `base` mapping (same schema as a run config), lists
/// `environments`, `side_lengths`, `robot_counts`, `strategies`, and scalar
/// `repeat_count` / `master_seed` overriding the base.
ExperimentMatrix parse_matrix(std::string_view yaml);
ExperimentMatrix load_matrix(const std::string& path);

EnvironmentKind parse_environment(std::string_view name);
std::string_view to_string(EnvironmentKind kind);

}  // namespace froshe
