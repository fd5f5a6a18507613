#include "froshe/config.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

#include "froshe/error.hpp"

namespace froshe {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

YAML::Node load_yaml(std::string_view text) {
  try {
    return YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(fmt::format("malformed YAML: {}", e.what()));
  }
}

/// Reads keys out of one mapping and complains about any it did not consume.
class Section {
 public:
  Section(const YAML::Node& node, std::string name) : node_(node), name_(std::move(name)) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) {
      throw ConfigError(fmt::format("'{}' must be a mapping", name_));
    }
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!node_ || !node_[key]) return;
    try {
      out = node_[key].as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(fmt::format("bad value for {}.{}", name_, key));
    }
  }

  template <typename T>
  void get(const char* key, std::optional<T>& out) {
    seen_.insert(key);
    if (!node_ || !node_[key]) return;
    try {
      out = node_[key].as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(fmt::format("bad value for {}.{}", name_, key));
    }
  }

  std::optional<std::string> text(const char* key) {
    std::optional<std::string> s;
    get(key, s);
    return s;
  }

  void mark(const char* key) { seen_.insert(key); }

  void finish() const {
    if (!node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!seen_.contains(key)) throw ConfigError(fmt::format("unknown key {}.{}", name_, key));
    }
  }

 private:
  YAML::Node node_;
  std::string name_;
  std::set<std::string> seen_;
};

ClusterMethod parse_cluster(std::string_view s) {
  if (s == "single_linkage") return ClusterMethod::SingleLinkage;
  if (s == "kmeans") return ClusterMethod::KMeans;
  throw ConfigError(fmt::format("unknown batching method '{}'", s));
}

HerdTarget parse_herd_target(std::string_view s) {
  if (s == "heaviest") return HerdTarget::Heaviest;
  if (s == "nearest_weighted") return HerdTarget::NearestWeighted;
  throw ConfigError(fmt::format("unknown herd_target '{}'", s));
}

void apply(const YAML::Node& root, SimConfig& c) {
  if (root && !root.IsNull() && !root.IsMap()) throw ConfigError("config root must be a mapping");
  static const std::set<std::string> kSections = {"scenario", "sensor",   "robot",   "sim",
                                                  "swarm",    "batching", "shepherd", "monitor",
                                                  "planner",  "utility"};
  if (root && root.IsMap()) {
    for (const auto& kv : root) {
      const auto key = kv.first.as<std::string>();
      if (!kSections.contains(key)) throw ConfigError(fmt::format("unknown section '{}'", key));
    }
  }
  auto sub = [&](const char* name) { return root ? root[name] : YAML::Node(); };

  {
    Section s(sub("scenario"), "scenario");
    if (auto env = s.text("environment")) c.scenario.environment_kind = parse_environment(*env);
    s.get("side_length", c.scenario.side_length);
    s.get("resolution", c.scenario.resolution);
    s.get("tree_density", c.scenario.tree_density);
    s.get("tree_radius", c.scenario.tree_radius);
    s.get("rng_seed", c.scenario.rng_seed);
    s.get("robot_count", c.scenario.robot_count);
    s.get("spawn_radius", c.scenario.spawn_radius);
    std::optional<std::vector<double>> start;
    s.get("start", start);
    if (start) {
      if (start->size() != 2) throw ConfigError("scenario.start must be [x, y]");
      c.scenario.start = Vec2{(*start)[0], (*start)[1]};
    }
    s.finish();
  }
  {
    Section s(sub("sensor"), "sensor");
    s.get("range", c.sensor.range);
    s.get("ray_count", c.sensor.ray_count);
    s.get("range_noise_sigma", c.sensor.range_noise_sigma);
    s.finish();
  }
  {
    Section s(sub("robot"), "robot");
    s.get("max_speed", c.max_speed);
    s.get("max_accel", c.max_accel);
    s.finish();
  }
  {
    Section s(sub("sim"), "sim");
    s.get("strategy", c.strategy);
    s.get("tick_rate", c.tick_rate);
    s.get("frontier_rate", c.frontier_rate);
    s.get("time_cap", c.time_cap);
    s.get("coverage_target", c.coverage_target);
    s.get("master_seed", c.master_seed);
    s.get("repeat_count", c.repeat_count);
    s.get("debug_traces", c.debug_traces);
    s.finish();
  }
  {
    Section s(sub("swarm"), "swarm");
    auto& p = c.froshe.swarm;
    s.get("f_res", p.f_res);
    s.get("e", p.e);
    s.get("c_f", p.c_f);
    s.get("rho_f", p.rho_f);
    s.get("rate", p.rate);
    s.get("singularity_guard", p.singularity_guard);
    s.finish();
  }
  {
    Section s(sub("batching"), "batching");
    if (auto m = s.text("method")) c.froshe.cluster = parse_cluster(*m);
    s.get("linkage_distance", c.linkage_distance);
    s.get("kmeans_k", c.froshe.kmeans_k);
    s.get("lambda_m", c.froshe.assignment.lambda_m);
    s.get("lambda_d", c.froshe.assignment.lambda_d);
    s.get("exclusive", c.froshe.assignment.exclusive);
    s.finish();
  }
  {
    Section s(sub("shepherd"), "shepherd");
    s.get("p_p", c.froshe.shepherd.p_p);
    s.get("d_t_initial", c.d_t_initial);
    if (auto h = s.text("herd_target")) c.froshe.shepherd.herd_target = parse_herd_target(*h);
    s.finish();
  }
  {
    Section s(sub("monitor"), "monitor");
    s.get("fma_window", c.froshe.monitor.fma_window);
    s.get("sma_window", c.froshe.monitor.sma_window);
    s.get("adjust_factor", c.froshe.monitor.adjust_factor);
    s.get("d_t_min", c.d_t_min);
    s.get("d_t_max", c.d_t_max);
    s.finish();
  }
  {
    Section s(sub("planner"), "planner");
    s.get("unknown_cost", c.planner.unknown_cost);
    s.get("robot_clearance", c.planner.robot_clearance);
    s.get("goal_radius", c.goal_radius);
    s.finish();
  }
  {
    Section s(sub("utility"), "utility");
    s.get("initial_utility", c.utility.initial_utility);
    s.get("cost_weight", c.utility.cost_weight);
    s.get("discount_range", c.utility.discount_range);
    s.finish();
  }
}

std::string num(double v) { return fmt::format("{}", v); }

template <typename T>
void put(YAML::Emitter& out, const char* key, const T& v) {
  out << YAML::Key << key << YAML::Value;
  if constexpr (std::is_same_v<T, double>) {
    out << num(v);
  } else {
    out << v;
  }
}

template <typename T>
void put(YAML::Emitter& out, const char* key, const std::optional<T>& v) {
  if (v) put(out, key, *v);
}

}  // namespace

EnvironmentKind parse_environment(std::string_view name) {
  if (name == "grass_plane" || name == "grass") return EnvironmentKind::GrassPlane;
  if (name == "forest") return EnvironmentKind::Forest;
  throw ConfigError(fmt::format("unknown environment '{}'", name));
}

std::string_view to_string(EnvironmentKind kind) {
  return kind == EnvironmentKind::Forest ? "forest" : "grass_plane";
}

SimConfig parse_config(std::string_view yaml) {
  SimConfig c;
  apply(load_yaml(yaml), c);
  return c;
}

SimConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

std::string emit_config(const SimConfig& c) {
  YAML::Emitter out;
  out << YAML::BeginMap;

  out << YAML::Key << "scenario" << YAML::Value << YAML::BeginMap;
  put(out, "environment", std::string(to_string(c.scenario.environment_kind)));
  put(out, "side_length", c.scenario.side_length);
  put(out, "resolution", c.scenario.resolution);
  put(out, "tree_density", c.scenario.tree_density);
  put(out, "tree_radius", c.scenario.tree_radius);
  put(out, "rng_seed", c.scenario.rng_seed);
  put(out, "robot_count", c.scenario.robot_count);
  put(out, "spawn_radius", c.scenario.spawn_radius);
  if (c.scenario.start) {
    out << YAML::Key << "start" << YAML::Value << YAML::Flow << YAML::BeginSeq
        << num(c.scenario.start->x) << num(c.scenario.start->y) << YAML::EndSeq;
  }
  out << YAML::EndMap;

  out << YAML::Key << "sensor" << YAML::Value << YAML::BeginMap;
  put(out, "range", c.sensor.range);
  put(out, "ray_count", c.sensor.ray_count);
  put(out, "range_noise_sigma", c.sensor.range_noise_sigma);
  out << YAML::EndMap;

  out << YAML::Key << "robot" << YAML::Value << YAML::BeginMap;
  put(out, "max_speed", c.max_speed);
  put(out, "max_accel", c.max_accel);
  out << YAML::EndMap;

  out << YAML::Key << "sim" << YAML::Value << YAML::BeginMap;
  put(out, "strategy", c.strategy);
  put(out, "tick_rate", c.tick_rate);
  put(out, "frontier_rate", c.frontier_rate);
  put(out, "time_cap", c.time_cap);
  put(out, "coverage_target", c.coverage_target);
  put(out, "master_seed", c.master_seed);
  put(out, "repeat_count", c.repeat_count);
  put(out, "debug_traces", c.debug_traces);
  out << YAML::EndMap;

  const auto& sw = c.froshe.swarm;
  out << YAML::Key << "swarm" << YAML::Value << YAML::BeginMap;
  put(out, "f_res", sw.f_res);
  put(out, "e", sw.e);
  put(out, "c_f", sw.c_f);
  put(out, "rho_f", sw.rho_f);
  put(out, "rate", sw.rate);
  put(out, "singularity_guard", sw.singularity_guard);
  out << YAML::EndMap;

  out << YAML::Key << "batching" << YAML::Value << YAML::BeginMap;
  put(out, "method",
      std::string(c.froshe.cluster == ClusterMethod::KMeans ? "kmeans" : "single_linkage"));
  put(out, "linkage_distance", c.linkage_distance);
  put(out, "kmeans_k", static_cast<std::uint64_t>(c.froshe.kmeans_k));
  put(out, "lambda_m", c.froshe.assignment.lambda_m);
  put(out, "lambda_d", c.froshe.assignment.lambda_d);
  put(out, "exclusive", c.froshe.assignment.exclusive);
  out << YAML::EndMap;

  out << YAML::Key << "shepherd" << YAML::Value << YAML::BeginMap;
  put(out, "p_p", c.froshe.shepherd.p_p);
  put(out, "d_t_initial", c.d_t_initial);
  put(out, "herd_target",
      std::string(c.froshe.shepherd.herd_target == HerdTarget::Heaviest ? "heaviest"
                                                                         : "nearest_weighted"));
  out << YAML::EndMap;

  out << YAML::Key << "monitor" << YAML::Value << YAML::BeginMap;
  put(out, "fma_window", c.froshe.monitor.fma_window);
  put(out, "sma_window", c.froshe.monitor.sma_window);
  put(out, "adjust_factor", c.froshe.monitor.adjust_factor);
  put(out, "d_t_min", c.d_t_min);
  put(out, "d_t_max", c.d_t_max);
  out << YAML::EndMap;

  out << YAML::Key << "planner" << YAML::Value << YAML::BeginMap;
  put(out, "unknown_cost", c.planner.unknown_cost);
  put(out, "robot_clearance", c.planner.robot_clearance);
  put(out, "goal_radius", c.goal_radius);
  out << YAML::EndMap;

  out << YAML::Key << "utility" << YAML::Value << YAML::BeginMap;
  put(out, "initial_utility", c.utility.initial_utility);
  put(out, "cost_weight", c.utility.cost_weight);
  put(out, "discount_range", c.utility.discount_range);
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::vector<MatrixCell> ExperimentMatrix::cells() const {
  std::vector<MatrixCell> out;
  for (EnvironmentKind env : environments) {
    for (double side : side_lengths) {
      for (int robots : robot_counts) {
        for (const auto& strategy : strategies) {
          MatrixCell cell;
          cell.config = base;
          cell.config.scenario.environment_kind = env;
          cell.config.scenario.side_length = side;
          cell.config.scenario.robot_count = robots;
          cell.config.strategy = strategy;
          cell.label = fmt::format("{}_s{}_r{}_{}", to_string(env), side, robots, strategy);
          out.push_back(std::move(cell));
        }
      }
    }
  }
  return out;
}

ExperimentMatrix parse_matrix(std::string_view yaml) {
  const YAML::Node root = load_yaml(yaml);
  if (!root.IsMap()) throw ConfigError("matrix root must be a mapping");
  ExperimentMatrix m;
  Section s(root, "matrix");
  if (root["base"]) apply(root["base"], m.base);
  s.mark("base");

  std::vector<std::string> envs;
  s.get("environments", envs);
  for (const auto& e : envs) m.environments.push_back(parse_environment(e));
  s.get("side_lengths", m.side_lengths);
  s.get("robot_counts", m.robot_counts);
  s.get("strategies", m.strategies);
  s.get("repeat_count", m.base.repeat_count);
  s.get("master_seed", m.base.master_seed);
  s.finish();

  if (m.environments.empty()) m.environments.push_back(m.base.scenario.environment_kind);
  if (m.side_lengths.empty()) m.side_lengths.push_back(m.base.scenario.side_length);
  if (m.robot_counts.empty()) m.robot_counts.push_back(m.base.scenario.robot_count);
  if (m.strategies.empty()) m.strategies.push_back(m.base.strategy);
  for (const auto& cell : m.cells()) resolve(cell.config);
  return m;
}

ExperimentMatrix load_matrix(const std::string& path) { return parse_matrix(read_file(path)); }

}  // namespace froshe
