#include "froshe/engine.hpp"

#include <fmt/format.h>

#include <atomic>
#include <cmath>
#include <exception>
#include <iterator>
#include <ostream>
#include <thread>

#include "froshe/error.hpp"
#include "froshe/rng.hpp"

namespace froshe {
namespace {

constexpr double kTimeEps = 1e-9;

bool integral_ratio(double num, double den) {
  const double r = num / den;
  return r >= 1.0 - 1e-9 && std::abs(r - std::round(r)) < 1e-9;
}

std::uint64_t ticks_per(double tick_rate, double rate) {
  return static_cast<std::uint64_t>(std::llround(tick_rate / rate));
}

GridGeometry geometry_for(const ScenarioSpec& s) {
  const int interior = static_cast<int>(std::lround(s.side_length / s.resolution));
  return {interior + 2, interior + 2, s.resolution};
}

struct RobotRecord {
  RobotState state;
  std::vector<Vec2> pending;
  std::size_t leg = 0;
  RobotMode mode = RobotMode::Idle;
  bool idle = true;
  std::optional<RobotMode> last_mode;
  double distance = 0.0;
};

}  // namespace

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Coverage: return "coverage";
    case Termination::FrontiersExhausted: return "frontiers_exhausted";
    case Termination::TimeCap: return "time_cap";
  }
  return "time_cap";
}

SimConfig resolve(const SimConfig& config) {
  SimConfig c = config;
  validate(c.scenario);
  const bool forest = c.scenario.environment_kind == EnvironmentKind::Forest;
  c.max_speed = c.max_speed.value_or(forest ? 1.0 : 4.0);
  c.max_accel = c.max_accel.value_or(forest ? 1.0 : 2.0);

  const double f_res = c.froshe.swarm.f_res;
  const GridGeometry geom = geometry_for(c.scenario);
  c.linkage_distance = c.linkage_distance.value_or(3.0 * f_res);
  c.d_t_min = c.d_t_min.value_or(f_res);
  c.d_t_max = c.d_t_max.value_or(geom.interior().diagonal());
  c.d_t_initial = c.d_t_initial.value_or(c.sensor.range);
  c.goal_radius = c.goal_radius.value_or(2.0 * f_res);

  c.froshe.linkage_distance = *c.linkage_distance;
  c.froshe.swarm.detection_range = c.sensor.range;
  c.froshe.shepherd.detection_range = c.sensor.range;
  c.froshe.shepherd.d_t_initial = *c.d_t_initial;
  c.froshe.shepherd.bounds = geom.interior();
  c.froshe.monitor.d_t_min = *c.d_t_min;
  c.froshe.monitor.d_t_max = *c.d_t_max;
  c.planner.goal_radius = *c.goal_radius;
  validate(c);
  return c;
}

void validate(const SimConfig& c) {
  validate(c.scenario);
  validate(c.sensor);
  if (c.strategy != "froshe" && c.strategy != "greedy" && c.strategy != "utility") {
    throw ConfigError(fmt::format("unknown strategy '{}'", c.strategy));
  }
  if (!(c.tick_rate > 0.0)) throw ConfigError("tick_rate must be positive");
  if (!(c.frontier_rate > 0.0)) throw ConfigError("frontier_rate must be positive");
  if (!integral_ratio(c.tick_rate, c.frontier_rate)) {
    throw ConfigError("tick_rate must be a whole multiple of frontier_rate");
  }
  if (!(c.froshe.swarm.rate > 0.0) || !integral_ratio(c.tick_rate, c.froshe.swarm.rate)) {
    throw ConfigError("tick_rate must be a whole multiple of the swarm rate");
  }
  if (c.time_cap < 0.0) throw ConfigError("time_cap must be non-negative");
  if (!(c.coverage_target > 0.0 && c.coverage_target <= 1.0)) {
    throw ConfigError("coverage_target must lie in (0, 1]");
  }
  if (c.repeat_count < 1) throw ConfigError("repeat_count must be at least 1");
  if (c.max_speed && !(*c.max_speed > 0.0)) throw ConfigError("max_speed must be positive");
  if (c.max_accel && !(*c.max_accel > 0.0)) throw ConfigError("max_accel must be positive");
  if (c.planner.unknown_cost <= 0.0) throw ConfigError("unknown_cost must be positive");
  if (c.planner.robot_clearance < 0.0) throw ConfigError("robot_clearance must be >= 0");
  c.froshe.swarm.validate(c.frontier_rate);
  c.froshe.assignment.validate();
  c.froshe.shepherd.validate();
  c.froshe.monitor.validate();
  if (!(c.froshe.linkage_distance > 0.0)) throw ConfigError("linkage_distance must be positive");
  if (!(c.utility.discount_range > 0.0)) throw ConfigError("discount_range must be positive");
}

std::unique_ptr<Strategy> make_strategy(const SimConfig& resolved, std::int64_t explored_start,
                                        std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(resolved.scenario.robot_count);
  if (resolved.strategy == "froshe") {
    return std::make_unique<FrosheStrategy>(resolved.froshe, n, explored_start, seed);
  }
  if (resolved.strategy == "greedy") return std::make_unique<GreedyStrategy>(n, resolved.planner);
  if (resolved.strategy == "utility") {
    return std::make_unique<UtilityStrategy>(n, resolved.planner, resolved.utility);
  }
  throw ConfigError(fmt::format("unknown strategy '{}'", resolved.strategy));
}

RunMetrics run(const SimConfig& config) {
  const SimConfig cfg = resolve(config);
  const std::uint64_t seed = cfg.master_seed;

  ScenarioSpec spec = cfg.scenario;
  spec.rng_seed = derive_seed(seed ^ splitmix64(cfg.scenario.rng_seed), Stream::World);
  const World world = generate_world(spec);
  const GridGeometry& geom = world.grid.geometry;

  std::vector<std::uint8_t> reachable(geom.size(), 0);
  for (const Vec2& s : world.spawns) {
    const auto m = reachable_mask(world.grid, geom.cell_of(s));
    for (std::size_t i = 0; i < m.size(); ++i) reachable[i] |= m[i];
  }
  std::int64_t reachable_total = 0;
  for (auto r : reachable) reachable_total += r;

  ExplorationMap map(geom);
  std::int64_t explored_reachable = 0;
  Rng sensor_rng(derive_seed(seed, Stream::Sensor));
  Rng* noise = cfg.sensor.range_noise_sigma > 0.0 ? &sensor_rng : nullptr;
  const auto visit = [&](Cell c, Observed o) {
    if (map.reveal(c, o == Observed::Free ? MapCell::Free : MapCell::Occupied) &&
        reachable[geom.index(c)]) {
      ++explored_reachable;
    }
  };

  std::vector<RobotRecord> robots(world.spawns.size());
  for (std::size_t i = 0; i < robots.size(); ++i) {
    robots[i].state.pose = world.spawns[i];
    robots[i].state.max_speed = *cfg.max_speed;
    robots[i].state.max_accel = *cfg.max_accel;
  }
  const std::size_t n = robots.size();

  auto sense_all = [&] {
    for (const auto& r : robots) cast_rays(world.grid, r.state.pose, cfg.sensor, visit, noise);
    map.bump_version();
  };
  auto fraction = [&] {
    return reachable_total == 0 ? 1.0
                                : static_cast<double>(explored_reachable) /
                                      static_cast<double>(reachable_total);
  };
  auto others_of = [&](std::size_t i) {
    std::vector<Vec2> out;
    out.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) out.push_back(robots[j].state.pose);
    }
    return out;
  };
  auto start_leg = [&](std::size_t i) {
    auto& r = robots[i];
    const auto others = others_of(i);
    while (r.leg < r.pending.size()) {
      try {
        auto path = plan_path(map, r.state.pose, r.pending[r.leg], cfg.planner, others);
        r.state.set_path(std::move(path.cells));
        r.idle = false;
        return;
      } catch (const PathError&) {
        ++r.leg;
      }
    }
    r.state.set_path({});
    r.idle = true;
  };
  auto path_blocked = [&](const RobotState& s) {
    for (std::size_t k = s.next; k < s.path.size(); ++k) {
      if (map.at(s.path[k]) == MapCell::Occupied) return true;
    }
    return false;
  };

  RunMetrics metrics;
  auto& summary = metrics.summary;
  summary.strategy = cfg.strategy;
  summary.robot_count = static_cast<int>(n);
  summary.seed = seed;
  summary.reachable_cells = reachable_total;
  if (cfg.debug_traces) {
    metrics.traces.emplace();
    metrics.traces->swarm = "tick,sheep_id,x,y,weight\n";
    metrics.traces->decisions = "tick,robot_id,mode,waypoint_index,x,y\n";
    metrics.traces->monitors.assign(n, "tick,explored_pct,delta_e,fma,sma,d_t,event_flag\n");
  }

  const double dt = 1.0 / cfg.tick_rate;
  const std::uint64_t frontier_every = ticks_per(cfg.tick_rate, cfg.frontier_rate);
  const std::uint64_t swarm_every = ticks_per(cfg.tick_rate, cfg.froshe.swarm.rate);
  const double decision_dt = static_cast<double>(swarm_every) * dt;

  auto record = [&](std::uint64_t tick, double t) {
    TickSample s;
    s.tick = tick;
    s.time = t;
    s.explored_cells = map.explored_cell_count();
    s.explored_fraction = fraction();
    s.robots.reserve(n);
    for (const auto& r : robots) {
      s.robots.push_back({r.state.pose, r.idle ? RobotMode::Idle : r.mode});
    }
    metrics.samples.push_back(std::move(s));
  };

  sense_all();
  FrontierSet frontiers = detect_frontiers(map);
  auto strategy = make_strategy(cfg, map.explored_cell_count(), derive_seed(seed, Stream::Swarm));
  auto* froshe = dynamic_cast<FrosheStrategy*>(strategy.get());

  std::uint64_t tick = 0;
  double t = 0.0;
  record(tick, t);

  while (true) {
    if (fraction() >= cfg.coverage_target - 1e-12) {
      summary.completed = true;
      summary.termination = Termination::Coverage;
      break;
    }
    if (frontiers.empty()) {
      summary.completed = true;
      summary.termination = Termination::FrontiersExhausted;
      break;
    }
    if (t >= cfg.time_cap - kTimeEps) {
      summary.completed = false;
      summary.termination = Termination::TimeCap;
      break;
    }

    if (tick % swarm_every == 0) {
      std::vector<Vec2> poses(n);
      std::vector<std::uint8_t> idle(n);
      for (std::size_t i = 0; i < n; ++i) {
        poses[i] = robots[i].state.pose;
        idle[i] = robots[i].idle ? 1 : 0;
      }
      const StrategyInput in{map, frontiers, poses, idle, tick, decision_dt};
      auto directives = strategy->decide(in);
      for (std::size_t i = 0; i < n; ++i) {
        if (!directives[i]) continue;
        auto& r = robots[i];
        if (r.last_mode && *r.last_mode != directives[i]->mode) ++summary.mode_switches;
        r.last_mode = directives[i]->mode;
        r.mode = directives[i]->mode;
        r.pending = std::move(directives[i]->waypoints);
        r.leg = 0;
        start_leg(i);
        if (metrics.traces) {
          for (std::size_t k = 0; k < r.pending.size(); ++k) {
            fmt::format_to(std::back_inserter(metrics.traces->decisions),
                           "{},{},{},{},{:.4f},{:.4f}\n", tick, i, to_string(r.mode), k,
                           r.pending[k].x, r.pending[k].y);
          }
        }
      }
      if (froshe != nullptr) {
        for (std::size_t i = 0; i < n; ++i) summary.threshold_events += froshe->threshold_events()[i];
        if (metrics.traces) {
          const auto& sheep = froshe->swarm().sheep;
          for (std::size_t k = 0; k < sheep.size(); ++k) {
            fmt::format_to(std::back_inserter(metrics.traces->swarm), "{},{},{:.4f},{:.4f},{}\n",
                           tick, k, sheep[k].position.x, sheep[k].position.y, sheep[k].weight);
          }
          for (std::size_t i = 0; i < n; ++i) {
            const auto& m = froshe->monitors()[i];
            fmt::format_to(std::back_inserter(metrics.traces->monitors[i]),
                           "{},{:.4f},{},{:.6f},{:.6f},{:.6f},{}\n", tick, 100.0 * fraction(),
                           m.last_delta(), m.fma(), m.sma(), m.d_t(),
                           static_cast<int>(froshe->threshold_events()[i]));
          }
        }
      }
    }

    for (std::size_t i = 0; i < n; ++i) {
      auto& r = robots[i];
      if (r.idle) continue;
      if (path_blocked(r.state)) start_leg(i);
      if (r.idle) continue;
      const Vec2 before = r.state.pose;
      const MotionStatus status = step_motion(r.state, map, dt);
      r.distance += distance(before, r.state.pose);
      if (status == MotionStatus::Arrived || status == MotionStatus::Idle) {
        ++r.leg;
        start_leg(i);
      } else if (status == MotionStatus::Blocked) {
        start_leg(i);
      }
    }

    ++tick;
    t = static_cast<double>(tick) * dt;
    sense_all();
    if (tick % frontier_every == 0) frontiers = detect_frontiers(map);
    record(tick, t);
  }

  summary.completion_time = t;
  summary.final_fraction = fraction();
  summary.ticks = tick;
  summary.distance.reserve(n);
  for (const auto& r : robots) summary.distance.push_back(r.distance);
  return metrics;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + (values[hi] - values[lo]) * frac;
}

SuiteStats summarize(const std::vector<double>& times) {
  SuiteStats s;
  s.runs = times.size();
  if (times.empty()) return s;
  double sum = 0.0;
  for (double v : times) sum += v;
  s.mean = sum / static_cast<double>(times.size());
  s.median = quantile(times, 0.5);
  s.q1 = quantile(times, 0.25);
  s.q3 = quantile(times, 0.75);
  s.iqr = s.q3 - s.q1;
  s.min = *std::min_element(times.begin(), times.end());
  s.max = *std::max_element(times.begin(), times.end());
  return s;
}

SuiteResult run_suite(const SimConfig& config, unsigned workers) {
  resolve(config);  // surface configuration errors before any work starts
  const auto count = static_cast<std::size_t>(config.repeat_count);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));

  SuiteResult result;
  result.runs.resize(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < count; k = next++) {
      try {
        SimConfig c = config;
        c.master_seed = config.master_seed + k;
        result.runs[k] = run(c);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (std::size_t k = 0; k < count; ++k) {
    if (!errors[k]) continue;
    try {
      std::rethrow_exception(errors[k]);
    } catch (const std::exception& e) {
      throw Error(fmt::format("run {}: {}", k, e.what()));
    }
  }

  std::vector<double> times;
  for (const auto& r : result.runs) {
    times.push_back(r.summary.completion_time);
    if (r.summary.completed) ++result.stats.completed;
  }
  const std::size_t completed = result.stats.completed;
  result.stats = summarize(times);
  result.stats.completed = completed;
  return result;
}

void write_metrics_csv(std::ostream& out, const RunMetrics& metrics) {
  out << metrics_csv(metrics);
}

std::string metrics_csv(const RunMetrics& metrics) {
  std::string out = "tick,time,explored_cells,explored_fraction,robot_id,x,y,mode\n";
  for (const auto& s : metrics.samples) {
    for (std::size_t i = 0; i < s.robots.size(); ++i) {
      fmt::format_to(std::back_inserter(out), "{},{:.2f},{},{:.6f},{},{:.4f},{:.4f},{}\n", s.tick,
                     s.time, s.explored_cells, s.explored_fraction, i, s.robots[i].pose.x,
                     s.robots[i].pose.y, to_string(s.robots[i].mode));
    }
  }
  return out;
}

}  // namespace froshe
