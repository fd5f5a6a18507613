#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "froshe/environment.hpp"
#include "froshe/strategies.hpp"

namespace froshe {

struct SimConfig {
  ScenarioSpec scenario;
  SensorModel sensor;
  std::string strategy = "froshe";
  double tick_rate = 10.0;      // Hz of simulated time
  double frontier_rate = 1.0;   // r_f, Hz
  double time_cap = 3600.0;     // seconds
  double coverage_target = 0.99;  // of flood-fill reachable cells
  std::uint64_t master_seed = 1;
  int repeat_count = 1;

  // Unset values resolve from the environment kind (grass 4 m/s, 2 m/s^2;
  // forest 1 m/s, 1 m/s^2).
  std::optional<double> max_speed;
  std::optional<double> max_accel;

  FrosheParams froshe;
  // Unset values resolve from f_res and the world size.
  std::optional<double> linkage_distance;  // 3 * f_res
  std::optional<double> d_t_min;           // f_res
  std::optional<double> d_t_max;           // world diagonal
  std::optional<double> d_t_initial;       // sensor range

  PlannerOptions planner;
  std::optional<double> goal_radius;  // 2 * f_res
  UtilityParams utility;

  bool debug_traces = false;
};

/// Fills every optional with its resolved value and copies the sensor range
/// into the swarm and shepherd parameters. The result validates cleanly or
/// resolve() throws ConfigError.
SimConfig resolve(const SimConfig& config);

/// Throws ConfigError describing the first inconsistency found.
void validate(const SimConfig& config);

std::unique_ptr<Strategy> make_strategy(const SimConfig& resolved, std::int64_t explored_start,
                                        std::uint64_t seed);

struct RobotSample {
  Vec2 pose;
  RobotMode mode = RobotMode::Idle;
};

struct TickSample {
  std::uint64_t tick = 0;
  double time = 0.0;
  std::int64_t explored_cells = 0;
  double explored_fraction = 0.0;
  std::vector<RobotSample> robots;
};

enum class Termination { Coverage, FrontiersExhausted, TimeCap };

std::string_view to_string(Termination t);

struct RunSummary {
  std::string strategy;
  int robot_count = 0;
  std::uint64_t seed = 0;
  bool completed = false;
  double completion_time = 0.0;  // time at termination (the cap for DNF)
  Termination termination = Termination::TimeCap;
  std::vector<double> distance;  // metres travelled per robot
  std::int64_t mode_switches = 0;     // consecutive directives with a different mode
  std::int64_t threshold_events = 0;  // d_t adjustments by rate monitors
  std::int64_t reachable_cells = 0;
  double final_fraction = 0.0;
  std::uint64_t ticks = 0;
};

/// Debug traces as CSV text, only filled when debug_traces is set.
struct RunTraces {
  std::string swarm;      // tick,sheep_id,x,y,weight
  std::string decisions;  // tick,robot_id,mode,waypoint_index,x,y
  std::vector<std::string> monitors;  // per robot: tick,explored_pct,delta_e,fma,sma,d_t,event_flag
};

struct RunMetrics {
  std::vector<TickSample> samples;
  RunSummary summary;
  std::optional<RunTraces> traces;
};

/// One lock-step simulation. Per tick: sense and merge into the shared map,
/// publish frontiers on r_f boundaries, let the strategy decide on r_s
/// boundaries, move robots, then check termination. Identical configs give
/// identical metrics.
RunMetrics run(const SimConfig& config);

struct SuiteStats {
  std::size_t runs = 0;
  std::size_t completed = 0;
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double q);
SuiteStats summarize(const std::vector<double>& completion_times);

struct SuiteResult {
  std::vector<RunMetrics> runs;
  SuiteStats stats;
};

/// repeat_count runs with seeds master_seed + k, spread over at most
/// `workers` threads (0: hardware concurrency). Results are in seed order
/// regardless of scheduling. A failing run is rethrown tagged with its index.
SuiteResult run_suite(const SimConfig& config, unsigned workers = 0);

/// Long-format per-tick CSV:
/// tick,time,explored_cells,explored_fraction,robot_id,x,y,mode
void write_metrics_csv(std::ostream& out, const RunMetrics& metrics);
std::string metrics_csv(const RunMetrics& metrics);

/// JSON text for one run's summary, and for a suite (summary per run + stats).
std::string summary_json(const RunSummary& summary);
std::string suite_json(const SuiteResult& suite);

}  // namespace froshe
