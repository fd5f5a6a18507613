#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "froshe/batching.hpp"
#include "froshe/mapping.hpp"
#include "froshe/monitor.hpp"
#include "froshe/planner.hpp"
#include "froshe/shepherd.hpp"
#include "froshe/swarm.hpp"

namespace froshe {

enum class RobotMode { Idle, Collecting, Herding, Frontier };

std::string_view to_string(RobotMode m);

/// A replacement plan for one robot: visit the waypoints in order.
struct Directive {
  RobotMode mode = RobotMode::Frontier;
  std::vector<Vec2> waypoints;

  bool operator==(const Directive&) const = default;
};

/// Everything a strategy may look at on one decision tick. The frontier set
/// is the latest published snapshot and may lag the map.
struct StrategyInput {
  const ExplorationMap& map;
  const FrontierSet& frontiers;
  std::span<const Vec2> poses;
  std::span<const std::uint8_t> idle;  // robot finished or abandoned its plan
  std::uint64_t tick = 0;
  double dt = 0.1;                      // seconds between decision ticks
};

class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual std::string_view name() const = 0;
  /// One entry per robot; nullopt keeps that robot's current plan.
  virtual std::vector<std::optional<Directive>> decide(const StrategyInput& in) = 0;
  /// Set once the strategy has nothing left to explore.
  virtual bool exploration_complete() const { return false; }
};

// ---------------------------------------------------------------------------
// FroShe

struct FrosheParams {
  SwarmParams swarm;
  ClusterMethod cluster = ClusterMethod::SingleLinkage;
  double linkage_distance = 7.5;
  std::size_t kmeans_k = 0;  // 0: one cluster per robot
  AssignmentParams assignment;
  ShepherdConfig shepherd;
  MonitorParams monitor;
};

/// Per-tick pipeline: reset the swarm on a new frontier snapshot (otherwise
/// propagate it one estimator step), cluster it, assign batches, feed every
/// robot's rate monitor, then give each robot that needs one a collecting or
/// herding plan depending on whether its batch is compact under its d_t.
/// Robots are re-planned on every reset and whenever their plan runs out.
class FrosheStrategy final : public Strategy {
 public:
  FrosheStrategy(FrosheParams params, std::size_t robot_count, std::int64_t explored_start,
                 std::uint64_t seed);

  std::string_view name() const override { return "froshe"; }
  std::vector<std::optional<Directive>> decide(const StrategyInput& in) override;
  bool exploration_complete() const override { return complete_; }

  const SwarmState& swarm() const noexcept { return swarm_; }
  const std::vector<SwarmBatch>& batches() const noexcept { return batches_; }
  const std::vector<std::size_t>& assignment() const noexcept { return assignment_; }
  const std::vector<RateMonitor>& monitors() const noexcept { return monitors_; }
  /// Whether each robot's d_t moved on the last tick.
  const std::vector<std::uint8_t>& threshold_events() const noexcept { return events_; }
  /// Decisions issued on the last tick (nullopt where the robot kept its plan).
  const std::vector<std::optional<ShepherdDecision>>& last_decisions() const noexcept {
    return decisions_;
  }
  bool last_tick_reset() const noexcept { return reset_; }

 private:
  ShepherdDecision decide_robot(std::size_t robot, Vec2 pose) const;

  FrosheParams params_;
  Rng rng_;
  std::uint64_t kmeans_seed_;
  SwarmState swarm_;
  std::vector<Cell> frontier_cells_;
  bool has_swarm_ = false;
  bool complete_ = false;
  bool reset_ = false;
  std::vector<SwarmBatch> batches_;
  std::vector<std::size_t> assignment_;
  std::vector<RateMonitor> monitors_;
  std::vector<std::uint8_t> events_;
  std::vector<std::optional<ShepherdDecision>> decisions_;
};

// ---------------------------------------------------------------------------
// Baselines

/// Shared bookkeeping for the frontier-cell baselines: current target per
/// robot and frontier cells abandoned after a robot stood on them.
class FrontierTargetingBase : public Strategy {
 public:
  explicit FrontierTargetingBase(std::size_t robot_count);
  bool exploration_complete() const override { return complete_; }
  const std::vector<std::optional<Cell>>& targets() const noexcept { return targets_; }

 protected:
  /// Rebuilds the frontier bitmap when the snapshot version changes; returns
  /// true on a new snapshot. Also blacklists targets of idle robots.
  bool refresh(const StrategyInput& in);
  bool target_valid(const ExplorationMap& map, std::size_t robot) const;

  std::vector<std::optional<Cell>> targets_;
  std::vector<std::uint8_t> frontier_mask_;  // current snapshot minus blacklist
  std::vector<std::uint8_t> blacklist_;
  std::vector<std::uint8_t> search_failed_;  // no target found on this snapshot
  std::uint64_t snapshot_version_ = 0;
  bool has_snapshot_ = false;
  bool complete_ = false;
};

/// Each robot heads for its cheapest-to-reach frontier cell, independently.
class GreedyStrategy final : public FrontierTargetingBase {
 public:
  GreedyStrategy(std::size_t robot_count, PlannerOptions planner);
  std::string_view name() const override { return "greedy"; }
  std::vector<std::optional<Directive>> decide(const StrategyInput& in) override;

 private:
  PlannerOptions planner_;
};

struct UtilityParams {
  double initial_utility = 1.0;
  double cost_weight = 1.0;    // weight on the robot's normalised path cost
  double discount_range = 10.0;  // frontiers this close to a taken target lose utility
};

/// Sequential coordinated assignment. Robots pick in index order, each
/// maximising utility - cost_weight * cost / max_cost over reachable
/// frontiers; after a pick, every frontier within discount_range of it loses
/// max(0, 1 - d / discount_range) utility. Lowest frontier index wins ties.
/// costs[r][f] is kUnreachable where robot r cannot reach frontier f.
std::vector<std::optional<std::size_t>> utility_assign(
    std::span<const std::vector<std::int64_t>> costs, std::span<const Vec2> frontier_positions,
    const UtilityParams& params);

class UtilityStrategy final : public FrontierTargetingBase {
 public:
  UtilityStrategy(std::size_t robot_count, PlannerOptions planner, UtilityParams params);
  std::string_view name() const override { return "utility"; }
  std::vector<std::optional<Directive>> decide(const StrategyInput& in) override;

 private:
  PlannerOptions planner_;
  UtilityParams params_;
};

}  // namespace froshe
