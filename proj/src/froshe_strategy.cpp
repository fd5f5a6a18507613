#include <utility>

#include "froshe/error.hpp"
#include "froshe/strategies.hpp"

namespace froshe {

std::string_view to_string(RobotMode m) {
  switch (m) {
    case RobotMode::Idle: return "idle";
    case RobotMode::Collecting: return "collecting";
    case RobotMode::Herding: return "herding";
    case RobotMode::Frontier: return "frontier";
  }
  return "idle";
}

FrosheStrategy::FrosheStrategy(FrosheParams params, std::size_t robot_count,
                               std::int64_t explored_start, std::uint64_t seed)
    : params_(std::move(params)),
      rng_(seed),
      kmeans_seed_(splitmix64(seed)),
      monitors_(robot_count, RateMonitor(params_.monitor, params_.shepherd.d_t_initial,
                                         explored_start)),
      events_(robot_count, 0),
      decisions_(robot_count) {}

std::vector<std::optional<Directive>> FrosheStrategy::decide(const StrategyInput& in) {
  const std::size_t n = in.poses.size();
  if (n != monitors_.size()) throw Error("robot count changed between decisions");

  // A snapshot whose cells match the previous one is not a new frontier
  // set, even though the map version moved on.
  reset_ = !has_swarm_ || (in.frontiers.map_version != swarm_.source_map_version &&
                           in.frontiers.cells != frontier_cells_);
  if (reset_) {
    swarm_ = allocate_virtual_sheep(in.frontiers, in.map, params_.swarm);
    frontier_cells_ = in.frontiers.cells;
    has_swarm_ = true;
  } else {
    swarm_ = estimate_step(swarm_, in.poses, in.dt, params_.swarm, rng_);
  }

  for (std::size_t i = 0; i < n; ++i) {
    monitors_[i].record(in.map.explored_cell_count());
    events_[i] = monitors_[i].maybe_switch(monitors_[i].dominant_mode()) ? 1 : 0;
  }

  std::vector<std::optional<Directive>> out(n);
  decisions_.assign(n, std::nullopt);
  complete_ = swarm_.empty();
  if (complete_) {
    batches_.clear();
    assignment_.clear();
    return out;
  }

  if (params_.cluster == ClusterMethod::KMeans) {
    const std::size_t k = params_.kmeans_k == 0 ? n : params_.kmeans_k;
    batches_ = batch_swarm_kmeans(swarm_, k, kmeans_seed_);
  } else {
    batches_ = batch_swarm(swarm_, params_.linkage_distance);
  }
  assignment_ = assign_batches(batches_, in.poses, params_.assignment);

  for (std::size_t i = 0; i < n; ++i) {
    if (!reset_ && !in.idle[i]) continue;
    ShepherdDecision d = decide_robot(i, in.poses[i]);
    monitors_[i].note_mode(d.mode);
    out[i] = Directive{d.mode == ShepherdMode::Collecting ? RobotMode::Collecting
                                                          : RobotMode::Herding,
                       d.waypoints};
    decisions_[i] = std::move(d);
  }
  return out;
}

ShepherdDecision FrosheStrategy::decide_robot(std::size_t robot, Vec2 pose) const {
  const std::size_t own = assignment_[robot];
  const SwarmBatch& batch = batches_[own];
  const auto& cfg = params_.shepherd;
  try {
    if (is_compact(batch, swarm_.sheep, monitors_[robot].d_t())) {
      return herding_decision(own, batches_, swarm_.sheep, pose, cfg);
    }
    return collecting_decision(batch, swarm_.sheep, pose, cfg);
  } catch (const GeometryError&) {
    // Lone sheep with nowhere to herd it: go and look at it directly.
    ShepherdDecision d;
    d.mode = ShepherdMode::Collecting;
    d.center_of_mass = batch.centroid;
    d.waypoints = {cfg.bounds.clamp(batch.centroid)};
    return d;
  }
}

}  // namespace froshe
