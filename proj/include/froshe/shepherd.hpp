#pragma once

#include <optional>
#include <span>
#include <vector>

#include "froshe/batching.hpp"
#include "froshe/geometry.hpp"
#include "froshe/mode.hpp"
#include "froshe/swarm.hpp"

namespace froshe {

/// How the herding target batch is picked among the other batches.
enum class HerdTarget {
  Heaviest,         // largest total weight
  NearestWeighted,  // largest weight per metre from the own centroid
};

struct ShepherdConfig {
  double p_p = 0.7;               // perception parameter, (0, 1]
  double detection_range = 10.0;  // L
  double d_t_initial = 10.0;
  HerdTarget herd_target = HerdTarget::Heaviest;
  Bounds bounds;                  // waypoints are clamped into this box

  void validate() const;
};

struct ShepherdDecision {
  ShepherdMode mode = ShepherdMode::Collecting;
  std::vector<Vec2> waypoints;
  Vec2 center_of_mass;              // C_m
  std::optional<Vec2> farthest;     // v_f, collecting only
  std::optional<Vec2> herd_center;  // C_h, herding only
  bool clamped = false;             // a waypoint was pulled back into bounds
};

/// True iff every member lies within d_t of the batch centroid.
bool is_compact(const SwarmBatch& batch, std::span<const VirtualSheep> sheep, double d_t);

/// Member farthest from the centroid; the lowest sheep index wins ties.
std::size_t farthest_member(const SwarmBatch& batch, std::span<const VirtualSheep> sheep);

/// Collecting pose P_c = v_f + p_p*L*unit(C_m - v_f); waypoints [P_c, C_m].
/// Throws GeometryError if v_f coincides with C_m.
ShepherdDecision collecting_decision(const SwarmBatch& batch, std::span<const VirtualSheep> sheep,
                                     Vec2 robot, const ShepherdConfig& cfg);

/// Driving pose P_d = C_m - p_p*L*unit(C_m - C_h); waypoints [P_d, C_h].
/// C_h is the chosen other batch's centroid. With no other batch, C_h is the
/// own centroid pushed away from the robot (C_m + (C_m - robot)). If C_h ends
/// up equal to C_m the decision falls back to collecting on the own batch.
ShepherdDecision herding_decision(std::size_t own, std::span<const SwarmBatch> batches,
                                  std::span<const VirtualSheep> sheep, Vec2 robot,
                                  const ShepherdConfig& cfg);

/// Index of the batch herding would target, or nullopt when own is alone.
std::optional<std::size_t> herd_target_batch(std::size_t own, std::span<const SwarmBatch> batches,
                                             HerdTarget rule);

}  // namespace froshe
