#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "froshe/geometry.hpp"
#include "froshe/swarm.hpp"

namespace froshe {

struct SwarmBatch {
  Vec2 centroid;               // unweighted mean of member positions
  std::int64_t total_weight = 0;
  std::vector<std::size_t> members;  // ascending sheep indices

  bool operator==(const SwarmBatch&) const = default;
};

enum class ClusterMethod { SingleLinkage, KMeans };

struct AssignmentParams {
  double lambda_m = 1.0;
  double lambda_d = 0.3;
  bool exclusive = false;

  void validate() const;
};

/// Connected components of the graph linking sheep closer than
/// linkage_distance (inclusive). Batches come back sorted by descending
/// weight, then row-major centroid.
std::vector<SwarmBatch> batch_swarm(const SwarmState& state, double linkage_distance);

/// Lloyd's k-means with k distinct seed sheep drawn from seed. Same output
/// ordering as batch_swarm. Empty clusters are dropped.
std::vector<SwarmBatch> batch_swarm_kmeans(const SwarmState& state, std::size_t k,
                                           std::uint64_t seed, int max_iterations = 50);

/// Puts batches into the canonical order used for tie-breaking.
void sort_batches(std::vector<SwarmBatch>& batches);

/// Score of batch b for a robot, with weights normalised by w_max and the
/// distance by that robot's d_max. A zero normaliser drops its term.
double batch_score(const SwarmBatch& b, Vec2 robot, double w_max, double d_max,
                   const AssignmentParams& params);

/// Per-robot argmax of batch_score, first index winning ties. With
/// params.exclusive and at least as many batches as robots, robots pick in
/// index order and a taken batch leaves the later robots' menus.
std::vector<std::size_t> assign_batches(std::span<const SwarmBatch> batches,
                                        std::span<const Vec2> robots,
                                        const AssignmentParams& params);

}  // namespace froshe
