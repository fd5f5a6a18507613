#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "froshe/geometry.hpp"
#include "froshe/mapping.hpp"
#include "froshe/rng.hpp"

namespace froshe {

/// A downsampled frontier point. weight counts Unknown cells around it.
struct VirtualSheep {
  Vec2 position;
  std::int64_t weight = 0;

  bool operator==(const VirtualSheep&) const = default;
};

struct SwarmParams {
  double f_res = 2.5;            // metres; minimum spacing between sheep at allocation
  double e = 0.05;               // erroneous force magnitude
  double c_f = 0.2;              // dispersal gain
  double rho_f = 1.0;            // predatory gain
  double detection_range = 10.0; // L
  double rate = 10.0;            // r_s, Hz
  double singularity_guard = 0.1;

  void validate(double frontier_rate) const;
};

struct SwarmState {
  std::vector<VirtualSheep> sheep;
  std::uint64_t source_map_version = 0;
  Bounds bounds;

  bool empty() const noexcept { return sheep.empty(); }
};

/// Half-width, in cells, of the square window used for sheep weights.
int weight_window_half_cells(double f_res, double resolution);

/// Greedy row-major downsampling of the frontier at spacing f_res. Each
/// accepted cell becomes a sheep at its centre, weighted by the Unknown cells
/// in the f_res window around it. Pure: any previous estimate is discarded.
SwarmState allocate_virtual_sheep(const FrontierSet& frontiers, const ExplorationMap& map,
                                  const SwarmParams& params);

/// One explicit-Euler step of the inertia-free force model. Forces are read
/// as velocities:
///   noise     e * (cos a, sin a), one uniform angle a per sheep in index order
///             (drawn only when e > 0)
///   dispersal c_f * unit(v_i - centroid of the other sheep), only while some
///             robot is within L of v_i
///   predator  sum over robots within L of rho_f / max(d, guard) * unit(v_i - R_j)
/// Positions are clamped to the state's bounds; weights are untouched.
SwarmState estimate_step(const SwarmState& state, std::span<const Vec2> robots, double dt,
                         const SwarmParams& params, Rng& rng);

}  // namespace froshe
