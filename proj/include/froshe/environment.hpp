#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "froshe/geometry.hpp"
#include "froshe/rng.hpp"

namespace froshe {

enum class WorldCell : std::uint8_t { Free, Occupied };

/// Ground-truth raster. The outermost ring of cells is always Occupied.
struct WorldGrid {
  GridGeometry geometry;
  std::vector<WorldCell> cells;

  WorldCell at(Cell c) const { return cells[geometry.index(c)]; }
  bool occupied(Cell c) const { return at(c) == WorldCell::Occupied; }
  std::size_t occupied_interior_count() const;
};

enum class EnvironmentKind { GrassPlane, Forest };

struct ScenarioSpec {
  EnvironmentKind environment_kind = EnvironmentKind::GrassPlane;
  double side_length = 40.0;    // metres, interior only
  double resolution = 0.5;      // metres per cell
  double tree_density = 0.05;   // trees per square metre (Forest only)
  double tree_radius = 0.3;     // metres
  std::uint64_t rng_seed = 0;
  int robot_count = 1;
  double spawn_radius = 5.0;
  /// Designated start point in world metres; defaults to the interior centre.
  std::optional<Vec2> start;
};

struct SensorModel {
  double range = 10.0;
  int ray_count = 360;
  double range_noise_sigma = 0.0;
};

/// Output of scenario generation: the raster plus what was placed on it.
struct World {
  WorldGrid grid;
  std::vector<Vec2> spawns;
  std::vector<Vec2> trees;
  Vec2 start;
};

/// Minimum distance kept between a tree's edge and any spawn position.
inline constexpr double kSpawnClearance = 1.0;
/// Minimum distance between two spawned robots.
inline constexpr double kRobotSeparation = 1.0;

void validate(const ScenarioSpec& spec);
void validate(const SensorModel& sensor);

/// Deterministic in spec (including rng_seed). Throws GenerationError when
/// spawns or trees cannot be placed within the retry budget.
World generate_world(const ScenarioSpec& spec);

enum class Observed : std::uint8_t { Free, Occupied };

struct Observation {
  Cell cell;
  Observed state;

  bool operator==(const Observation&) const = default;
};

/// Low-level ray caster shared by sense() and the engine's hot loop. Calls
/// visit once per cell touched by each ray (cells may repeat across rays).
/// When noise is non-null and sensor.range_noise_sigma > 0, each ray's reach
/// is jittered by a Gaussian draw.
void cast_rays(const WorldGrid& world, Vec2 pose, const SensorModel& sensor,
               const std::function<void(Cell, Observed)>& visit, Rng* noise = nullptr);

/// Set of cells seen from pose, deduplicated and in row-major order. Each ray
/// reports the Free cells it crosses and stops at the first Occupied cell;
/// only cells whose centre lies within the ray's reach are reported.
std::vector<Observation> sense(const WorldGrid& world, Vec2 pose, const SensorModel& sensor,
                               Rng* noise = nullptr);

/// Free cells 4-connected to start (diagonal moves without corner cutting
/// reach exactly the same set).
std::vector<std::uint8_t> reachable_mask(const WorldGrid& world, Cell start);

}  // namespace froshe
