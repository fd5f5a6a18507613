#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "froshe/geometry.hpp"
#include "froshe/mapping.hpp"

namespace froshe {

/// Edge costs are integers (micro-cells) so searches are exact and ties are
/// well defined. A diagonal step costs round(sqrt(2) * 1e6).
inline constexpr std::int64_t kStraightCost = 1'000'000;
inline constexpr std::int64_t kDiagonalCost = 1'414'214;
inline constexpr std::int64_t kUnreachable = -1;

struct PlannerOptions {
  double unknown_cost = 1.0;     // multiplier for stepping into Unknown cells
  double goal_radius = 5.0;      // substitute-goal search radius, metres
  double robot_clearance = 1.0;  // cells this close to another robot are blocked
};

struct PlannedPath {
  std::vector<Cell> cells;  // start cell first, goal cell last
  std::int64_t cost = 0;    // in cost units
  Cell goal;
  bool substituted = false;

  double cost_metres(double resolution) const {
    return static_cast<double>(cost) / static_cast<double>(kStraightCost) * resolution;
  }
};

/// Blocked cells for a search: Occupied map cells plus the clearance disk
/// around each other robot. Disk cells near the keep_clear points stay open.
std::vector<std::uint8_t> blocked_mask(const ExplorationMap& map, std::span<const Vec2> others,
                                       double clearance, std::span<const Vec2> keep_clear);

/// Cost of the 8-connected step a -> b, or kUnreachable. Diagonal steps need
/// both orthogonal neighbours open (no corner cutting).
std::int64_t step_cost(const ExplorationMap& map, std::span<const std::uint8_t> blocked, Cell a,
                       Cell b, const PlannerOptions& opts);

/// Shortest 8-connected path over non-Occupied cells (A*, octile heuristic).
/// If the goal cell is blocked or unreachable, plans to the reachable cell
/// nearest the goal within opts.goal_radius. Throws PathError when the start
/// is blocked or nothing near the goal is reachable.
PlannedPath plan_path(const ExplorationMap& map, Vec2 from, Vec2 to, const PlannerOptions& opts,
                      std::span<const Vec2> other_robots = {});

/// Single-source Dijkstra costs over the whole map (kUnreachable where no path).
std::vector<std::int64_t> cost_field(const ExplorationMap& map, Cell from,
                                     const PlannerOptions& opts,
                                     std::span<const Vec2> other_robots = {});

struct TargetHit {
  Cell cell;
  std::int64_t cost = 0;
};

/// Cheapest cell with is_target set (row-major order breaks cost ties), via
/// Dijkstra that stops as soon as the answer is known.
std::optional<TargetHit> nearest_target(const ExplorationMap& map, Cell from,
                                        std::span<const std::uint8_t> is_target,
                                        const PlannerOptions& opts);

struct RobotState {
  Vec2 pose;
  double max_speed = 1.0;
  double max_accel = 1.0;
  std::vector<Cell> path;
  std::size_t next = 0;  // index of the next path cell to reach
  double speed = 0.0;
  Vec2 velocity;

  bool path_done() const noexcept { return next >= path.size(); }
  void set_path(std::vector<Cell> cells) {
    path = std::move(cells);
    next = 0;
  }
};

enum class MotionStatus { Idle, Moving, Arrived, Blocked };

/// Advances along the path at speed min(v + a*dt, v_max, sqrt(2*a*remaining)),
/// which yields a trapezoidal profile that stops exactly on the last cell
/// centre. Intermediate cells within half a cell are skipped. Motion stops
/// (Blocked) rather than enter a cell the map marks Occupied.
MotionStatus step_motion(RobotState& robot, const ExplorationMap& map, double dt);

}  // namespace froshe
