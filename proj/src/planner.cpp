#include "froshe/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "froshe/error.hpp"

namespace froshe {
namespace {

constexpr Cell kSteps[8] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, 1}, {1, -1}, {-1, -1}};

struct QueueEntry {
  std::int64_t f;
  std::int64_t g;
  std::size_t idx;

  // Min-heap on f, then larger g (deeper first), then lower index.
  bool operator>(const QueueEntry& o) const noexcept {
    if (f != o.f) return f > o.f;
    if (g != o.g) return g < o.g;
    return idx > o.idx;
  }
};

using MinHeap = std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>>;

std::int64_t octile(Cell a, Cell b) {
  const std::int64_t dx = std::abs(a.x - b.x);
  const std::int64_t dy = std::abs(a.y - b.y);
  const std::int64_t lo = std::min(dx, dy);
  const std::int64_t hi = std::max(dx, dy);
  return kStraightCost * (hi - lo) + kDiagonalCost * lo;
}

std::vector<Cell> trace(const GridGeometry& g, const std::vector<std::size_t>& parent,
                        std::size_t start, std::size_t goal) {
  std::vector<Cell> out;
  for (std::size_t i = goal;; i = parent[i]) {
    out.push_back(g.cell_at(i));
    if (i == start) break;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

struct SearchResult {
  std::vector<std::int64_t> cost;
  std::vector<std::size_t> parent;
};

/// Dijkstra/A* over the step graph. With target set, stops when it is popped.
SearchResult search(const ExplorationMap& map, std::span<const std::uint8_t> blocked, Cell start,
                    const PlannerOptions& opts, const Cell* target) {
  const auto& g = map.geometry();
  SearchResult r;
  r.cost.assign(g.size(), kUnreachable);
  r.parent.assign(g.size(), std::numeric_limits<std::size_t>::max());
  std::vector<std::uint8_t> closed(g.size(), 0);
  // Octile distance is only a lower bound while no step is cheaper than base.
  const bool guided = target != nullptr && opts.unknown_cost >= 1.0;
  auto heuristic = [&](Cell c) -> std::int64_t { return guided ? octile(c, *target) : 0; };

  MinHeap open;
  const std::size_t s = g.index(start);
  r.cost[s] = 0;
  r.parent[s] = s;
  open.push({heuristic(start), 0, s});
  while (!open.empty()) {
    const QueueEntry top = open.top();
    open.pop();
    if (closed[top.idx]) continue;
    closed[top.idx] = 1;
    const Cell c = g.cell_at(top.idx);
    if (target != nullptr && c == *target) break;
    for (const Cell d : kSteps) {
      const Cell n{c.x + d.x, c.y + d.y};
      const std::int64_t step = step_cost(map, blocked, c, n, opts);
      if (step == kUnreachable) continue;
      const std::size_t ni = g.index(n);
      if (closed[ni]) continue;
      const std::int64_t cand = top.g + step;
      if (r.cost[ni] == kUnreachable || cand < r.cost[ni]) {
        r.cost[ni] = cand;
        r.parent[ni] = top.idx;
        open.push({cand + heuristic(n), cand, ni});
      }
    }
  }
  return r;
}

}  // namespace

std::vector<std::uint8_t> blocked_mask(const ExplorationMap& map, std::span<const Vec2> others,
                                       double clearance, std::span<const Vec2> keep_clear) {
  const auto& g = map.geometry();
  std::vector<std::uint8_t> blocked(g.size(), 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    blocked[i] = map.at(i) == MapCell::Occupied ? 1 : 0;
  }
  if (clearance <= 0.0) return blocked;
  const int reach = static_cast<int>(std::ceil(clearance / g.resolution));
  for (const Vec2& p : others) {
    const Cell c0 = g.cell_of(p);
    for (int dy = -reach; dy <= reach; ++dy) {
      for (int dx = -reach; dx <= reach; ++dx) {
        const Cell c{c0.x + dx, c0.y + dy};
        if (!g.in_bounds(c)) continue;
        const Vec2 center = g.center_of(c);
        if (distance(center, p) > clearance) continue;
        bool exempt = false;
        for (const Vec2& k : keep_clear) {
          if (distance(center, k) <= clearance) exempt = true;
        }
        if (!exempt) blocked[g.index(c)] = 1;
      }
    }
  }
  return blocked;
}

std::int64_t step_cost(const ExplorationMap& map, std::span<const std::uint8_t> blocked, Cell a,
                       Cell b, const PlannerOptions& opts) {
  const auto& g = map.geometry();
  if (!g.in_bounds(b) || blocked[g.index(b)]) return kUnreachable;
  const int dx = b.x - a.x;
  const int dy = b.y - a.y;
  std::int64_t base = kStraightCost;
  if (dx != 0 && dy != 0) {
    if (blocked[g.index({a.x + dx, a.y})] || blocked[g.index({a.x, a.y + dy})]) {
      return kUnreachable;
    }
    base = kDiagonalCost;
  }
  if (map.at(b) == MapCell::Unknown && opts.unknown_cost != 1.0) {
    return static_cast<std::int64_t>(std::llround(static_cast<double>(base) * opts.unknown_cost));
  }
  return base;
}

PlannedPath plan_path(const ExplorationMap& map, Vec2 from, Vec2 to, const PlannerOptions& opts,
                      std::span<const Vec2> other_robots) {
  const auto& g = map.geometry();
  const Cell start = g.cell_of(from);
  if (!g.in_bounds(start) || map.at(start) == MapCell::Occupied) {
    throw PathError("path start is outside the map or occupied");
  }
  const Vec2 goal_point = g.interior().clamp(to);
  const Cell goal = g.cell_of(goal_point);
  const Vec2 keep[2] = {from, goal_point};
  const auto blocked = blocked_mask(map, other_robots, opts.robot_clearance, keep);
  if (blocked[g.index(start)]) throw PathError("path start is blocked");

  const std::size_t s = g.index(start);
  if (!blocked[g.index(goal)]) {
    const auto r = search(map, blocked, start, opts, &goal);
    const std::size_t gi = g.index(goal);
    if (r.cost[gi] != kUnreachable) {
      return {trace(g, r.parent, s, gi), r.cost[gi], goal, false};
    }
  }

  const auto r = search(map, blocked, start, opts, nullptr);
  const int reach = static_cast<int>(std::ceil(opts.goal_radius / g.resolution));
  std::size_t best = g.size();
  double best_d = std::numeric_limits<double>::infinity();
  for (int dy = -reach; dy <= reach; ++dy) {
    for (int dx = -reach; dx <= reach; ++dx) {
      const Cell c{goal.x + dx, goal.y + dy};
      if (!g.in_bounds(c)) continue;
      const std::size_t ci = g.index(c);
      if (r.cost[ci] == kUnreachable) continue;
      const double d = distance(g.center_of(c), goal_point);
      if (d > opts.goal_radius) continue;
      const bool better = d < best_d ||
                          (d == best_d && (r.cost[ci] < r.cost[best] ||
                                           (r.cost[ci] == r.cost[best] && ci < best)));
      if (better) {
        best_d = d;
        best = ci;
      }
    }
  }
  if (best == g.size()) throw PathError("no reachable cell near the goal");
  return {trace(g, r.parent, s, best), r.cost[best], g.cell_at(best), true};
}

std::vector<std::int64_t> cost_field(const ExplorationMap& map, Cell from,
                                     const PlannerOptions& opts,
                                     std::span<const Vec2> other_robots) {
  const auto& g = map.geometry();
  if (!g.in_bounds(from) || map.at(from) == MapCell::Occupied) {
    throw PathError("cost field source is outside the map or occupied");
  }
  const Vec2 keep[1] = {g.center_of(from)};
  const auto blocked = blocked_mask(map, other_robots, opts.robot_clearance, keep);
  return search(map, blocked, from, opts, nullptr).cost;
}

std::optional<TargetHit> nearest_target(const ExplorationMap& map, Cell from,
                                        std::span<const std::uint8_t> is_target,
                                        const PlannerOptions& opts) {
  const auto& g = map.geometry();
  if (!g.in_bounds(from) || map.at(from) == MapCell::Occupied) {
    throw PathError("search source is outside the map or occupied");
  }
  const auto blocked = blocked_mask(map, {}, 0.0, {});
  std::vector<std::int64_t> cost(g.size(), kUnreachable);
  std::vector<std::uint8_t> closed(g.size(), 0);
  MinHeap open;
  const std::size_t s = g.index(from);
  cost[s] = 0;
  open.push({0, 0, s});
  // Predecessors cost strictly less, so by the time the first target pops
  // every equal-cost target is queued; the heap then yields the lowest index.
  while (!open.empty()) {
    const QueueEntry top = open.top();
    open.pop();
    if (closed[top.idx]) continue;
    closed[top.idx] = 1;
    if (is_target[top.idx]) return TargetHit{g.cell_at(top.idx), top.g};
    const Cell c = g.cell_at(top.idx);
    for (const Cell d : kSteps) {
      const Cell n{c.x + d.x, c.y + d.y};
      const std::int64_t step = step_cost(map, blocked, c, n, opts);
      if (step == kUnreachable) continue;
      const std::size_t ni = g.index(n);
      if (closed[ni]) continue;
      const std::int64_t cand = top.g + step;
      if (cost[ni] == kUnreachable || cand < cost[ni]) {
        cost[ni] = cand;
        open.push({cand, cand, ni});
      }
    }
  }
  return std::nullopt;
}

MotionStatus step_motion(RobotState& robot, const ExplorationMap& map, double dt) {
  const auto& g = map.geometry();
  auto waypoint = [&](std::size_t i) { return g.center_of(robot.path[i]); };

  while (!robot.path_done() && distance(robot.pose, waypoint(robot.next)) <= 1e-12) ++robot.next;
  while (robot.next + 1 < robot.path.size() &&
         distance(robot.pose, waypoint(robot.next)) <= 0.5 * g.resolution) {
    ++robot.next;
  }
  if (robot.path_done()) {
    robot.speed = 0.0;
    robot.velocity = {};
    return MotionStatus::Idle;
  }

  double remaining = distance(robot.pose, waypoint(robot.next));
  for (std::size_t i = robot.next + 1; i < robot.path.size(); ++i) {
    remaining += distance(waypoint(i - 1), waypoint(i));
  }
  const double v = std::min({robot.speed + robot.max_accel * dt, robot.max_speed,
                             std::sqrt(2.0 * robot.max_accel * remaining)});
  double budget = v * dt;
  const Vec2 before = robot.pose;
  while (budget > 0.0 && !robot.path_done()) {
    if (map.at(robot.path[robot.next]) == MapCell::Occupied) {
      robot.speed = 0.0;
      robot.velocity = {};
      return MotionStatus::Blocked;
    }
    const Vec2 target = waypoint(robot.next);
    const double d = distance(robot.pose, target);
    if (d <= budget) {
      robot.pose = target;
      budget -= d;
      ++robot.next;
    } else {
      robot.pose += unit(target - robot.pose) * budget;
      budget = 0.0;
    }
  }
  if (robot.path_done()) {
    robot.speed = 0.0;
    robot.velocity = {};
    return MotionStatus::Arrived;
  }
  robot.speed = v;
  robot.velocity = unit(robot.pose - before) * v;
  return MotionStatus::Moving;
}

}  // namespace froshe
