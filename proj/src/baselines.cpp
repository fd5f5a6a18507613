#include <algorithm>
#include <limits>

#include "froshe/error.hpp"
#include "froshe/strategies.hpp"

namespace froshe {

FrontierTargetingBase::FrontierTargetingBase(std::size_t robot_count)
    : targets_(robot_count), search_failed_(robot_count, 0) {}

bool FrontierTargetingBase::refresh(const StrategyInput& in) {
  const auto& g = in.map.geometry();
  if (blacklist_.size() != g.size()) {
    blacklist_.assign(g.size(), 0);
    frontier_mask_.assign(g.size(), 0);
  }
  // A robot that finished its plan either cleared its target or could not; in
  // both cases the cell is not worth another trip.
  for (std::size_t i = 0; i < targets_.size(); ++i) {
    if (in.idle[i] && targets_[i]) {
      const std::size_t idx = g.index(*targets_[i]);
      blacklist_[idx] = 1;
      frontier_mask_[idx] = 0;
      targets_[i].reset();
    }
  }
  const bool fresh = !has_snapshot_ || in.frontiers.map_version != snapshot_version_;
  if (fresh) {
    has_snapshot_ = true;
    std::fill(search_failed_.begin(), search_failed_.end(), 0);
    snapshot_version_ = in.frontiers.map_version;
    std::fill(frontier_mask_.begin(), frontier_mask_.end(), 0);
    for (const Cell& c : in.frontiers.cells) {
      const std::size_t idx = g.index(c);
      if (!blacklist_[idx]) frontier_mask_[idx] = 1;
    }
  }
  complete_ = in.frontiers.empty();
  return fresh;
}

bool FrontierTargetingBase::target_valid(const ExplorationMap& map, std::size_t robot) const {
  return targets_[robot] && frontier_mask_[map.geometry().index(*targets_[robot])];
}

GreedyStrategy::GreedyStrategy(std::size_t robot_count, PlannerOptions planner)
    : FrontierTargetingBase(robot_count), planner_(planner) {}

std::vector<std::optional<Directive>> GreedyStrategy::decide(const StrategyInput& in) {
  const bool fresh = refresh(in);
  const auto& g = in.map.geometry();
  std::vector<std::optional<Directive>> out(in.poses.size());
  for (std::size_t i = 0; i < in.poses.size(); ++i) {
    const bool lost = targets_[i] && fresh && !target_valid(in.map, i);
    // A robot whose search came up empty waits for the next snapshot.
    const bool unassigned = !targets_[i] && !search_failed_[i];
    if (!lost && !unassigned) continue;
    std::optional<TargetHit> hit;
    try {
      hit = nearest_target(in.map, g.cell_of(in.poses[i]), frontier_mask_, planner_);
    } catch (const PathError&) {
      hit.reset();
    }
    if (!hit) {
      targets_[i].reset();
      search_failed_[i] = 1;
      continue;
    }
    if (targets_[i] == hit->cell) continue;
    targets_[i] = hit->cell;
    out[i] = Directive{RobotMode::Frontier, {g.center_of(hit->cell)}};
  }
  return out;
}

std::vector<std::optional<std::size_t>> utility_assign(
    std::span<const std::vector<std::int64_t>> costs, std::span<const Vec2> frontier_positions,
    const UtilityParams& params) {
  const std::size_t nf = frontier_positions.size();
  std::vector<double> utility(nf, params.initial_utility);
  std::vector<std::optional<std::size_t>> out;
  out.reserve(costs.size());
  for (const auto& row : costs) {
    std::int64_t c_max = 0;
    for (std::size_t f = 0; f < nf; ++f) c_max = std::max(c_max, row[f]);
    std::optional<std::size_t> best;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < nf; ++f) {
      if (row[f] == kUnreachable) continue;
      const double norm_cost =
          c_max > 0 ? static_cast<double>(row[f]) / static_cast<double>(c_max) : 0.0;
      const double score = utility[f] - params.cost_weight * norm_cost;
      if (score > best_score) {
        best_score = score;
        best = f;
      }
    }
    out.push_back(best);
    if (!best) continue;
    for (std::size_t f = 0; f < nf; ++f) {
      const double d = distance(frontier_positions[f], frontier_positions[*best]);
      if (d < params.discount_range) utility[f] -= std::max(0.0, 1.0 - d / params.discount_range);
    }
  }
  return out;
}

UtilityStrategy::UtilityStrategy(std::size_t robot_count, PlannerOptions planner,
                                 UtilityParams params)
    : FrontierTargetingBase(robot_count), planner_(planner), params_(params) {}

std::vector<std::optional<Directive>> UtilityStrategy::decide(const StrategyInput& in) {
  const bool fresh = refresh(in);
  const auto& g = in.map.geometry();
  const std::size_t n = in.poses.size();
  std::vector<std::optional<Directive>> out(n);

  bool needed = fresh;
  for (std::size_t i = 0; i < n; ++i) {
    if (!targets_[i] && !search_failed_[i]) needed = true;
  }
  if (!needed) return out;

  std::vector<Cell> cells;
  std::vector<Vec2> positions;
  for (std::size_t idx = 0; idx < frontier_mask_.size(); ++idx) {
    if (!frontier_mask_[idx]) continue;
    cells.push_back(g.cell_at(idx));
    positions.push_back(g.center_of(cells.back()));
  }

  std::vector<std::vector<std::int64_t>> costs(n);
  for (std::size_t i = 0; i < n; ++i) {
    costs[i].assign(cells.size(), kUnreachable);
    if (cells.empty()) continue;
    try {
      const auto field = cost_field(in.map, g.cell_of(in.poses[i]), planner_);
      for (std::size_t f = 0; f < cells.size(); ++f) costs[i][f] = field[g.index(cells[f])];
    } catch (const PathError&) {
      // leave the row unreachable
    }
  }

  const auto picks = utility_assign(costs, positions, params_);
  for (std::size_t i = 0; i < n; ++i) {
    if (!picks[i]) {
      targets_[i].reset();
      search_failed_[i] = 1;
      continue;
    }
    const Cell c = cells[*picks[i]];
    if (targets_[i] == c) continue;
    targets_[i] = c;
    out[i] = Directive{RobotMode::Frontier, {positions[*picks[i]]}};
  }
  return out;
}

}  // namespace froshe
