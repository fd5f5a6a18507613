#include "froshe/shepherd.hpp"

#include <limits>

#include "froshe/error.hpp"

namespace froshe {
namespace {

Vec2 clamp_into(const ShepherdConfig& cfg, Vec2 p, bool& clamped) {
  const Vec2 q = cfg.bounds.clamp(p);
  if (q != p) clamped = true;
  return q;
}

}  // namespace

void ShepherdConfig::validate() const {
  if (!(p_p > 0.0 && p_p <= 1.0)) throw ConfigError("p_p must lie in (0, 1]");
  if (!(detection_range > 0.0)) throw ConfigError("detection range must be positive");
  if (!(d_t_initial > 0.0)) throw ConfigError("d_t_initial must be positive");
}

bool is_compact(const SwarmBatch& batch, std::span<const VirtualSheep> sheep, double d_t) {
  for (std::size_t i : batch.members) {
    if (distance(sheep[i].position, batch.centroid) > d_t) return false;
  }
  return true;
}

std::size_t farthest_member(const SwarmBatch& batch, std::span<const VirtualSheep> sheep) {
  std::size_t best = batch.members.front();
  double best_d = -1.0;
  for (std::size_t i : batch.members) {
    const double d = distance(sheep[i].position, batch.centroid);
    if (d > best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

ShepherdDecision collecting_decision(const SwarmBatch& batch, std::span<const VirtualSheep> sheep,
                                     Vec2 /*robot*/, const ShepherdConfig& cfg) {
  if (batch.members.empty()) throw GeometryError("collecting on an empty batch");
  const Vec2 c_m = batch.centroid;
  const Vec2 v_f = sheep[farthest_member(batch, sheep)].position;
  const Vec2 toward = c_m - v_f;
  if (norm(toward) == 0.0) throw GeometryError("farthest sheep coincides with the centre of mass");

  ShepherdDecision d;
  d.mode = ShepherdMode::Collecting;
  d.center_of_mass = c_m;
  d.farthest = v_f;
  const Vec2 p_c = v_f + unit(toward) * (cfg.p_p * cfg.detection_range);
  d.waypoints = {clamp_into(cfg, p_c, d.clamped), clamp_into(cfg, c_m, d.clamped)};
  return d;
}

std::optional<std::size_t> herd_target_batch(std::size_t own, std::span<const SwarmBatch> batches,
                                             HerdTarget rule) {
  std::optional<std::size_t> best;
  double best_key = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < batches.size(); ++i) {
    if (i == own) continue;
    double key = static_cast<double>(batches[i].total_weight);
    if (rule == HerdTarget::NearestWeighted) {
      const double d = distance(batches[i].centroid, batches[own].centroid);
      key /= std::max(d, 1e-9);
    }
    if (key > best_key) {
      best_key = key;
      best = i;
    }
  }
  return best;
}

ShepherdDecision herding_decision(std::size_t own, std::span<const SwarmBatch> batches,
                                  std::span<const VirtualSheep> sheep, Vec2 robot,
                                  const ShepherdConfig& cfg) {
  const SwarmBatch& mine = batches[own];
  const Vec2 c_m = mine.centroid;
  Vec2 c_h;
  if (auto other = herd_target_batch(own, batches, cfg.herd_target)) {
    c_h = batches[*other].centroid;
  } else {
    c_h = c_m + (c_m - robot);
  }
  const Vec2 away = c_m - c_h;
  if (norm(away) == 0.0) return collecting_decision(mine, sheep, robot, cfg);

  ShepherdDecision d;
  d.mode = ShepherdMode::Herding;
  d.center_of_mass = c_m;
  d.herd_center = c_h;
  const Vec2 p_d = c_m - unit(away) * (cfg.p_p * cfg.detection_range);
  d.waypoints = {clamp_into(cfg, p_d, d.clamped), clamp_into(cfg, c_h, d.clamped)};
  return d;
}

}  // namespace froshe
