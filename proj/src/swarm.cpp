#include "froshe/swarm.hpp"

#include <cmath>
#include <numbers>
#include <unordered_map>

#include "froshe/error.hpp"

namespace froshe {

void SwarmParams::validate(double frontier_rate) const {
  if (!(f_res > 0.0)) throw ConfigError("f_res must be positive");
  if (e < 0.0 || c_f < 0.0 || rho_f < 0.0) throw ConfigError("swarm gains must be non-negative");
  if (!(detection_range > 0.0)) throw ConfigError("detection range must be positive");
  if (!(rate > frontier_rate)) throw ConfigError("swarm rate must exceed the frontier rate");
  if (!(singularity_guard > 0.0)) throw ConfigError("singularity guard must be positive");
}

int weight_window_half_cells(double f_res, double resolution) {
  return static_cast<int>(std::floor(f_res / (2.0 * resolution) + 1e-9));
}

SwarmState allocate_virtual_sheep(const FrontierSet& frontiers, const ExplorationMap& map,
                                  const SwarmParams& params) {
  const auto& g = map.geometry();
  SwarmState out;
  out.source_map_version = frontiers.map_version;
  out.bounds = g.interior();

  // Bucket accepted sheep on an f_res lattice so each candidate only checks
  // the 3x3 neighbourhood of buckets.
  const double bucket = params.f_res;
  auto key_of = [bucket](Vec2 p) {
    const auto bx = static_cast<std::int64_t>(std::floor(p.x / bucket));
    const auto by = static_cast<std::int64_t>(std::floor(p.y / bucket));
    return std::pair{bx, by};
  };
  auto pack = [](std::int64_t bx, std::int64_t by) {
    return (static_cast<std::uint64_t>(bx) << 32) ^ static_cast<std::uint64_t>(by & 0xffffffff);
  };
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;

  const int half = weight_window_half_cells(params.f_res, g.resolution);
  for (const Cell& c : frontiers.cells) {
    const Vec2 p = g.center_of(c);
    const auto [bx, by] = key_of(p);
    bool accept = true;
    for (std::int64_t dy = -1; dy <= 1 && accept; ++dy) {
      for (std::int64_t dx = -1; dx <= 1 && accept; ++dx) {
        auto it = buckets.find(pack(bx + dx, by + dy));
        if (it == buckets.end()) continue;
        for (std::size_t idx : it->second) {
          if (distance(out.sheep[idx].position, p) < params.f_res) {
            accept = false;
            break;
          }
        }
      }
    }
    if (!accept) continue;

    std::int64_t weight = 0;
    for (int dy = -half; dy <= half; ++dy) {
      for (int dx = -half; dx <= half; ++dx) {
        const Cell n{c.x + dx, c.y + dy};
        if (g.in_bounds(n) && map.at(n) == MapCell::Unknown) ++weight;
      }
    }
    buckets[pack(bx, by)].push_back(out.sheep.size());
    out.sheep.push_back({p, weight});
  }
  return out;
}

SwarmState estimate_step(const SwarmState& state, std::span<const Vec2> robots, double dt,
                         const SwarmParams& params, Rng& rng) {
  SwarmState next = state;
  const std::size_t n = state.sheep.size();
  if (n == 0) return next;

  Vec2 total{};
  for (const auto& s : state.sheep) total += s.position;

  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const double range = params.detection_range;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 v = state.sheep[i].position;
    Vec2 force{};
    if (params.e > 0.0) {
      const double a = angle(rng);
      force += Vec2{std::cos(a), std::sin(a)} * params.e;
    }

    bool in_range = false;
    Vec2 predator{};
    for (const Vec2& r : robots) {
      const double d = distance(v, r);
      if (d > range) continue;
      in_range = true;
      Vec2 away = unit(v - r);
      if (away == Vec2{}) away = {1.0, 0.0};
      predator += away * (params.rho_f / std::max(d, params.singularity_guard));
    }
    if (in_range) {
      force += predator;
      if (n > 1) {
        const Vec2 others = (total - v) / static_cast<double>(n - 1);
        force += unit(v - others) * params.c_f;
      }
    }
    next.sheep[i].position = state.bounds.clamp(v + force * dt);
  }
  return next;
}

}  // namespace froshe
