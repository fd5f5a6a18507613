#pragma once

// Independent reference implementations used by the unit tests and the
// acceptance suite. They favour obviousness over speed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <vector>

#include "froshe/batching.hpp"
#include "froshe/environment.hpp"
#include "froshe/mapping.hpp"
#include "froshe/planner.hpp"
#include "froshe/rng.hpp"
#include "froshe/swarm.hpp"

namespace froshe::oracle {

inline std::vector<Cell> frontier_scan(const ExplorationMap& map) {
  const auto& g = map.geometry();
  std::vector<Cell> out;
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      if (map.at(Cell{x, y}) != MapCell::Free) continue;
      bool touches_unknown = false;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const Cell n{x + dx, y + dy};
          if ((dx != 0 || dy != 0) && g.in_bounds(n) && map.at(n) == MapCell::Unknown) {
            touches_unknown = true;
          }
        }
      }
      if (touches_unknown) out.push_back({x, y});
    }
  }
  return out;
}

/// Per ray, intersect with every cell of a square window by the slab method,
/// walk hits by entry distance and stop after the first Occupied cell.
inline std::vector<Observation> slab_visibility(const WorldGrid& world, Vec2 pose,
                                                const SensorModel& sensor, int half_window) {
  const auto& g = world.geometry;
  const Vec2 o = pose / g.resolution;
  const Cell pc = g.cell_of(pose);
  const double reach = sensor.range / g.resolution;
  std::map<Cell, Observed> seen;
  for (int k = 0; k < sensor.ray_count; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / sensor.ray_count;
    const double dx = std::cos(theta);
    const double dy = std::sin(theta);
    std::vector<std::pair<double, Cell>> hits;
    for (int y = pc.y - half_window; y <= pc.y + half_window; ++y) {
      for (int x = pc.x - half_window; x <= pc.x + half_window; ++x) {
        if (!g.in_bounds({x, y})) continue;
        double t0 = -std::numeric_limits<double>::infinity();
        double t1 = std::numeric_limits<double>::infinity();
        auto slab = [&](double origin, double dir, double lo, double hi) {
          if (dir == 0.0) {
            if (origin <= lo || origin >= hi) t1 = -1.0;
            return;
          }
          double a = (lo - origin) / dir;
          double b = (hi - origin) / dir;
          if (a > b) std::swap(a, b);
          t0 = std::max(t0, a);
          t1 = std::min(t1, b);
        };
        slab(o.x, dx, x, x + 1.0);
        slab(o.y, dy, y, y + 1.0);
        if (t0 < t1 && t1 > 0.0 && t0 <= reach) hits.push_back({std::max(t0, 0.0), {x, y}});
      }
    }
    std::sort(hits.begin(), hits.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [t, c] : hits) {
      const double cx = c.x + 0.5 - o.x;
      const double cy = c.y + 0.5 - o.y;
      const bool occ = world.occupied(c);
      if (cx * cx + cy * cy <= reach * reach) {
        seen[c] = occ ? Observed::Occupied : Observed::Free;
      }
      if (occ) break;
    }
  }
  std::vector<Observation> out;
  for (const auto& [c, s] : seen) out.push_back({c, s});
  return out;
}

/// Force sum written term by term. The noise angles are supplied by the
/// caller, one per sheep.
inline std::vector<Vec2> force_step(const std::vector<Vec2>& sheep, const std::vector<Vec2>& robots,
                                    double dt, const SwarmParams& p,
                                    const std::vector<double>& angles, const Bounds& bounds) {
  const std::size_t n = sheep.size();
  std::vector<Vec2> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double fx = 0.0;
    double fy = 0.0;
    if (p.e > 0.0) {
      fx += p.e * std::cos(angles[i]);
      fy += p.e * std::sin(angles[i]);
    }
    bool near_robot = false;
    for (const Vec2& r : robots) {
      const double rx = sheep[i].x - r.x;
      const double ry = sheep[i].y - r.y;
      const double d = std::sqrt(rx * rx + ry * ry);
      if (d > p.detection_range) continue;
      near_robot = true;
      const double mag = p.rho_f / std::max(d, p.singularity_guard);
      if (d > 0.0) {
        fx += mag * rx / d;
        fy += mag * ry / d;
      } else {
        fx += mag;
      }
    }
    if (near_robot && n > 1) {
      double cx = 0.0;
      double cy = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        cx += sheep[j].x;
        cy += sheep[j].y;
      }
      cx /= static_cast<double>(n - 1);
      cy /= static_cast<double>(n - 1);
      const double ax = sheep[i].x - cx;
      const double ay = sheep[i].y - cy;
      const double len = std::sqrt(ax * ax + ay * ay);
      if (len > 0.0) {
        fx += p.c_f * ax / len;
        fy += p.c_f * ay / len;
      }
    }
    const double x = std::clamp(sheep[i].x + fx * dt, bounds.min.x, bounds.max.x);
    const double y = std::clamp(sheep[i].y + fy * dt, bounds.min.y, bounds.max.y);
    out[i] = {x, y};
  }
  return out;
}

/// Noise angles as estimate_step draws them: one uniform angle per sheep in
/// index order, only when e > 0.
inline std::vector<double> noise_angles(std::size_t n, double e, Rng& rng) {
  std::vector<double> a(n, 0.0);
  if (e <= 0.0) return a;
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (auto& x : a) x = angle(rng);
  return a;
}

/// Union-find over the "closer than or equal to linkage" graph. Returns the
/// partition as sorted member lists, themselves sorted.
inline std::vector<std::vector<std::size_t>> linkage_partition(const std::vector<Vec2>& pts,
                                                               double linkage) {
  std::vector<std::size_t> parent(pts.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (distance(pts[i], pts[j]) <= linkage) parent[find(i)] = find(j);
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < pts.size(); ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [root, members] : groups) out.push_back(members);
  std::sort(out.begin(), out.end());
  return out;
}

/// Batch score (weight term minus distance term) written out directly.
inline double reference_batch_score(Vec2 robot, const SwarmBatch& b, std::span<const SwarmBatch> all,
                        double lambda_m, double lambda_d) {
  double w_max = 0.0;
  double d_max = 0.0;
  for (const auto& o : all) {
    w_max = std::max(w_max, static_cast<double>(o.total_weight));
    d_max = std::max(d_max, distance(robot, o.centroid));
  }
  double s = 0.0;
  if (w_max > 0.0) s += lambda_m * static_cast<double>(b.total_weight) / w_max;
  if (d_max > 0.0) s -= lambda_d * distance(robot, b.centroid) / d_max;
  return s;
}

/// Exhaustive argmax of the batch score; the first maximum wins.
inline std::size_t best_batch(Vec2 robot, std::span<const SwarmBatch> all, double lambda_m,
                              double lambda_d) {
  std::size_t best = 0;
  double best_s = -std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < all.size(); ++b) {
    const double s = reference_batch_score(robot, all[b], all, lambda_m, lambda_d);
    if (s > best_s) {
      best_s = s;
      best = b;
    }
  }
  return best;
}

inline double window_mean(const std::vector<std::int64_t>& history, std::size_t window) {
  const std::size_t n = std::min(window, history.size());
  if (n == 0) return 0.0;
  long double sum = 0.0;
  for (std::size_t i = history.size() - n; i < history.size(); ++i) sum += history[i];
  return static_cast<double>(sum / static_cast<long double>(n));
}

/// Textbook O(V^2) Dijkstra over the 8-connected grid with the planner's
/// integer step costs: straight 1e6, diagonal round(sqrt(2)*1e6), Unknown
/// steps scaled by unknown_cost, no corner cutting past Occupied cells.
inline std::vector<std::int64_t> dijkstra(const ExplorationMap& map, Cell from,
                                          double unknown_cost = 1.0) {
  const auto& g = map.geometry();
  const std::int64_t straight = 1'000'000;
  const auto diagonal = static_cast<std::int64_t>(std::llround(std::sqrt(2.0) * 1e6));
  const std::int64_t inf = std::numeric_limits<std::int64_t>::max();
  std::vector<std::int64_t> dist(g.size(), inf);
  std::vector<bool> done(g.size(), false);
  auto open = [&](int x, int y) {
    return x >= 0 && y >= 0 && x < g.width && y < g.height &&
           map.at(Cell{x, y}) != MapCell::Occupied;
  };
  if (!open(from.x, from.y)) return std::vector<std::int64_t>(g.size(), -1);
  dist[static_cast<std::size_t>(from.y * g.width + from.x)] = 0;
  for (;;) {
    std::size_t u = g.size();
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!done[i] && dist[i] != inf && (u == g.size() || dist[i] < dist[u])) u = i;
    }
    if (u == g.size()) break;
    done[u] = true;
    const int ux = static_cast<int>(u) % g.width;
    const int uy = static_cast<int>(u) / g.width;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const int vx = ux + dx;
        const int vy = uy + dy;
        if (!open(vx, vy)) continue;
        if (dx != 0 && dy != 0 && (!open(ux + dx, uy) || !open(ux, uy + dy))) continue;
        std::int64_t w = (dx != 0 && dy != 0) ? diagonal : straight;
        if (map.at(Cell{vx, vy}) == MapCell::Unknown && unknown_cost != 1.0) {
          w = static_cast<std::int64_t>(std::llround(static_cast<double>(w) * unknown_cost));
        }
        const std::size_t v = static_cast<std::size_t>(vy * g.width + vx);
        if (dist[u] + w < dist[v]) dist[v] = dist[u] + w;
      }
    }
  }
  for (auto& d : dist) {
    if (d == inf) d = -1;
  }
  return dist;
}

}  // namespace froshe::oracle
