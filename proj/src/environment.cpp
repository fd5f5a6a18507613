#include "froshe/environment.hpp"

#include <cmath>
#include <numbers>
#include <queue>

#include "froshe/error.hpp"

namespace froshe {
namespace {

constexpr int kSpawnAttempts = 10000;
constexpr int kTreeAttempts = 1000;
constexpr double kCornerEps = 1e-12;

void rasterize_tree(WorldGrid& world, Vec2 center, double radius) {
  const auto& g = world.geometry;
  const Cell c0 = g.cell_of(center);
  if (g.in_bounds(c0)) world.cells[g.index(c0)] = WorldCell::Occupied;
  const int reach = static_cast<int>(std::ceil(radius / g.resolution)) + 1;
  for (int dy = -reach; dy <= reach; ++dy) {
    for (int dx = -reach; dx <= reach; ++dx) {
      const Cell c{c0.x + dx, c0.y + dy};
      if (!g.in_bounds(c)) continue;
      if (distance(g.center_of(c), center) <= radius) {
        world.cells[g.index(c)] = WorldCell::Occupied;
      }
    }
  }
}

Vec2 sample_disk(Rng& rng, Vec2 center, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = radius * std::sqrt(u(rng));
  const double theta = 2.0 * std::numbers::pi * u(rng);
  return center + Vec2{r * std::cos(theta), r * std::sin(theta)};
}

}  // namespace

std::size_t WorldGrid::occupied_interior_count() const {
  std::size_t n = 0;
  for (int y = 1; y + 1 < geometry.height; ++y) {
    for (int x = 1; x + 1 < geometry.width; ++x) {
      if (occupied({x, y})) ++n;
    }
  }
  return n;
}

void validate(const ScenarioSpec& spec) {
  if (!(spec.side_length > 0.0)) throw ConfigError("side_length must be positive");
  if (!(spec.resolution > 0.0)) throw ConfigError("resolution must be positive");
  if (spec.tree_density < 0.0) throw ConfigError("tree_density must be non-negative");
  if (spec.tree_radius < 0.0) throw ConfigError("tree_radius must be non-negative");
  if (spec.robot_count < 1) throw ConfigError("robot_count must be at least 1");
  if (spec.spawn_radius < 0.0) throw ConfigError("spawn_radius must be non-negative");
  const double cells = spec.side_length / spec.resolution;
  if (std::abs(cells - std::round(cells)) > 1e-9) {
    throw ConfigError("side_length must be a whole number of cells");
  }
}

void validate(const SensorModel& sensor) {
  if (!(sensor.range > 0.0)) throw ConfigError("sensor range must be positive");
  if (sensor.ray_count < 8) throw ConfigError("sensor ray_count must be at least 8");
  if (sensor.range_noise_sigma < 0.0) throw ConfigError("range_noise_sigma must be >= 0");
}

World generate_world(const ScenarioSpec& spec) {
  validate(spec);
  const int interior = static_cast<int>(std::lround(spec.side_length / spec.resolution));
  World out;
  auto& grid = out.grid;
  grid.geometry = {interior + 2, interior + 2, spec.resolution};
  grid.cells.assign(grid.geometry.size(), WorldCell::Free);
  for (int i = 0; i < grid.geometry.width; ++i) {
    grid.cells[grid.geometry.index({i, 0})] = WorldCell::Occupied;
    grid.cells[grid.geometry.index({i, grid.geometry.height - 1})] = WorldCell::Occupied;
    grid.cells[grid.geometry.index({0, i})] = WorldCell::Occupied;
    grid.cells[grid.geometry.index({grid.geometry.width - 1, i})] = WorldCell::Occupied;
  }

  const Bounds inside = grid.geometry.interior();
  out.start = spec.start.value_or((inside.min + inside.max) * 0.5);
  if (!inside.contains(out.start)) throw GenerationError("start point lies outside the world");

  Rng rng(spec.rng_seed);

  // Spawns sit in a disk of half the spawn radius so every pair is within it.
  const double disk = spec.spawn_radius * 0.5;
  for (int r = 0; r < spec.robot_count; ++r) {
    bool placed = false;
    for (int attempt = 0; attempt < kSpawnAttempts && !placed; ++attempt) {
      const Vec2 p = r == 0 ? out.start : sample_disk(rng, out.start, disk);
      if (!inside.contains(p)) continue;
      bool clear = true;
      for (const Vec2& q : out.spawns) {
        if (distance(p, q) < kRobotSeparation) clear = false;
      }
      if (!clear) continue;
      out.spawns.push_back(p);
      placed = true;
    }
    if (!placed) throw GenerationError("could not place robot spawn positions");
  }

  if (spec.environment_kind == EnvironmentKind::Forest) {
    const double area = spec.side_length * spec.side_length;
    const auto tree_count = static_cast<std::size_t>(std::llround(spec.tree_density * area));
    std::uniform_real_distribution<double> ux(inside.min.x, inside.max.x);
    std::uniform_real_distribution<double> uy(inside.min.y, inside.max.y);
    const double keep_out = spec.tree_radius + kSpawnClearance;
    for (std::size_t t = 0; t < tree_count; ++t) {
      bool placed = false;
      for (int attempt = 0; attempt < kTreeAttempts && !placed; ++attempt) {
        const Vec2 c{ux(rng), uy(rng)};
        bool clear = true;
        for (const Vec2& s : out.spawns) {
          if (distance(c, s) < keep_out) clear = false;
        }
        if (!clear) continue;
        out.trees.push_back(c);
        rasterize_tree(grid, c, spec.tree_radius);
        placed = true;
      }
      if (!placed) throw GenerationError("tree density too high to keep spawn clearance");
    }
    // Rasterization can still clip a spawn cell when the radius is tiny relative
    // to a cell; the clearance check above is in metres, this one is in cells.
    for (const Vec2& s : out.spawns) {
      if (grid.occupied(grid.geometry.cell_of(s))) {
        throw GenerationError("spawn cell ended up occupied");
      }
    }
  }
  return out;
}

void cast_rays(const WorldGrid& world, Vec2 pose, const SensorModel& sensor,
               const std::function<void(Cell, Observed)>& visit, Rng* noise) {
  const auto& g = world.geometry;
  const Cell origin_cell = g.cell_of(pose);
  if (!g.in_bounds(origin_cell) || !g.extent().contains(pose)) {
    throw SensingError("sensor pose outside the world");
  }
  const Vec2 o = pose / g.resolution;  // in cell units
  std::normal_distribution<double> jitter(0.0, sensor.range_noise_sigma);
  const bool noisy = noise != nullptr && sensor.range_noise_sigma > 0.0;

  for (int k = 0; k < sensor.ray_count; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / sensor.ray_count;
    const Vec2 d{std::cos(theta), std::sin(theta)};
    double reach = sensor.range;
    if (noisy) reach = std::max(0.0, reach + jitter(*noise));
    const double reach_cells = reach / g.resolution;
    const double reach_sq = reach_cells * reach_cells;

    // Reports a touched cell; returns true when the ray is blocked by it.
    auto touch = [&](Cell c) {
      if (!g.in_bounds(c)) return true;
      const double cx = c.x + 0.5 - o.x;
      const double cy = c.y + 0.5 - o.y;
      const bool blocked = world.occupied(c);
      if (cx * cx + cy * cy <= reach_sq) {
        visit(c, blocked ? Observed::Occupied : Observed::Free);
      }
      return blocked;
    };

    Cell c = origin_cell;
    const int step_x = d.x > 0.0 ? 1 : (d.x < 0.0 ? -1 : 0);
    const int step_y = d.y > 0.0 ? 1 : (d.y < 0.0 ? -1 : 0);
    const double inf = std::numeric_limits<double>::infinity();
    double t_max_x = step_x == 0 ? inf
                                 : ((step_x > 0 ? c.x + 1.0 : static_cast<double>(c.x)) - o.x) / d.x;
    double t_max_y = step_y == 0 ? inf
                                 : ((step_y > 0 ? c.y + 1.0 : static_cast<double>(c.y)) - o.y) / d.y;
    const double t_delta_x = step_x == 0 ? inf : 1.0 / std::abs(d.x);
    const double t_delta_y = step_y == 0 ? inf : 1.0 / std::abs(d.y);

    if (touch(c)) continue;
    while (true) {
      const double t_next = std::min(t_max_x, t_max_y);
      if (t_next > reach_cells) break;
      if (std::abs(t_max_x - t_max_y) <= kCornerEps) {
        // Exact corner crossing: the supercover touches both side cells too.
        const bool side_x = touch({c.x + step_x, c.y});
        const bool side_y = touch({c.x, c.y + step_y});
        c = {c.x + step_x, c.y + step_y};
        const bool diag = touch(c);
        if (side_x || side_y || diag) break;
        t_max_x += t_delta_x;
        t_max_y += t_delta_y;
      } else if (t_max_x < t_max_y) {
        c.x += step_x;
        t_max_x += t_delta_x;
        if (touch(c)) break;
      } else {
        c.y += step_y;
        t_max_y += t_delta_y;
        if (touch(c)) break;
      }
    }
  }
}

std::vector<Observation> sense(const WorldGrid& world, Vec2 pose, const SensorModel& sensor,
                               Rng* noise) {
  const auto& g = world.geometry;
  std::vector<std::uint8_t> seen(g.size(), 0);
  std::vector<Observation> out;
  cast_rays(
      world, pose, sensor,
      [&](Cell c, Observed s) {
        auto& mark = seen[g.index(c)];
        if (mark) return;
        mark = 1;
        out.push_back({c, s});
      },
      noise);
  std::sort(out.begin(), out.end(),
            [](const Observation& a, const Observation& b) { return a.cell < b.cell; });
  return out;
}

std::vector<std::uint8_t> reachable_mask(const WorldGrid& world, Cell start) {
  const auto& g = world.geometry;
  std::vector<std::uint8_t> mask(g.size(), 0);
  if (!g.in_bounds(start) || world.occupied(start)) return mask;
  std::queue<Cell> frontier;
  frontier.push(start);
  mask[g.index(start)] = 1;
  constexpr Cell kSteps[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  while (!frontier.empty()) {
    const Cell c = frontier.front();
    frontier.pop();
    for (const Cell s : kSteps) {
      const Cell n{c.x + s.x, c.y + s.y};
      if (!g.in_bounds(n) || world.occupied(n)) continue;
      auto& m = mask[g.index(n)];
      if (m) continue;
      m = 1;
      frontier.push(n);
    }
  }
  return mask;
}

}  // namespace froshe
