#include <doctest.h>

#include <random>

#include "../oracles.hpp"
#include "froshe/error.hpp"
#include "froshe/planner.hpp"
#include "support.hpp"

using namespace froshe;

namespace {

ExplorationMap open_map(int w, int h, double res = 0.5) {
  GridGeometry g{w, h, res};
  return ExplorationMap::from_cells(g, std::vector<MapCell>(g.size(), MapCell::Free));
}

ExplorationMap with(ExplorationMap map, std::initializer_list<Cell> occupied) {
  std::vector<MapCell> cells(map.cells().begin(), map.cells().end());
  for (Cell c : occupied) cells[map.geometry().index(c)] = MapCell::Occupied;
  return ExplorationMap::from_cells(map.geometry(), std::move(cells));
}

bool neighbours(Cell a, Cell b) {
  return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y)) == 1;
}

// Closed-form time to cover `length` from rest to rest.
double trapezoid_time(double length, double v_max, double a) {
  const double ramp = v_max * v_max / a;  // accel plus decel distance
  if (length >= ramp) return 2.0 * v_max / a + (length - ramp) / v_max;
  return 2.0 * std::sqrt(length / a);
}

struct Drive {
  double time = 0.0;
  Vec2 pose;
  MotionStatus status = MotionStatus::Idle;
};

Drive drive(const ExplorationMap& map, std::vector<Cell> path, double v_max, double a, double dt) {
  RobotState r;
  r.pose = map.geometry().center_of(path.front());
  r.max_speed = v_max;
  r.max_accel = a;
  r.set_path(std::move(path));
  Drive out;
  for (int i = 0; i < 1'000'000; ++i) {
    out.status = step_motion(r, map, dt);
    out.time += dt;
    if (out.status != MotionStatus::Moving) break;
  }
  out.pose = r.pose;
  return out;
}

std::vector<Cell> row(int x0, int x1, int y) {
  std::vector<Cell> p;
  for (int x = x0; x <= x1; ++x) p.push_back({x, y});
  return p;
}

}  // namespace

TEST_CASE("cost field equals the reference Dijkstra") {
  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 40; ++trial) {
    const auto map = test::random_map(24, 18, gen, 0.3, 0.25);
    std::uniform_int_distribution<std::size_t> pick(0, map.geometry().size() - 1);
    Cell from = map.geometry().cell_at(pick(gen));
    while (map.at(from) == MapCell::Occupied) from = map.geometry().cell_at(pick(gen));
    for (double unknown : {1.0, 2.5}) {
      PlannerOptions opts;
      opts.unknown_cost = unknown;
      CHECK(cost_field(map, from, opts) == oracle::dijkstra(map, from, unknown));
    }
  }
}

TEST_CASE("planned paths are valid and optimal") {
  std::mt19937_64 gen(21);
  int planned = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto map = test::random_map(20, 20, gen, 0.3, 0.2);
    const auto& g = map.geometry();
    // Goals are clamped into the ring interior, so stay off the border.
    std::uniform_int_distribution<int> pick(1, 18);
    const Cell from{pick(gen), pick(gen)};
    const Cell to{pick(gen), pick(gen)};
    if (map.at(from) == MapCell::Occupied || map.at(to) == MapCell::Occupied) continue;
    PlannerOptions opts;
    opts.unknown_cost = trial % 2 == 0 ? 1.0 : 3.0;
    const auto ref = oracle::dijkstra(map, from, opts.unknown_cost);
    if (ref[g.index(to)] < 0) continue;
    const auto path = plan_path(map, g.center_of(from), g.center_of(to), opts);
    ++planned;
    CHECK_FALSE(path.substituted);
    CHECK(path.cost == ref[g.index(to)]);
    REQUIRE(path.cells.front() == from);
    REQUIRE(path.cells.back() == to);
    std::int64_t sum = 0;
    const auto none = blocked_mask(map, {}, 0.0, {});
    for (std::size_t i = 1; i < path.cells.size(); ++i) {
      CHECK(neighbours(path.cells[i - 1], path.cells[i]));
      CHECK(map.at(path.cells[i]) != MapCell::Occupied);
      const auto c = step_cost(map, none, path.cells[i - 1], path.cells[i], opts);
      REQUIRE(c != kUnreachable);
      sum += c;
    }
    CHECK(sum == path.cost);
  }
  CHECK(planned > 20);
}

TEST_CASE("diagonal steps never cut corners") {
  auto map = with(open_map(3, 3), {{1, 0}});
  const auto none = blocked_mask(map, {}, 0.0, {});
  CHECK(step_cost(map, none, {0, 0}, {1, 1}, {}) == kUnreachable);
  CHECK(step_cost(map, none, {0, 1}, {1, 2}, {}) == kDiagonalCost);
  CHECK(step_cost(map, none, {0, 1}, {1, 1}, {}) == kStraightCost);

  map = with(open_map(4, 4), {{2, 1}, {1, 2}});
  const auto path = plan_path(map, {0.75, 0.75}, {1.25, 1.25}, {1.0, 0.1, 0.0});
  CHECK_FALSE(path.substituted);
  CHECK(path.cost > kDiagonalCost);
  CHECK(path.cells.size() > 2);
}

TEST_CASE("an occupied goal is replaced by the nearest reachable cell") {
  const auto map = with(open_map(10, 10), {{5, 5}});
  PlannerOptions opts;
  opts.goal_radius = 1.0;
  const Vec2 goal = map.geometry().center_of({5, 5});
  const auto path = plan_path(map, {0.25, 0.25}, goal, opts);
  CHECK(path.substituted);
  CHECK(map.at(path.goal) == MapCell::Free);
  CHECK(distance(map.geometry().center_of(path.goal), goal) <= opts.goal_radius);
  CHECK(distance(map.geometry().center_of(path.goal), goal) == doctest::Approx(0.5));
}

TEST_CASE("nothing reachable near the goal is a path error") {
  // Column x = 4 walls off the right side.
  std::vector<Cell> wall;
  for (int y = 0; y < 10; ++y) wall.push_back({4, y});
  auto map = open_map(10, 10);
  std::vector<MapCell> cells(map.cells().begin(), map.cells().end());
  for (Cell c : wall) cells[map.geometry().index(c)] = MapCell::Occupied;
  map = ExplorationMap::from_cells(map.geometry(), cells);
  PlannerOptions opts;
  opts.goal_radius = 1.0;
  CHECK_THROWS_AS(plan_path(map, {0.25, 0.25}, {4.25, 2.25}, opts), PathError);
  opts.goal_radius = 3.0;
  CHECK(plan_path(map, {0.25, 0.25}, {4.25, 2.25}, opts).substituted);
  CHECK_THROWS_AS(plan_path(map, {2.25, 0.25}, {0.25, 0.25}, opts), PathError);
}

TEST_CASE("other robots block their clearance disk") {
  const auto map = open_map(11, 3, 1.0);
  const std::vector<Vec2> others{{5.5, 1.5}};
  const auto mask = blocked_mask(map, others, 0.6, {});
  CHECK(mask[map.geometry().index({5, 1})]);
  CHECK_FALSE(mask[map.geometry().index({4, 1})]);
  const std::vector<Vec2> keep{{5.5, 1.5}};
  CHECK_FALSE(blocked_mask(map, others, 0.6, keep)[map.geometry().index({5, 1})]);
  PlannerOptions opts;
  opts.robot_clearance = 0.6;
  const auto path = plan_path(map, {0.5, 1.5}, {10.5, 1.5}, opts, others);
  for (Cell c : path.cells) CHECK(c != Cell{5, 1});
}

TEST_CASE("nearest target matches the reference costs") {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 60; ++trial) {
    const auto map = test::random_map(16, 16, gen, 0.2, 0.2);
    const auto& g = map.geometry();
    std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
    Cell from = g.cell_at(pick(gen));
    while (map.at(from) == MapCell::Occupied) from = g.cell_at(pick(gen));
    std::vector<std::uint8_t> target(g.size(), 0);
    std::bernoulli_distribution t(0.05);
    for (auto& x : target) x = t(gen);
    const auto ref = oracle::dijkstra(map, from);
    std::optional<TargetHit> best;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!target[i] || ref[i] < 0) continue;
      if (!best || ref[i] < best->cost) best = TargetHit{g.cell_at(i), ref[i]};
    }
    const auto got = nearest_target(map, from, target, {});
    REQUIRE(got.has_value() == best.has_value());
    if (got) {
      CHECK(got->cell == best->cell);
      CHECK(got->cost == best->cost);
    }
  }
}

TEST_CASE("straight run follows the trapezoid profile") {
  const auto map = open_map(30, 3);
  // 21 cells at 0.5 m: 10 m between the first and last centres.
  const double expected = trapezoid_time(10.0, 4.0, 2.0);
  CHECK(expected == doctest::Approx(4.5));
  for (double dt : {0.1, 0.05, 0.01}) {
    const auto d = drive(map, row(0, 20, 1), 4.0, 2.0, dt);
    CHECK(d.status == MotionStatus::Arrived);
    // The sqrt braking cap makes the final approach take a few extra steps.
    CHECK(std::abs(d.time - expected) <= 4.0 * dt + 1e-9);
  }
  const double tri = trapezoid_time(2.0, 4.0, 2.0);
  const auto d = drive(map, row(0, 4, 1), 4.0, 2.0, 0.01);
  CHECK(std::abs(d.time - tri) <= 0.04 + 1e-9);
}

TEST_CASE("halving the step lands on the same final pose") {
  std::mt19937_64 gen(6);
  const auto map = open_map(40, 40);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<int> c(1, 38);
    const Cell a{c(gen), c(gen)};
    const Cell b{c(gen), c(gen)};
    const auto path = plan_path(map, map.geometry().center_of(a), map.geometry().center_of(b), {});
    const auto coarse = drive(map, path.cells, 1.0, 1.0, 0.1);
    const auto fine = drive(map, path.cells, 1.0, 1.0, 0.05);
    CHECK(distance(coarse.pose, fine.pose) < 1e-6);
  }
}

TEST_CASE("an empty or trivial path leaves the robot in place") {
  const auto map = open_map(5, 5);
  RobotState r;
  r.pose = {1.1, 1.3};
  CHECK(step_motion(r, map, 0.1) == MotionStatus::Idle);
  CHECK(r.pose == Vec2{1.1, 1.3});
  r.pose = map.geometry().center_of({2, 2});
  r.set_path({{2, 2}});
  step_motion(r, map, 0.1);
  CHECK(r.pose == map.geometry().center_of({2, 2}));
}

TEST_CASE("motion stops before an occupied cell") {
  const auto map = with(open_map(20, 3), {{10, 1}});
  const auto d = drive(map, row(0, 15, 1), 1.0, 1.0, 0.1);
  CHECK(d.status == MotionStatus::Blocked);
  CHECK(map.geometry().cell_of(d.pose).x < 10);
}
