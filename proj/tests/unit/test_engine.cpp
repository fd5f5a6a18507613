#include <doctest.h>

#include <json.hpp>
#include <random>
#include <sstream>

#include "froshe/engine.hpp"
#include "froshe/error.hpp"

using namespace froshe;

namespace {

SimConfig small_forest(const std::string& strategy, int robots = 2) {
  SimConfig c;
  c.scenario.environment_kind = EnvironmentKind::Forest;
  c.scenario.side_length = 14.0;
  c.scenario.tree_density = 0.04;
  c.scenario.robot_count = robots;
  c.scenario.spawn_radius = 3.0;
  c.sensor.range = 4.0;
  c.sensor.ray_count = 180;
  c.strategy = strategy;
  c.time_cap = 300.0;
  c.master_seed = 11;
  c.froshe.swarm.f_res = 1.0;
  return c;
}

// Sorted-sample quantile with linear interpolation between neighbours.
double reference_quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * q;
  const double lo = std::floor(h);
  const auto i = static_cast<std::size_t>(lo);
  return i + 1 < v.size() ? v[i] + (h - lo) * (v[i + 1] - v[i]) : v[i];
}

// Last time column of a metrics CSV.
double last_time(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::string last;
  while (std::getline(in, line)) {
    if (!line.empty()) last = line;
  }
  const auto a = last.find(',');
  const auto b = last.find(',', a + 1);
  return std::stod(last.substr(a + 1, b - a - 1));
}

}  // namespace

TEST_CASE("a small open world is covered almost at once") {
  SimConfig c;
  c.scenario.side_length = 4.0;
  c.sensor.range = 10.0;
  for (const char* s : {"froshe", "greedy", "utility"}) {
    c.strategy = s;
    const auto m = run(c);
    CHECK(m.summary.completed);
    CHECK(m.summary.final_fraction == 1.0);
    CHECK(m.summary.ticks <= 5);
    CHECK(m.summary.reachable_cells == 64);
  }
}

TEST_CASE("zero time cap is an immediate did-not-finish") {
  auto c = small_forest("froshe");
  c.time_cap = 0.0;
  const auto m = run(c);
  CHECK_FALSE(m.summary.completed);
  CHECK(m.summary.termination == Termination::TimeCap);
  CHECK(m.summary.completion_time == 0.0);
  REQUIRE(m.samples.size() == 1);
  CHECK(m.samples[0].explored_fraction == m.summary.final_fraction);
  CHECK(m.summary.final_fraction < 1.0);
}

TEST_CASE("identical configs give identical metrics") {
  for (const char* s : {"froshe", "greedy", "utility"}) {
    auto c = small_forest(s);
    c.debug_traces = true;
    const auto a = run(c);
    const auto b = run(c);
    CHECK(metrics_csv(a) == metrics_csv(b));
    CHECK(summary_json(a.summary) == summary_json(b.summary));
    CHECK(a.traces->decisions == b.traces->decisions);
  }
}

TEST_CASE("runs respect the basic metric invariants") {
  for (const char* s : {"froshe", "greedy", "utility"}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      auto c = small_forest(s, 3);
      c.master_seed = seed;
      const auto m = run(c);
      CHECK(m.summary.completion_time <= c.time_cap + 1e-9);
      for (std::size_t k = 1; k < m.samples.size(); ++k) {
        REQUIRE(m.samples[k].explored_fraction >= m.samples[k - 1].explored_fraction);
        REQUIRE(m.samples[k].explored_cells >= m.samples[k - 1].explored_cells);
      }
      if (m.summary.termination == Termination::Coverage) {
        CHECK(m.summary.final_fraction >= c.coverage_target - 1e-12);
      }
      CHECK(m.summary.distance.size() == 3);
      CHECK(m.summary.completion_time == doctest::Approx(last_time(metrics_csv(m))));
    }
  }
}

TEST_CASE("the world does not depend on the strategy") {
  const auto a = run(small_forest("froshe", 3));
  const auto b = run(small_forest("greedy", 3));
  CHECK(a.summary.reachable_cells == b.summary.reachable_cells);
  CHECK(a.samples[0].explored_cells == b.samples[0].explored_cells);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a.samples[0].robots[i].pose == b.samples[0].robots[i].pose);
  }
  auto c = small_forest("froshe", 3);
  c.froshe.swarm.e = 0.5;
  CHECK(run(c).samples[0].explored_cells == a.samples[0].explored_cells);
}

TEST_CASE("quantiles and summaries match a direct recomputation") {
  CHECK(quantile({4, 1, 3, 2}, 0.5) == 2.5);
  CHECK(quantile({4, 1, 3, 2}, 0.25) == 1.75);
  CHECK(quantile({7}, 0.75) == 7.0);
  const auto flat = summarize({5, 5, 5, 5});
  CHECK(flat.iqr == 0.0);
  CHECK(flat.min == flat.max);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(1 + trial % 17);
    for (auto& x : v) x = u(gen);
    const auto s = summarize(v);
    CHECK(s.median == doctest::Approx(reference_quantile(v, 0.5)).epsilon(1e-12));
    CHECK(s.q1 == doctest::Approx(reference_quantile(v, 0.25)).epsilon(1e-12));
    CHECK(s.q3 == doctest::Approx(reference_quantile(v, 0.75)).epsilon(1e-12));
  }
}

TEST_CASE("a single-run suite reports that run") {
  auto c = small_forest("greedy");
  const auto suite = run_suite(c, 1);
  REQUIRE(suite.runs.size() == 1);
  const double t = run(c).summary.completion_time;
  CHECK(suite.stats.median == t);
  CHECK(suite.stats.mean == t);
  CHECK(suite.stats.min == t);
  CHECK(suite.stats.max == t);
  CHECK(suite.stats.iqr == 0.0);
}

TEST_CASE("suite aggregates match the per-run metrics") {
  auto c = small_forest("froshe", 2);
  c.repeat_count = 4;
  const auto serial = run_suite(c, 1);
  const auto threaded = run_suite(c, 3);
  std::vector<double> times;
  std::size_t completed = 0;
  for (std::size_t k = 0; k < serial.runs.size(); ++k) {
    CHECK(serial.runs[k].summary.seed == c.master_seed + k);
    CHECK(metrics_csv(serial.runs[k]) == metrics_csv(threaded.runs[k]));
    times.push_back(last_time(metrics_csv(serial.runs[k])));
    completed += serial.runs[k].summary.completed;
  }
  CHECK(serial.stats.completed == completed);
  CHECK(serial.stats.median == doctest::Approx(reference_quantile(times, 0.5)));
  CHECK(serial.stats.iqr ==
        doctest::Approx(reference_quantile(times, 0.75) - reference_quantile(times, 0.25)));
  const auto j = nlohmann::json::parse(suite_json(serial));
  CHECK(j["runs"].size() == 4);
  CHECK(j["stats"]["median"].get<double>() == serial.stats.median);
}

TEST_CASE("configuration errors surface before any tick") {
  auto c = small_forest("wander");
  CHECK_THROWS_AS(run(c), ConfigError);
  c = small_forest("greedy");
  c.coverage_target = 0.0;
  CHECK_THROWS_AS(run(c), ConfigError);
  c = small_forest("greedy");
  c.frontier_rate = 3.0;
  CHECK_THROWS_AS(run(c), ConfigError);
  c = small_forest("greedy");
  c.repeat_count = 0;
  CHECK_THROWS_AS(run_suite(c), ConfigError);
}

TEST_CASE("a failing suite run is reported with its index") {
  auto c = small_forest("greedy");
  c.scenario.side_length = 2.0;
  c.scenario.robot_count = 40;
  c.repeat_count = 2;
  try {
    run_suite(c, 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).rfind("run 0:", 0) == 0);
  }
}
