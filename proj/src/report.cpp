#include <json.hpp>

#include "froshe/engine.hpp"

namespace froshe {
namespace {

nlohmann::ordered_json to_json(const RunSummary& s) {
  nlohmann::ordered_json j;
  j["strategy"] = s.strategy;
  j["robot_count"] = s.robot_count;
  j["seed"] = s.seed;
  j["completed"] = s.completed;
  j["completion_time"] = s.completion_time;
  j["termination"] = std::string(to_string(s.termination));
  j["distance"] = s.distance;
  j["mode_switches"] = s.mode_switches;
  j["threshold_events"] = s.threshold_events;
  j["reachable_cells"] = s.reachable_cells;
  j["final_fraction"] = s.final_fraction;
  j["ticks"] = s.ticks;
  return j;
}

nlohmann::ordered_json to_json(const SuiteStats& s) {
  nlohmann::ordered_json j;
  j["runs"] = s.runs;
  j["completed"] = s.completed;
  j["mean"] = s.mean;
  j["median"] = s.median;
  j["q1"] = s.q1;
  j["q3"] = s.q3;
  j["iqr"] = s.iqr;
  j["min"] = s.min;
  j["max"] = s.max;
  return j;
}

}  // namespace

std::string summary_json(const RunSummary& summary) { return to_json(summary).dump(2) + "\n"; }

std::string suite_json(const SuiteResult& suite) {
  nlohmann::ordered_json j;
  j["stats"] = to_json(suite.stats);
  j["runs"] = nlohmann::ordered_json::array();
  for (const auto& r : suite.runs) j["runs"].push_back(to_json(r.summary));
  return j.dump(2) + "\n";
}

}  // namespace froshe
