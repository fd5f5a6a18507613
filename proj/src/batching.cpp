#include "froshe/batching.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "froshe/error.hpp"

namespace froshe {
namespace {

std::vector<SwarmBatch> summarize(const SwarmState& state,
                                  const std::vector<std::vector<std::size_t>>& groups) {
  std::vector<SwarmBatch> out;
  out.reserve(groups.size());
  for (const auto& members : groups) {
    if (members.empty()) continue;
    SwarmBatch b;
    b.members = members;
    std::sort(b.members.begin(), b.members.end());
    Vec2 sum{};
    for (std::size_t i : b.members) {
      sum += state.sheep[i].position;
      b.total_weight += state.sheep[i].weight;
    }
    b.centroid = sum / static_cast<double>(b.members.size());
    out.push_back(std::move(b));
  }
  sort_batches(out);
  return out;
}

}  // namespace

void AssignmentParams::validate() const {
  if (lambda_m < 0.0 || lambda_d < 0.0) throw ConfigError("lambda values must be non-negative");
  if (lambda_m == 0.0 && lambda_d == 0.0) throw ConfigError("lambda_m and lambda_d are both zero");
}

void sort_batches(std::vector<SwarmBatch>& batches) {
  std::sort(batches.begin(), batches.end(), [](const SwarmBatch& a, const SwarmBatch& b) {
    if (a.total_weight != b.total_weight) return a.total_weight > b.total_weight;
    if (a.centroid.y != b.centroid.y) return a.centroid.y < b.centroid.y;
    if (a.centroid.x != b.centroid.x) return a.centroid.x < b.centroid.x;
    return a.members < b.members;
  });
}

std::vector<SwarmBatch> batch_swarm(const SwarmState& state, double linkage_distance) {
  if (!(linkage_distance > 0.0)) throw ConfigError("linkage distance must be positive");
  const std::size_t n = state.sheep.size();
  std::vector<std::size_t> label(n, std::numeric_limits<std::size_t>::max());
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> stack;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (label[seed] != std::numeric_limits<std::size_t>::max()) continue;
    const std::size_t id = groups.size();
    groups.emplace_back();
    label[seed] = id;
    stack.push_back(seed);
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      groups[id].push_back(i);
      for (std::size_t j = 0; j < n; ++j) {
        if (label[j] != std::numeric_limits<std::size_t>::max()) continue;
        if (distance(state.sheep[i].position, state.sheep[j].position) <= linkage_distance) {
          label[j] = id;
          stack.push_back(j);
        }
      }
    }
  }
  return summarize(state, groups);
}

std::vector<SwarmBatch> batch_swarm_kmeans(const SwarmState& state, std::size_t k,
                                           std::uint64_t seed, int max_iterations) {
  const std::size_t n = state.sheep.size();
  if (n == 0) return {};
  if (k == 0) throw ConfigError("k-means needs k >= 1");
  k = std::min(k, n);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Vec2> centers;
  for (std::size_t i = 0; i < k; ++i) centers.push_back(state.sheep[order[i]].position);

  std::vector<std::size_t> label(n, 0);
  for (int iter = 0; iter < max_iterations; ++iter) {
    bool changed = iter == 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = distance(state.sheep[i].position, centers[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (label[i] != best) changed = true;
      label[i] = best;
    }
    if (!changed) break;
    std::vector<Vec2> sum(k);
    std::vector<std::size_t> count(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      sum[label[i]] += state.sheep[i].position;
      ++count[label[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (count[c] > 0) centers[c] = sum[c] / static_cast<double>(count[c]);
    }
  }

  std::vector<std::vector<std::size_t>> groups(k);
  for (std::size_t i = 0; i < n; ++i) groups[label[i]].push_back(i);
  return summarize(state, groups);
}

double batch_score(const SwarmBatch& b, Vec2 robot, double w_max, double d_max,
                   const AssignmentParams& params) {
  const double gain = w_max > 0.0 ? static_cast<double>(b.total_weight) / w_max : 0.0;
  const double cost = d_max > 0.0 ? distance(robot, b.centroid) / d_max : 0.0;
  return params.lambda_m * gain - params.lambda_d * cost;
}

std::vector<std::size_t> assign_batches(std::span<const SwarmBatch> batches,
                                        std::span<const Vec2> robots,
                                        const AssignmentParams& params) {
  if (batches.empty()) throw AssignmentError("no batches to assign");
  double w_max = 0.0;
  for (const auto& b : batches) w_max = std::max(w_max, static_cast<double>(b.total_weight));

  const bool exclusive = params.exclusive && batches.size() >= robots.size();
  std::vector<std::uint8_t> taken(batches.size(), 0);
  std::vector<std::size_t> out;
  out.reserve(robots.size());
  for (const Vec2& r : robots) {
    double d_max = 0.0;
    for (const auto& b : batches) d_max = std::max(d_max, distance(r, b.centroid));
    std::size_t best = batches.size();
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < batches.size(); ++i) {
      if (exclusive && taken[i]) continue;
      const double s = batch_score(batches[i], r, w_max, d_max, params);
      if (s > best_score) {
        best_score = s;
        best = i;
      }
    }
    if (exclusive) taken[best] = 1;
    out.push_back(best);
  }
  return out;
}

}  // namespace froshe
