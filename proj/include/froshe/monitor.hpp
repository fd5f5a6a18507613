#pragma once

#include <cstdint>
#include <deque>

#include "froshe/mode.hpp"

namespace froshe {

struct MonitorParams {
  int fma_window = 50;
  int sma_window = 200;
  double adjust_factor = 0.2;
  double d_t_min = 2.5;
  double d_t_max = 60.0;

  void validate() const;
};

/// Fast/slow moving averages of the per-tick change in explored cells, and
/// the compactness threshold d_t they steer.
///
/// When the fast average falls below the slow one, exploration is slowing
/// down: if the robot has mostly been collecting, d_t grows (more batches
/// count as compact, so herding wins more often); if it has mostly been
/// herding, d_t shrinks. Otherwise d_t is left alone.
class RateMonitor {
 public:
  RateMonitor() = default;
  RateMonitor(const MonitorParams& params, double d_t_initial, std::int64_t explored_start = 0);

  /// Appends delta = explored_now - previous count.
  void record(std::int64_t explored_now);

  /// Applies the switching rule; returns true when d_t changed.
  bool maybe_switch(ShepherdMode dominant);

  /// Remembers a decision for dominant_mode().
  void note_mode(ShepherdMode mode);
  /// Majority over the last fma_window noted modes; a tie goes to the most
  /// recent one, and Collecting when nothing was noted.
  ShepherdMode dominant_mode() const;

  double fma() const;
  double sma() const;
  double d_t() const noexcept { return d_t_; }
  std::int64_t last_delta() const noexcept { return deltas_.empty() ? 0 : deltas_.back(); }
  std::size_t samples() const noexcept { return deltas_.size(); }
  std::int64_t switch_events() const noexcept { return events_; }
  const MonitorParams& params() const noexcept { return params_; }

 private:
  MonitorParams params_;
  double d_t_ = 10.0;
  std::int64_t previous_ = 0;
  std::deque<std::int64_t> deltas_;  // newest at back, at most sma_window
  std::int64_t fast_sum_ = 0;
  std::int64_t slow_sum_ = 0;
  std::deque<ShepherdMode> modes_;
  int collecting_in_window_ = 0;
  std::int64_t events_ = 0;
};

}  // namespace froshe
