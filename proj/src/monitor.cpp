#include "froshe/monitor.hpp"

#include <algorithm>

#include "froshe/error.hpp"

namespace froshe {

void MonitorParams::validate() const {
  if (!(fma_window > 0 && fma_window < sma_window)) {
    throw ConfigError("monitor windows must satisfy 0 < fma_window < sma_window");
  }
  if (!(adjust_factor > 0.0 && adjust_factor < 1.0)) {
    throw ConfigError("adjust_factor must lie in (0, 1)");
  }
  if (!(d_t_min > 0.0 && d_t_min <= d_t_max)) throw ConfigError("invalid d_t bounds");
}

RateMonitor::RateMonitor(const MonitorParams& params, double d_t_initial,
                         std::int64_t explored_start)
    : params_(params),
      d_t_(std::clamp(d_t_initial, params.d_t_min, params.d_t_max)),
      previous_(explored_start) {}

void RateMonitor::record(std::int64_t explored_now) {
  const std::int64_t delta = explored_now - previous_;
  previous_ = explored_now;
  deltas_.push_back(delta);
  fast_sum_ += delta;
  slow_sum_ += delta;
  const auto n = static_cast<int>(deltas_.size());
  if (n > params_.fma_window) fast_sum_ -= deltas_[deltas_.size() - 1 - params_.fma_window];
  if (n > params_.sma_window) {
    slow_sum_ -= deltas_.front();
    deltas_.pop_front();
  }
}

double RateMonitor::fma() const {
  const auto n = std::min<std::size_t>(deltas_.size(), params_.fma_window);
  return n == 0 ? 0.0 : static_cast<double>(fast_sum_) / static_cast<double>(n);
}

double RateMonitor::sma() const {
  const auto n = std::min<std::size_t>(deltas_.size(), params_.sma_window);
  return n == 0 ? 0.0 : static_cast<double>(slow_sum_) / static_cast<double>(n);
}

bool RateMonitor::maybe_switch(ShepherdMode dominant) {
  if (deltas_.empty() || !(fma() < sma())) return false;
  const double before = d_t_;
  if (dominant == ShepherdMode::Collecting) {
    d_t_ = std::min(d_t_ * (1.0 + params_.adjust_factor), params_.d_t_max);
  } else {
    d_t_ = std::max(d_t_ * (1.0 - params_.adjust_factor), params_.d_t_min);
  }
  if (d_t_ == before) return false;
  ++events_;
  return true;
}

void RateMonitor::note_mode(ShepherdMode mode) {
  modes_.push_back(mode);
  if (mode == ShepherdMode::Collecting) ++collecting_in_window_;
  if (static_cast<int>(modes_.size()) > params_.fma_window) {
    if (modes_.front() == ShepherdMode::Collecting) --collecting_in_window_;
    modes_.pop_front();
  }
}

ShepherdMode RateMonitor::dominant_mode() const {
  if (modes_.empty()) return ShepherdMode::Collecting;
  const int herding = static_cast<int>(modes_.size()) - collecting_in_window_;
  if (collecting_in_window_ > herding) return ShepherdMode::Collecting;
  if (herding > collecting_in_window_) return ShepherdMode::Herding;
  return modes_.back();
}

}  // namespace froshe
