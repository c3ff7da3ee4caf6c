#pragma once

/// @file control.hpp
/// Release strategies q(t, x) = amplitude * 1_window(t) * 1_support(x), where the
/// amplitude spreads a fixed released mass (the budget) evenly over the window and
/// the support:  amplitude = budget / (|window| * |support|).
///
/// Time windows are periodic phase windows  { t : (t - phase) mod 2pi in [0, width] }
/// intersected with [t_start, t_end]. The four seasonal windows are special cases:
///
///   I0  all of [t_start, t_end]
///   I1  sin t <= -1/sqrt2   phase 5pi/4, width pi/2
///   I2  cos t <= -1/sqrt2   phase 3pi/4, width pi/2
///   I3  sin t >=  1/sqrt2   phase  pi/4, width pi/2

#include "pestctl/error.hpp"
#include "pestctl/fields.hpp"
#include "pestctl/reaction.hpp"

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace pestctl {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

enum class WindowKind { I0, I1, I2, I3, phase };

struct TimeWindow {
  WindowKind kind = WindowKind::I0;
  double phase = 0.0;
  double width = two_pi;
  double t_start = 4.0 * std::numbers::pi;
  double t_end = 12.0 * std::numbers::pi;

  static TimeWindow seasonal(int index, double t0 = 4.0 * std::numbers::pi, double t1 = 12.0 * std::numbers::pi) {
    constexpr double pi = std::numbers::pi;
    switch (index) {
    case 0: return {WindowKind::I0, 0.0, two_pi, t0, t1};
    case 1: return {WindowKind::I1, 1.25 * pi, 0.5 * pi, t0, t1};
    case 2: return {WindowKind::I2, 0.75 * pi, 0.5 * pi, t0, t1};
    case 3: return {WindowKind::I3, 0.25 * pi, 0.5 * pi, t0, t1};
    default: throw ConfigError("seasonal window index must be 0..3");
    }
  }

  static TimeWindow phase_window(double phase, double width, double t0 = 4.0 * std::numbers::pi,
                                 double t1 = 12.0 * std::numbers::pi) {
    if (!(width > 0.0)) throw ConfigError("phase window width must be positive");
    return {WindowKind::phase, phase, std::min(width, two_pi), t0, t1};
  }

  friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

inline std::string describe(const TimeWindow& w) {
  switch (w.kind) {
  case WindowKind::I0: return "I0";
  case WindowKind::I1: return "I1";
  case WindowKind::I2: return "I2";
  case WindowKind::I3: return "I3";
  case WindowKind::phase: break;
  }
  return "phase(" + std::to_string(w.phase) + "," + std::to_string(w.width) + ")";
}

namespace detail {

// Measure of the periodic set intersected with (-inf, t], up to a constant.
inline double cumulative_measure(const TimeWindow& w, double t) {
  const double s = t - w.phase;
  const double periods = std::floor(s / two_pi);
  const double rem = s - periods * two_pi;
  return periods * w.width + std::min(rem, w.width);
}

} // namespace detail

/// Exact Lebesgue measure of the window inside [a, b] (clipped to the window's own
/// [t_start, t_end]).
inline double window_measure_between(const TimeWindow& w, double a, double b) {
  const double lo = std::max(a, w.t_start), hi = std::min(b, w.t_end);
  if (!(hi > lo)) return 0.0;
  if (w.width >= two_pi) return hi - lo;
  return detail::cumulative_measure(w, hi) - detail::cumulative_measure(w, lo);
}

inline double window_measure(const TimeWindow& w) { return window_measure_between(w, w.t_start, w.t_end); }

/// Closed-interval membership.
inline bool window_contains(const TimeWindow& w, double t) noexcept {
  if (t < w.t_start || t > w.t_end) return false;
  if (w.width >= two_pi) return true;
  const double s = t - w.phase;
  const double rem = s - std::floor(s / two_pi) * two_pi;
  return rem <= w.width;
}

struct ReleaseStrategy {
  std::string name;
  Region support = Rect{1.0, 3.0, -3.0, 3.0};
  TimeWindow window;
  double budget = 1000.0;

  friend bool operator==(const ReleaseStrategy&, const ReleaseStrategy&) = default;
};

/// budget / (|window| |support|), using the analytic measure and area.
inline double strategy_amplitude(const ReleaseStrategy& s) {
  const double measure = window_measure(s.window);
  const double area = region_area(s.support);
  if (!(measure > 0.0)) throw ConfigError("strategy '" + s.name + "' has a zero-measure time window");
  if (!(area > 0.0)) throw ConfigError("strategy '" + s.name + "' has a zero-area support");
  if (!(s.budget >= 0.0)) throw ConfigError("strategy '" + s.name + "' has a negative budget");
  return s.budget / (measure * area);
}

inline ScalarField eval_control(const ReleaseStrategy& s, double t, const Grid& grid) {
  if (!window_contains(s.window, t)) return ScalarField(grid);
  ScalarField q = coverage(s.support, grid);
  q *= strategy_amplitude(s);
  return q;
}

/// Space-time integral of q: exact window measure times the support coverage area.
inline double total_release(const ReleaseStrategy& s, const Grid& grid) {
  return strategy_amplitude(s) * window_measure(s.window) * l1_norm(coverage(s.support, grid));
}

/// "B" and "R" for the two named regions, the generic description otherwise.
inline std::string support_label(const Region& r) {
  if (r == natality_ball()) return "B";
  if (r == harm_rectangle()) return "R";
  return describe(r);
}

/// The eight seasonal strategies, ordered B0, R0, B1, R1, B2, R2, B3, R3.
inline std::vector<ReleaseStrategy> seasonal_strategies(double budget = 1000.0) {
  std::vector<ReleaseStrategy> out;
  for (int i = 0; i < 4; ++i) {
    out.push_back({"q" + std::to_string(i) + "B", natality_ball(), TimeWindow::seasonal(i), budget});
    out.push_back({"q" + std::to_string(i) + "R", harm_rectangle(), TimeWindow::seasonal(i), budget});
  }
  return out;
}

/// Sum of several strategies with supports rasterised once for a grid.
class ControlSchedule {
public:
  ControlSchedule() = default;
  ControlSchedule(std::vector<ReleaseStrategy> strategies, const Grid& grid) : grid_(grid) {
    for (auto& s : strategies) {
      Entry e{s, coverage(s.support, grid), strategy_amplitude(s), 0.0};
      e.raster_area = l1_norm(e.support);
      entries_.push_back(std::move(e));
    }
  }

  bool empty() const noexcept { return entries_.empty(); }

  /// True when some strategy is active at t.
  bool active(double t) const noexcept {
    for (const auto& e : entries_)
      if (e.amplitude > 0.0 && window_contains(e.strategy.window, t)) return true;
    return false;
  }

  /// Writes q(t, .) into out; returns false (and leaves out untouched) when q(t) = 0.
  bool evaluate(double t, ScalarField& out) const {
    if (!active(t)) return false;
    out = ScalarField(grid_);
    for (const auto& e : entries_) {
      if (!window_contains(e.strategy.window, t)) continue;
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += e.amplitude * e.support[k];
    }
    return true;
  }

  /// Integral of q over [a, b] x R^2, with rasterised supports.
  double released_between(double a, double b) const {
    double total = 0.0;
    for (const auto& e : entries_)
      total += e.amplitude * window_measure_between(e.strategy.window, a, b) * e.raster_area;
    return total;
  }

  /// Largest value q can take.
  double sup() const noexcept {
    double s = 0.0;
    for (const auto& e : entries_) s += e.amplitude;
    return s;
  }

private:
  struct Entry {
    ReleaseStrategy strategy;
    ScalarField support;
    double amplitude;
    double raster_area;
  };
  Grid grid_;
  std::vector<Entry> entries_;
};

} // namespace pestctl
