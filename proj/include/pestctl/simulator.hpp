#pragma once

/// @file simulator.hpp
/// Global time loop for the controlled predator-prey system. Each step, with the
/// step size chosen from the current state:
///
///   1. v = nonlocal velocity of the current prey field
///   2. u <- Lax-Friedrichs transport of u along v
///   3. w <- explicit heat step
///   4. (u, w) <- midpoint-rule source step, control sampled at t and t + dt/2
///
/// The loop lands exactly on t_end and on the bounds of every cost horizon, so
/// time integrals over those horizons need no interpolation.

#include "pestctl/control.hpp"
#include "pestctl/cost_spec.hpp"
#include "pestctl/diffusion.hpp"
#include "pestctl/error.hpp"
#include "pestctl/fields.hpp"
#include "pestctl/nonlocal_velocity.hpp"
#include "pestctl/reaction.hpp"
#include "pestctl/transport.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace pestctl {

struct InitialData {
  ScalarField u0;
  ScalarField w0;
};

/// Initial data as amplitude * indicator(support) for each species.
struct InitialSpec {
  double u0_amplitude = 0.0;
  Region u0_support = natality_ball();
  double w0_amplitude = 2.0;
  Region w0_support = natality_ball();

  InitialData build(const Grid& grid) const {
    ScalarField u0 = indicator(u0_support, grid);
    u0 *= u0_amplitude;
    ScalarField w0 = indicator(w0_support, grid);
    w0 *= w0_amplitude;
    return {std::move(u0), std::move(w0)};
  }

  friend bool operator==(const InitialSpec&, const InitialSpec&) = default;
};

struct SimConfig {
  ModelParams params;
  std::size_t resolution = 256;
  /// Numerical domain; default [-4-ell, 4+ell]^2.
  std::optional<Rect> domain;
  InitialSpec initial;
  /// Overrides `initial` when set (programmatic use only).
  std::optional<InitialData> initial_fields;
  std::vector<ReleaseStrategy> strategies;
  double t_start = 0.0;
  double t_end = 12.0 * std::numbers::pi;
  double cfl_safety = 0.9;
  /// Reaction step bound is reaction_dt_factor / K_g.
  double reaction_dt_factor = 0.1;
  std::vector<double> snapshot_times;
  bool monitors = true;
  std::vector<CostSpec> costs = {prey_in_rectangle_cost()};
  ConvolutionMethod convolution = ConvolutionMethod::fft;
  int max_retries = 3;

  Rect numerical_domain() const {
    if (domain) return *domain;
    const double h = 4.0 + params.ell;
    return Rect{-h, h, -h, h};
  }

  Grid grid() const {
    const Rect d = numerical_domain();
    return Grid(resolution, resolution, d.x_lo, d.x_hi, d.y_lo, d.y_hi);
  }

  std::vector<std::string> validate() const {
    std::vector<std::string> errs = params.validate();
    if (resolution < 2) errs.push_back("resolution must be at least 2");
    if (!(t_end > t_start)) errs.push_back("t_end must exceed t_start");
    if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) errs.push_back("cfl_safety must lie in (0, 1]");
    if (!(reaction_dt_factor > 0.0)) errs.push_back("reaction_dt_factor must be positive");
    if (initial.u0_amplitude < 0.0 || initial.w0_amplitude < 0.0)
      errs.push_back("initial amplitudes must be nonnegative");
    for (const auto& c : costs)
      if (!(c.t_end > c.t_begin)) errs.push_back("cost '" + c.name + "' has an empty horizon");
    return errs;
  }
};

struct SimState {
  double t = 0.0;
  ScalarField u;
  ScalarField w;
};

struct TimeSample {
  double t = 0.0;
  double mass_u = 0.0;
  double mass_w = 0.0;
  double linf_u = 0.0;
  double linf_w = 0.0;
  double running_cost = 0.0;    ///< integral of w over R
  double mass_w_physical = 0.0; ///< integral of w over the physical domain
  double min_u = 0.0;
  double min_w = 0.0;
  friend bool operator==(const TimeSample&, const TimeSample&) = default;
};

struct Snapshot {
  double requested = 0.0;
  double t = 0.0;
  ScalarField u;
  ScalarField w;
  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

struct StepStats {
  std::size_t steps = 0;
  std::size_t rejections = 0;
  double dt_min = std::numeric_limits<double>::infinity();
  double dt_max = 0.0;
  double dt_sum = 0.0;
  double wall_seconds = 0.0;

  double dt_mean() const noexcept { return steps ? dt_sum / static_cast<double>(steps) : 0.0; }
};

struct MonitorVerdict {
  std::string name;
  bool pass = true;
  double worst_margin = std::numeric_limits<double>::infinity();
  double worst_t = 0.0;
};

struct MonitorReport {
  std::vector<MonitorVerdict> verdicts;

  bool all_pass() const noexcept {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.pass; });
  }
  const MonitorVerdict* find(const std::string& name) const noexcept {
    for (const auto& v : verdicts)
      if (v.name == name) return &v;
    return nullptr;
  }
};

struct SimOutput {
  std::vector<TimeSample> series;
  /// cost_samples[c][n] = spatial integral of cost c's integrand at series[n].t.
  std::vector<std::vector<double>> cost_samples;
  std::vector<CostSpec> cost_specs;
  std::vector<double> costs;
  std::vector<Snapshot> snapshots;
  MonitorReport monitors;
  StepStats stats;
  SimState final_state;
};

/// Cost integral by the trapezoid rule over the samples inside [t_begin, t_end].
inline double trapezoid_over(const std::vector<TimeSample>& series, const std::vector<double>& values, double t0,
                             double t1) {
  double total = 0.0;
  for (std::size_t n = 1; n < series.size(); ++n) {
    const double a = series[n - 1].t, b = series[n].t;
    if (a >= t0 && b <= t1) total += 0.5 * (b - a) * (values[n - 1] + values[n]);
  }
  return total;
}

/// A priori envelopes on a finished series.
///
/// Checks |w|_1 <= |w0|_1 e^{K_g t'}, |w|_inf <= |w0|_inf e^{K_g t'},
/// |u|_1 <= (|u0|_1 + |q|_{L1}) exp[K_f t' (1 + |w0|_inf e^{K_g t'})] with t' = t - t0,
/// the logistic cap |w|_inf <= max(|w0|_inf, C) + cap_slack, and pointwise
/// nonnegativity. The exponential bounds are compared in log space.
inline MonitorReport monitor_apriori(const std::vector<TimeSample>& series, const ModelParams& p,
                                     const ControlSchedule& control, double cap_slack = 0.5) {
  MonitorReport report;
  if (series.empty()) return report;
  const TimeSample& s0 = series.front();
  const double t0 = s0.t, Kf = p.K_f(), Kg = p.K_g();
  const double log_w1 = std::log(s0.mass_w), log_winf = std::log(s0.linf_w);
  const double cap = std::max(s0.linf_w, p.C) + cap_slack;

  MonitorVerdict w1{"w_L1_envelope"}, winf{"w_Linf_envelope"}, u1{"u_L1_envelope"}, logistic{"w_logistic_cap"},
      pos{"positivity"};
  auto update_log = [](MonitorVerdict& v, double log_bound, double value, double t) {
    const double m = value > 0.0 ? log_bound - std::log(value) : std::numeric_limits<double>::infinity();
    if (m < v.worst_margin) {
      v.worst_margin = m;
      v.worst_t = t;
    }
    if (!(m >= 0.0)) v.pass = false;
  };
  auto update_lin = [](MonitorVerdict& v, double bound, double value, double t) {
    const double m = bound - value;
    if (m < v.worst_margin) {
      v.worst_margin = m;
      v.worst_t = t;
    }
    if (!(m >= 0.0)) v.pass = false;
  };
  for (const auto& s : series) {
    const double dt = s.t - t0;
    update_log(w1, log_w1 + Kg * dt, s.mass_w, s.t);
    update_log(winf, log_winf + Kg * dt, s.linf_w, s.t);
    const double source = s0.mass_u + control.released_between(t0, s.t);
    // exp[Kg dt] can overflow; the log of the growth factor stays finite or +inf.
    const double growth = Kf * dt * (1.0 + s0.linf_w * std::exp(Kg * dt));
    update_log(u1, source > 0.0 ? std::log(source) + growth : -std::numeric_limits<double>::infinity(), s.mass_u,
               s.t);
    update_lin(logistic, cap, s.linf_w, s.t);
    update_lin(pos, 0.0, -std::min(s.min_u, s.min_w), s.t);
  }
  report.verdicts = {w1, winf, u1, logistic, pos};
  return report;
}

class Simulator {
public:
  explicit Simulator(SimConfig config)
      : config_(std::move(config)), grid_(config_.grid()),
        gradient_(make_mollifier(config_, grid_), grid_, config_.convolution),
        sources_(config_.params, CoefficientMask(grid_)), control_(config_.strategies, grid_) {
    const Region R = harm_rectangle();
    rect_cells_ = region_cells(R, grid_);
    physical_cells_ = region_cells(physical_domain(), grid_);
    for (const auto& c : config_.costs) {
      if (c.region) {
        cost_cells_.push_back(region_cells(*c.region, grid_));
      } else {
        std::vector<std::size_t> all(grid_.size());
        for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
        cost_cells_.push_back(std::move(all));
      }
    }
  }

  const SimConfig& config() const noexcept { return config_; }
  const Grid& grid() const noexcept { return grid_; }
  const ControlSchedule& control() const noexcept { return control_; }

  SimState initial_state() const {
    InitialData d = config_.initial_fields ? *config_.initial_fields : config_.initial.build(grid_);
    if (!(d.u0.grid() == grid_) || !(d.w0.grid() == grid_))
      throw ConfigError("initial fields do not match the configured grid");
    if (min_value(d.u0) < 0.0 || min_value(d.w0) < 0.0) throw ConfigError("initial data must be nonnegative");
    return {config_.t_start, std::move(d.u0), std::move(d.w0)};
  }

  VectorField velocity(const ScalarField& w) { return saturate(gradient_(w), config_.params.kappa); }

  /// min(advective CFL, diffusive stability, reaction_dt_factor / K_g).
  double compute_dt(const VectorField& v) const {
    const double adv = max_advective_dt(v, config_.cfl_safety);
    const double dif = max_diffusive_dt(config_.params.mu, grid_, config_.cfl_safety);
    const double rea = config_.reaction_dt_factor / config_.params.K_g();
    return std::min({adv, dif, rea});
  }

  double compute_dt(const SimState& s) { return compute_dt(velocity(s.w)); }

  SimState step(const SimState& s, const VectorField& v, double dt) {
    SimState out;
    out.t = s.t + dt;
    ScalarField u = advect(s.u, v, dt);
    ScalarField w = diffuse(s.w, config_.params.mu, dt);
    std::span<const double> qa, qb;
    if (control_.evaluate(s.t, q_now_)) qa = q_now_.values();
    if (control_.evaluate(s.t + 0.5 * dt, q_mid_)) qb = q_mid_.values();
    auto [ur, wr] = react_rk2(u, w, qa, qb, s.t, dt, sources_);
    out.u = std::move(ur);
    out.w = std::move(wr);
    return out;
  }

  SimState step(const SimState& s, double dt) {
    const VectorField v = velocity(s.w);
    return step(s, v, dt);
  }

  /// Full run from the configured initial data.
  SimOutput run() {
    SimOutput out;
    SimState s = initial_state();
    begin(out, s);
    advance(out, s, config_.t_end);
    finish(out, std::move(s));
    return out;
  }

  /// Runs the prefix [t_start, t_stop] and returns the partial output and state.
  /// Continuing it with `resume` is bit-identical to an uninterrupted run provided
  /// t_stop is one of the landing times and no control acts before t_stop.
  std::pair<SimOutput, SimState> run_prefix(double t_stop) {
    SimOutput out;
    SimState s = initial_state();
    begin(out, s);
    advance(out, s, t_stop);
    return {std::move(out), std::move(s)};
  }

  SimOutput resume(SimOutput out, SimState s) {
    if (out.cost_samples.size() != config_.costs.size() || out.series.empty() || out.series.back().t != s.t)
      throw std::invalid_argument("resume needs the prefix output that produced the state");
    pending_snapshots_.clear();
    for (double t : config_.snapshot_times)
      if (t > s.t) pending_snapshots_.push_back(t);
    std::sort(pending_snapshots_.begin(), pending_snapshots_.end());
    advance(out, s, config_.t_end);
    finish(out, std::move(s));
    return out;
  }

  /// Times the loop is forced to land on.
  std::vector<double> landing_times() const {
    std::vector<double> ts{config_.t_end};
    for (const auto& c : config_.costs)
      for (double t : {c.t_begin, c.t_end})
        if (t > config_.t_start && t < config_.t_end) ts.push_back(t);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
  }

private:
  static Mollifier make_mollifier(const SimConfig& c, const Grid& g) {
    const auto errs = c.validate();
    if (!errs.empty()) throw ConfigError(errs);
    return Mollifier(c.params.ell, g);
  }

  TimeSample sample(const SimState& s) const {
    TimeSample r;
    r.t = s.t;
    r.mass_u = l1_norm(s.u);
    r.mass_w = l1_norm(s.w);
    r.linf_u = linf_norm(s.u);
    r.linf_w = linf_norm(s.w);
    r.running_cost = integrate_cells(s.w, rect_cells_);
    r.mass_w_physical = integrate_cells(s.w, physical_cells_);
    r.min_u = min_value(s.u);
    r.min_w = min_value(s.w);
    return r;
  }

  double cost_integral(std::size_t c, const SimState& s) const {
    const auto& phi = config_.costs[c].integrand;
    double acc = 0.0;
    for (std::size_t k : cost_cells_[c]) {
      const std::size_t i = k % grid_.nx, j = k / grid_.nx;
      acc += phi(s.t, grid_.x_center(i), grid_.y_center(j), s.u[k], s.w[k]);
    }
    return acc * grid_.cell_area();
  }

  void record(SimOutput& out, const SimState& s) {
    out.series.push_back(sample(s));
    for (std::size_t c = 0; c < config_.costs.size(); ++c) out.cost_samples[c].push_back(cost_integral(c, s));
  }

  void begin(SimOutput& out, const SimState& s) {
    pending_snapshots_ = config_.snapshot_times;
    std::sort(pending_snapshots_.begin(), pending_snapshots_.end());
    out.cost_samples.assign(config_.costs.size(), {});
    out.cost_specs = config_.costs;
    record(out, s);
    while (!pending_snapshots_.empty() && pending_snapshots_.front() <= s.t) {
      out.snapshots.push_back({pending_snapshots_.front(), s.t, s.u, s.w});
      pending_snapshots_.erase(pending_snapshots_.begin());
    }
  }

  void advance(SimOutput& out, SimState& s, double t_stop) {
    const auto wall0 = std::chrono::steady_clock::now();
    std::vector<double> landings = landing_times();
    landings.push_back(t_stop);
    std::sort(landings.begin(), landings.end());
    while (s.t < t_stop) {
      const VectorField v = velocity(s.w);
      double dt = compute_dt(v);
      double target = t_stop;
      for (double L : landings)
        if (L > s.t) {
          target = L;
          break;
        }
      bool land = false;
      if (s.t + dt >= target) {
        dt = target - s.t;
        land = true;
      }
      SimState next;
      for (int attempt = 0;; ++attempt) {
        try {
          next = step(s, v, dt);
          break;
        } catch (const StepRejected& e) {
          ++out.stats.rejections;
          if (attempt >= config_.max_retries)
            throw NumericalFailure("step at t = " + std::to_string(s.t) + " rejected after " +
                                   std::to_string(config_.max_retries) + " retries: " + e.what());
          dt *= 0.5;
          land = false;
        }
      }
      if (land) next.t = target;
      ++out.stats.steps;
      out.stats.dt_min = std::min(out.stats.dt_min, dt);
      out.stats.dt_max = std::max(out.stats.dt_max, dt);
      out.stats.dt_sum += dt;
      capture_snapshots(out, s, next);
      s = std::move(next);
      record(out, s);
    }
    out.stats.wall_seconds +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  }

  // Nearest-step capture: a requested time between two steps takes the closer state.
  void capture_snapshots(SimOutput& out, const SimState& prev, const SimState& next) {
    while (!pending_snapshots_.empty() && pending_snapshots_.front() <= next.t) {
      const double want = pending_snapshots_.front();
      const SimState& pick = (want - prev.t <= next.t - want) ? prev : next;
      out.snapshots.push_back({want, pick.t, pick.u, pick.w});
      pending_snapshots_.erase(pending_snapshots_.begin());
    }
  }

  void finish(SimOutput& out, SimState s) {
    for (double want : pending_snapshots_) out.snapshots.push_back({want, s.t, s.u, s.w});
    pending_snapshots_.clear();
    out.costs.clear();
    for (std::size_t c = 0; c < config_.costs.size(); ++c)
      out.costs.push_back(
          trapezoid_over(out.series, out.cost_samples[c], config_.costs[c].t_begin, config_.costs[c].t_end));
    if (config_.monitors) out.monitors = monitor_apriori(out.series, config_.params, control_);
    out.final_state = std::move(s);
  }

  SimConfig config_;
  Grid grid_;
  SmoothedGradient gradient_;
  SeasonalLotkaVolterra sources_;
  ControlSchedule control_;
  std::vector<std::size_t> rect_cells_, physical_cells_;
  std::vector<std::vector<std::size_t>> cost_cells_;
  std::vector<double> pending_snapshots_;
  ScalarField q_now_, q_mid_;
};

inline SimOutput run(const SimConfig& config) { return Simulator(config).run(); }

} // namespace pestctl
