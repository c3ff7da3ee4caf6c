#pragma once

/// @file search.hpp
/// Strategy comparison, derivative-free optimisation over strategy parameters and
/// the diffusivity calibration sweep. Every evaluation is a full simulation.

#include "pestctl/control.hpp"
#include "pestctl/cost.hpp"
#include "pestctl/error.hpp"
#include "pestctl/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace pestctl {

/// Runs fn(0..n-1) on up to `threads` workers. Each index runs exactly once; the
/// first exception is rethrown after all workers join.
inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

/// A named set of simultaneous releases; an empty set is the uncontrolled case.
struct Candidate {
  std::string name;
  std::vector<ReleaseStrategy> releases;
};

struct ComparisonRow {
  std::string name;
  std::string support;
  std::string window;
  double amplitude = 0.0;
  double cost = std::numeric_limits<double>::quiet_NaN();
  std::string error; ///< non-empty when the run failed
  std::size_t declared = 0;
  bool best = false;
};

namespace detail {

// Earliest instant any control acts, when all candidates share a control-free
// prefix that ends on a landing time.
inline std::optional<double> shared_prefix_end(const std::vector<Candidate>& candidates, const SimConfig& config) {
  double first = config.t_end;
  for (const auto& c : candidates)
    for (const auto& r : c.releases) first = std::min(first, std::max(r.window.t_start, config.t_start));
  if (!(first > config.t_start) || !(first < config.t_end)) return std::nullopt;
  const auto landings = Simulator(config).landing_times();
  if (std::find(landings.begin(), landings.end(), first) == landings.end()) return std::nullopt;
  return first;
}

} // namespace detail

/// Simulates every candidate with the shared configuration and ranks by cost
/// (channel 0). Ties keep declaration order; failed runs sort last with the error
/// recorded on their row. When every control starts at a landing time after
/// t_start, the uncontrolled prefix is simulated once and shared, which yields the
/// same numbers as independent runs.
inline std::vector<ComparisonRow> compare_strategies(const std::vector<Candidate>& candidates, SimConfig config,
                                                     unsigned threads = 1, bool share_prefix = true) {
  config.strategies.clear();
  config.snapshot_times.clear();
  std::vector<ComparisonRow> rows(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto& row = rows[i];
    const auto& c = candidates[i];
    row.name = c.name;
    row.declared = i;
    if (c.releases.empty()) {
      row.support = "none";
      row.window = "none";
    } else {
      for (const auto& r : c.releases) {
        if (!row.support.empty()) {
          row.support += "+";
          row.window += "+";
        }
        row.support += support_label(r.support);
        row.window += describe(r.window);
        row.amplitude += strategy_amplitude(r);
      }
    }
  }

  std::optional<std::pair<SimOutput, SimState>> prefix;
  std::optional<double> branch = share_prefix ? detail::shared_prefix_end(candidates, config) : std::nullopt;
  if (branch) {
    try {
      prefix = Simulator(config).run_prefix(*branch);
    } catch (const std::exception&) {
      prefix.reset(); // fall back to independent runs so each row carries its own error
    }
  }

  parallel_for(candidates.size(), threads, [&](std::size_t i) {
    SimConfig ci = config;
    ci.strategies = candidates[i].releases;
    try {
      Simulator sim(ci);
      SimOutput out = prefix ? sim.resume(prefix->first, prefix->second) : sim.run();
      rows[i].cost = out.costs.at(0);
    } catch (const std::exception& e) {
      rows[i].error = e.what();
    }
  });

  std::stable_sort(rows.begin(), rows.end(), [](const ComparisonRow& a, const ComparisonRow& b) {
    const bool fa = !a.error.empty(), fb = !b.error.empty();
    if (fa != fb) return fb;
    if (fa) return false;
    return a.cost < b.cost;
  });
  if (!rows.empty() && rows.front().error.empty()) rows.front().best = true;
  return rows;
}

/// The eight seasonal strategies, optionally preceded by the uncontrolled case.
inline std::vector<Candidate> seasonal_candidates(bool with_no_control = true, double budget = 1000.0) {
  std::vector<Candidate> out;
  if (with_no_control) out.push_back({"none", {}});
  for (auto& s : seasonal_strategies(budget)) out.push_back({s.name, {s}});
  return out;
}

// ---------------------------------------------------------------------------
// Nelder-Mead
// ---------------------------------------------------------------------------

struct Bounds {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t dim() const noexcept { return lower.size(); }
  std::vector<double> project(std::vector<double> p) const {
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::clamp(p[i], lower[i], upper[i]);
    return p;
  }
};

struct TraceEntry {
  std::size_t eval = 0;
  std::vector<double> params;
  double cost = 0.0;
  double best_so_far = 0.0;
};

struct OptimizeResult {
  std::vector<double> best_params;
  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<TraceEntry> trace;
  std::size_t evaluations = 0;
  bool converged = false;
};

struct NelderMeadOptions {
  std::size_t max_evals = 60;
  /// Initial simplex edge per coordinate.
  std::vector<double> step;
  /// Points evaluated before the simplex is built; the best of these and `start`
  /// anchors the simplex.
  std::vector<std::vector<double>> seeds;
  double f_tol = 1e-12;
  double x_tol = 1e-9;
  std::uint64_t jitter_seed = 0; ///< 0 disables simplex jitter
  unsigned threads = 1;          ///< workers for the seed and initial-simplex batch
};

/// Box-constrained Nelder-Mead (reflection 1, expansion 2, contraction 1/2,
/// shrink 1/2); trial points are projected onto the box. Evaluations that throw
/// count against the budget and score +infinity.
inline OptimizeResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                                  std::vector<double> start, const Bounds& bounds, NelderMeadOptions opt) {
  const std::size_t n = bounds.dim();
  if (start.size() != n || bounds.upper.size() != n) throw std::invalid_argument("dimension mismatch");
  for (std::size_t i = 0; i < n; ++i)
    if (!(bounds.lower[i] <= bounds.upper[i])) throw std::invalid_argument("inverted bounds");
  if (opt.step.empty()) {
    opt.step.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      opt.step[i] = 0.25 * std::max(bounds.upper[i] - bounds.lower[i], 1e-3);
  }
  if (opt.jitter_seed != 0) {
    std::mt19937_64 rng(opt.jitter_seed);
    std::uniform_real_distribution<double> jitter(0.9, 1.1);
    for (auto& s : opt.step) s *= jitter(rng);
  }

  OptimizeResult res;
  std::size_t failures = 0;
  auto score = [&](const std::vector<double>& p) {
    try {
      const double f = objective(p);
      return std::isfinite(f) ? f : std::numeric_limits<double>::infinity();
    } catch (const std::exception&) {
      ++failures;
      return std::numeric_limits<double>::infinity();
    }
  };
  auto log = [&](const std::vector<double>& p, double f) {
    ++res.evaluations;
    if (f < res.best_cost) {
      res.best_cost = f;
      res.best_params = p;
    }
    res.trace.push_back({res.evaluations, p, f, res.best_cost});
  };
  auto budget_left = [&] { return res.evaluations < opt.max_evals; };

  // Seeds, the start point and the simplex vertices around the best of them are
  // evaluated as batches so they can run concurrently.
  auto batch = [&](const std::vector<std::vector<double>>& pts) {
    const std::size_t m = std::min(pts.size(), opt.max_evals - res.evaluations);
    std::vector<double> f(m);
    parallel_for(m, opt.threads, [&](std::size_t i) { f[i] = score(pts[i]); });
    for (std::size_t i = 0; i < m; ++i) log(pts[i], f[i]);
    return f;
  };

  std::vector<std::vector<double>> first;
  first.push_back(bounds.project(start));
  for (const auto& s : opt.seeds) first.push_back(bounds.project(s));
  const auto f_first = batch(first);
  if (f_first.empty()) throw std::invalid_argument("evaluation budget is zero");
  const std::size_t anchor_idx =
      static_cast<std::size_t>(std::min_element(f_first.begin(), f_first.end()) - f_first.begin());
  const std::vector<double> anchor = first[anchor_idx];

  std::vector<std::vector<double>> simplex{anchor};
  std::vector<double> fs{f_first[anchor_idx]};
  std::vector<std::vector<double>> verts;
  for (std::size_t i = 0; i < n; ++i) {
    auto p = anchor;
    p[i] += opt.step[i];
    if (p[i] > bounds.upper[i]) p[i] = anchor[i] - opt.step[i];
    verts.push_back(bounds.project(p));
  }
  const auto f_verts = batch(verts);
  for (std::size_t i = 0; i < f_verts.size(); ++i) {
    simplex.push_back(verts[i]);
    fs.push_back(f_verts[i]);
  }

  auto combine = [&](const std::vector<double>& a, const std::vector<double>& b, double t) {
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = a[i] + t * (b[i] - a[i]);
    return bounds.project(std::move(r));
  };
  auto eval = [&](const std::vector<double>& p) {
    const double f = score(p);
    log(p, f);
    return f;
  };

  while (simplex.size() == n + 1 && budget_left()) {
    std::vector<std::size_t> order(n + 1);
    for (std::size_t i = 0; i <= n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    {
      std::vector<std::vector<double>> s2;
      std::vector<double> f2;
      for (auto k : order) {
        s2.push_back(simplex[k]);
        f2.push_back(fs[k]);
      }
      simplex = std::move(s2);
      fs = std::move(f2);
    }
    double spread = 0.0;
    for (std::size_t k = 1; k <= n; ++k)
      for (std::size_t i = 0; i < n; ++i) spread = std::max(spread, std::abs(simplex[k][i] - simplex[0][i]));
    if (std::abs(fs[n] - fs[0]) <= opt.f_tol * (1.0 + std::abs(fs[0])) && spread <= opt.x_tol) {
      res.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[k][i] / static_cast<double>(n);

    const auto xr = combine(centroid, simplex[n], -1.0);
    const double fr = eval(xr);
    if (fr < fs[0]) {
      if (!budget_left()) {
        simplex[n] = xr;
        fs[n] = fr;
        break;
      }
      const auto xe = combine(centroid, simplex[n], -2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[n] = xe;
        fs[n] = fe;
      } else {
        simplex[n] = xr;
        fs[n] = fr;
      }
      continue;
    }
    if (fr < fs[n - 1]) {
      simplex[n] = xr;
      fs[n] = fr;
      continue;
    }
    if (!budget_left()) break;
    const bool outside = fr < fs[n];
    const auto xc = outside ? combine(centroid, xr, 0.5) : combine(centroid, simplex[n], 0.5);
    const double fc = eval(xc);
    if (fc < std::min(fr, fs[n])) {
      simplex[n] = xc;
      fs[n] = fc;
      continue;
    }
    for (std::size_t k = 1; k <= n && budget_left(); ++k) {
      simplex[k] = combine(simplex[0], simplex[k], 0.5);
      fs[k] = eval(simplex[k]);
    }
  }

  if (failures == res.evaluations) throw NumericalFailure("every optimiser evaluation failed");
  return res;
}

/// Continuous strategy family p -> set of releases, with box bounds.
struct StrategyParams {
  std::vector<std::string> names;
  Bounds bounds;
  std::vector<double> initial;
  std::vector<double> step;
  std::vector<std::vector<double>> seeds;
  std::function<std::vector<ReleaseStrategy>(std::span<const double>)> to_releases;
};

/// One release on `support` with a phase window (phase, width); the seasonal
/// windows I0..I3 are feasible points and are used as seeds.
inline StrategyParams phase_window_family(Region support, double budget = 1000.0, double width_lo = 0.1,
                                          double t0 = 4.0 * std::numbers::pi, double t1 = 12.0 * std::numbers::pi) {
  StrategyParams p;
  p.names = {"phase", "width"};
  p.bounds = {{0.0, width_lo}, {two_pi, two_pi}};
  p.initial = {0.0, two_pi};
  p.step = {0.25 * std::numbers::pi, 0.25 * std::numbers::pi};
  for (int i = 1; i <= 3; ++i) {
    const TimeWindow w = TimeWindow::seasonal(i, t0, t1);
    p.seeds.push_back({w.phase, w.width});
  }
  p.to_releases = [support, budget, t0, t1](std::span<const double> x) {
    return std::vector<ReleaseStrategy>{
        {"phase", support, TimeWindow::phase_window(x[0], x[1], t0, t1), budget}};
  };
  return p;
}

/// Minimises cost channel 0 of the simulation over the strategy parameters.
inline OptimizeResult optimize(const StrategyParams& params, const SimConfig& config, std::size_t budget_evals,
                               std::uint64_t seed = 0, unsigned threads = 1) {
  if (budget_evals < params.bounds.dim() + 2)
    throw ConfigError("optimiser evaluation budget must be at least dimension + 2");
  SimConfig base = config;
  base.strategies.clear();
  base.snapshot_times.clear();
  // Share the uncontrolled prefix when the family's releases start after t_start.
  std::optional<std::pair<SimOutput, SimState>> prefix;
  std::optional<double> branch =
      detail::shared_prefix_end({Candidate{"", params.to_releases(params.initial)}}, base);
  if (branch) prefix = Simulator(base).run_prefix(*branch);

  auto objective = [&](std::span<const double> x) {
    SimConfig c = base;
    c.strategies = params.to_releases(x);
    Simulator sim(c);
    bool resumable = prefix.has_value();
    for (const auto& r : c.strategies)
      if (prefix && r.window.t_start < *branch) resumable = false;
    return (resumable ? sim.resume(prefix->first, prefix->second) : sim.run()).costs.at(0);
  };
  NelderMeadOptions opt;
  opt.max_evals = budget_evals;
  opt.step = params.step;
  opt.seeds = params.seeds;
  opt.jitter_seed = seed;
  opt.threads = threads;
  return nelder_mead(objective, params.initial, params.bounds, opt);
}

// ---------------------------------------------------------------------------
// Diffusivity calibration
// ---------------------------------------------------------------------------

struct CalibrationRow {
  double mu = 0.0;
  double cost = std::numeric_limits<double>::quiet_NaN();
  double mismatch = std::numeric_limits<double>::infinity();
  std::string error;
};

/// Uncontrolled cost for each mu, sorted by |cost - target| ascending.
inline std::vector<CalibrationRow> calibrate(const SimConfig& config, const std::vector<double>& mu_values,
                                             double target, unsigned threads = 1) {
  if (mu_values.empty()) throw ConfigError("calibration needs at least one mu value");
  std::vector<CalibrationRow> rows(mu_values.size());
  parallel_for(mu_values.size(), threads, [&](std::size_t i) {
    SimConfig c = config;
    c.strategies.clear();
    c.snapshot_times.clear();
    c.params.mu = mu_values[i];
    rows[i].mu = mu_values[i];
    try {
      rows[i].cost = Simulator(c).run().costs.at(0);
      rows[i].mismatch = std::abs(rows[i].cost - target);
    } catch (const std::exception& e) {
      rows[i].error = e.what();
    }
  });
  std::stable_sort(rows.begin(), rows.end(),
                   [](const CalibrationRow& a, const CalibrationRow& b) { return a.mismatch < b.mismatch; });
  return rows;
}

} // namespace pestctl
