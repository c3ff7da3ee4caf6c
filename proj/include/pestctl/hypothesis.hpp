#pragma once

/// @file hypothesis.hpp
/// Sampled audits of the structural bounds the well-posedness theory asks of the
/// velocity, the two source rates and the control. A violation is a definite bug;
/// a clean audit is evidence only at the points sampled.
///
/// Constants:
///   K_v = kappa * s * max|grad eta|, with s the stencil normalisation and
///         max|grad eta| = 24/(pi ell^3) * (16/25) / sqrt5 (attained at |x| = ell/sqrt5)
///   K_f = max(alpha, beta)
///   K_g = 2 gamma

#include "pestctl/control.hpp"
#include "pestctl/fields.hpp"
#include "pestctl/nonlocal_velocity.hpp"
#include "pestctl/reaction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace pestctl {

struct HypothesisVerdict {
  std::string name;
  std::size_t samples = 0;
  std::size_t violations = 0;
  /// Largest lhs / bound seen; <= 1 means every sample satisfied the bound.
  double worst_ratio = 0.0;
  double constant = 0.0;

  bool pass() const noexcept { return violations == 0; }
};

struct HypothesisReport {
  double K_v = 0.0;
  double K_f = 0.0;
  double K_g = 0.0;
  std::vector<HypothesisVerdict> verdicts;

  bool all_pass() const noexcept {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.pass(); });
  }
  const HypothesisVerdict* find(const std::string& name) const noexcept {
    for (const auto& v : verdicts)
      if (v.name == name) return &v;
    return nullptr;
  }
};

/// max over x of |grad eta(x)| for the closed-form mollifier.
inline double mollifier_grad_sup(double ell) {
  return 24.0 / (std::numbers::pi * ell * ell * ell) * (16.0 / 25.0) / std::sqrt(5.0);
}

/// Velocity constant for the discrete operator on `m`'s stencil.
inline double velocity_constant(const Mollifier& m, double kappa) {
  return kappa * m.normalisation() * mollifier_grad_sup(m.horizon());
}

namespace detail {

// lhs <= bound with a relative roundoff allowance.
inline void tally(HypothesisVerdict& v, double lhs, double bound) {
  ++v.samples;
  constexpr double rel = 1e-12;
  if (lhs > bound * (1.0 + rel) + 1e-300) ++v.violations;
  if (bound > 0.0)
    v.worst_ratio = std::max(v.worst_ratio, lhs / bound);
  else if (lhs > 0.0)
    v.worst_ratio = std::numeric_limits<double>::infinity();
}

inline double speed_sup(const VectorField& v) {
  double s = 0.0;
  for (std::size_t k = 0; k < v.x.size(); ++k) s = std::max(s, std::hypot(v.x[k], v.y[k]));
  return s;
}

inline double speed_diff_sup(const VectorField& a, const VectorField& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.x.size(); ++k) s = std::max(s, std::hypot(a.x[k] - b.x[k], a.y[k] - b.y[k]));
  return s;
}

// Nonnegative field: a few random bumps on a random floor, so samples range from
// smooth to rough.
inline ScalarField random_field(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double floor_amp = 2.0 * unit(rng);
  const int bumps = 1 + static_cast<int>(4.0 * unit(rng));
  struct Bump {
    double x, y, r, a;
  };
  std::vector<Bump> bs;
  for (int i = 0; i < bumps; ++i)
    bs.push_back({g.x_min + (g.x_max - g.x_min) * unit(rng), g.y_min + (g.y_max - g.y_min) * unit(rng),
                  0.2 + 1.5 * unit(rng), 10.0 * unit(rng)});
  ScalarField f(g);
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double x = g.x_center(i), y = g.y_center(j);
      double v = floor_amp * unit(rng);
      for (const auto& b : bs) {
        const double r2 = ((x - b.x) * (x - b.x) + (y - b.y) * (y - b.y)) / (b.r * b.r);
        if (r2 < 1.0) v += b.a * (1.0 - r2);
      }
      f(i, j) = v;
    }
  return f;
}

} // namespace detail

/// |v(w)|_inf <= K_v |w|_1 and |v(w1) - v(w2)|_inf <= K_v |w1 - w2|_1 on `pairs`
/// random nonnegative field pairs.
inline std::vector<HypothesisVerdict> check_v(const ModelParams& p, const Grid& grid, std::size_t pairs,
                                              std::uint64_t seed = 1) {
  const Mollifier m(p.ell, grid);
  const double Kv = velocity_constant(m, p.kappa);
  HypothesisVerdict bound{"v_bound", 0, 0, 0.0, Kv}, lip{"v_lipschitz", 0, 0, 0.0, Kv};
  std::mt19937_64 rng(seed);
  for (std::size_t n = 0; n < pairs; ++n) {
    const ScalarField w1 = detail::random_field(grid, rng);
    const ScalarField w2 = detail::random_field(grid, rng);
    const VectorField v1 = nonlocal_velocity(w1, m, p.kappa);
    const VectorField v2 = nonlocal_velocity(w2, m, p.kappa);
    detail::tally(bound, detail::speed_sup(v1), Kv * l1_norm(w1));
    detail::tally(bound, detail::speed_sup(v2), Kv * l1_norm(w2));
    ScalarField dw = w1;
    dw -= w2;
    detail::tally(lip, detail::speed_diff_sup(v1, v2), Kv * l1_norm(dw));
  }
  return {bound, lip};
}

/// Pointwise bounds of the source rates at `samples` random (t, u, w) points,
/// inside and outside the natality ball, with u, w in [0, 2C].
inline std::vector<HypothesisVerdict> check_f_g(const ModelParams& p, std::size_t samples, std::uint64_t seed = 2) {
  const double Kf = p.K_f(), Kg = p.K_g();
  HypothesisVerdict f_growth{"f_growth", 0, 0, 0.0, Kf}, f_lip{"f_lipschitz", 0, 0, 0.0, Kf},
      g_bound{"g_bound", 0, 0, 0.0, Kg}, g_lip{"g_lipschitz", 0, 0, 0.0, Kg};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> time(0.0, 12.0 * std::numbers::pi), dens(0.0, 2.0 * p.C), coin(0.0, 1.0);
  for (std::size_t n = 0; n < samples; ++n) {
    const double t = time(rng);
    const double u1 = dens(rng), u2 = dens(rng), w1 = dens(rng), w2 = dens(rng);
    const double mask = coin(rng) < 0.9 ? 1.0 : 0.0;
    const double ball = coin(rng) < 0.5 ? 1.0 : 0.0;
    const double f1 = predator_rate(w1, mask, p), f2 = predator_rate(w2, mask, p);
    detail::tally(f_growth, f1, Kf * (1.0 + w1));
    detail::tally(f_lip, std::abs(f1 - f2), Kf * std::abs(w1 - w2));
    const double g1 = prey_rate(t, u1, w1, mask, ball, p), g2 = prey_rate(t, u2, w2, mask, ball, p);
    // The bound is one-sided; only positive values can violate it.
    detail::tally(g_bound, std::max(g1, 0.0), Kg);
    detail::tally(g_lip, std::abs(g1 - g2), Kg * (std::abs(u1 - u2) + std::abs(w1 - w2)));
  }
  return {f_growth, f_lip, g_bound, g_lip};
}

/// q >= 0 and q bounded by the summed amplitudes at `samples` times on [t0, t1].
inline HypothesisVerdict check_q(const std::vector<ReleaseStrategy>& strategies, const Grid& grid,
                                 std::size_t samples, double t0 = 0.0, double t1 = 12.0 * std::numbers::pi) {
  const ControlSchedule schedule(strategies, grid);
  const double sup = schedule.sup();
  HypothesisVerdict v{"q_nonnegative_bounded", 0, 0, 0.0, sup};
  ScalarField q(grid);
  for (std::size_t n = 0; n < samples; ++n) {
    const double t = t0 + (t1 - t0) * (static_cast<double>(n) + 0.5) / static_cast<double>(samples);
    if (!schedule.evaluate(t, q)) q = ScalarField(grid);
    ++v.samples;
    const double lo = min_value(q), hi = linf_norm(q);
    if (lo < 0.0 || !std::isfinite(hi) || hi > sup * (1.0 + 1e-12)) ++v.violations;
    if (sup > 0.0) v.worst_ratio = std::max(v.worst_ratio, hi / sup);
  }
  return v;
}

struct AuditOptions {
  std::size_t velocity_pairs = 100;
  std::size_t velocity_resolution = 64;
  std::size_t rate_samples = 10000;
  std::size_t control_samples = 2000;
  std::uint64_t seed = 1;
};

/// Runs every audit for one parameter set and strategy list.
inline HypothesisReport audit(const ModelParams& p, const Rect& domain, const std::vector<ReleaseStrategy>& strategies,
                              const AuditOptions& opt = {}) {
  HypothesisReport r;
  const Grid g(opt.velocity_resolution, opt.velocity_resolution, domain.x_lo, domain.x_hi, domain.y_lo, domain.y_hi);
  r.K_f = p.K_f();
  r.K_g = p.K_g();
  r.K_v = velocity_constant(Mollifier(p.ell, g), p.kappa);
  for (auto& v : check_v(p, g, opt.velocity_pairs, opt.seed)) r.verdicts.push_back(v);
  for (auto& v : check_f_g(p, opt.rate_samples, opt.seed + 1)) r.verdicts.push_back(v);
  r.verdicts.push_back(check_q(strategies, g, opt.control_samples));
  return r;
}

inline std::string format_report(const HypothesisReport& r) {
  std::ostringstream os;
  os.precision(10);
  os << "constants\n";
  os << "  K_v = " << r.K_v << "   (kappa * stencil normalisation * max|grad eta|)\n";
  os << "  K_f = " << r.K_f << "   (max(alpha, beta))\n";
  os << "  K_g = " << r.K_g << "   (2 gamma)\n";
  os << "checks\n";
  for (const auto& v : r.verdicts) {
    os << "  " << (v.pass() ? "PASS " : "FAIL ") << v.name << "  samples=" << v.samples
       << " violations=" << v.violations << " worst_ratio=" << v.worst_ratio << '\n';
  }
  os << "note: sampled necessary conditions; a pass is evidence, not proof\n";
  os << (r.all_pass() ? "result: PASS\n" : "result: FAIL\n");
  return os.str();
}

} // namespace pestctl
