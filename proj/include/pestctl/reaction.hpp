#pragma once

/// @file reaction.hpp
/// Model coefficients and the pointwise source substep
///
///   u' = f(t, x, w) u + q(t, x)
///   w' = g(t, x, u, w) w
///
/// integrated with the explicit midpoint rule. The default source model is the
/// seasonal Lotka-Volterra instance
///
///   f = (alpha w - beta) 1_P(x)
///   g = gamma (1 - sin t) 1_B(x) 1_P(x) (1 - w / C) - delta u
///
/// where P is the physical domain. The predation term delta u is deliberately not
/// masked by P.

#include "pestctl/error.hpp"
#include "pestctl/fields.hpp"

#include <algorithm>
#include <cmath>
#include <concepts>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pestctl {

struct ModelParams {
  double alpha = 0.25; ///< predator natality per unit prey density
  double beta = 2.0;   ///< predator mortality
  double gamma = 9.0;  ///< prey natality scale
  double delta = 0.5;  ///< prey mortality per unit predator density
  double C = 10.0;     ///< prey carrying capacity
  double kappa = 2.0;  ///< maximal predator speed
  double ell = 0.8;    ///< mollifier radius (predator horizon)
  double mu = 0.1;     ///< prey diffusivity

  /// Lipschitz / growth constant of f: max(alpha, beta).
  double K_f() const noexcept { return std::max(alpha, beta); }
  /// Upper bound of g on nonnegative states: gamma * max(1 - sin t) = 2 gamma.
  double K_g() const noexcept { return 2.0 * gamma; }

  std::vector<std::string> validate() const {
    std::vector<std::string> errs;
    auto need_positive = [&](const char* name, double v) {
      if (!(v > 0.0) || !std::isfinite(v)) errs.push_back(std::string(name) + " must be a finite positive number");
    };
    need_positive("alpha", alpha);
    need_positive("beta", beta);
    need_positive("gamma", gamma);
    need_positive("delta", delta);
    need_positive("C", C);
    need_positive("kappa", kappa);
    need_positive("ell", ell);
    need_positive("mu", mu);
    return errs;
  }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Physical domain [-4,4]^2 and natality ball B(0,2).
inline Region physical_domain() { return Rect{-4.0, 4.0, -4.0, 4.0}; }
inline Region natality_ball() { return Ball{0.0, 0.0, 2.0}; }
inline Region harm_rectangle() { return Rect{1.0, 3.0, -3.0, 3.0}; }

/// Cell masks the source terms need.
struct CoefficientMask {
  ScalarField physical; ///< 1 on cells centred in the physical domain
  ScalarField birth;    ///< 1_B * physical

  CoefficientMask() = default;
  CoefficientMask(const Grid& grid, const Region& domain, const Region& ball)
      : physical(indicator(domain, grid)), birth(indicator(ball, grid)) {
    for (std::size_t k = 0; k < birth.size(); ++k) birth[k] *= physical[k];
  }
  explicit CoefficientMask(const Grid& grid) : CoefficientMask(grid, physical_domain(), natality_ball()) {}
};

inline double predator_rate(double w, double mask, const ModelParams& p) noexcept {
  return (p.alpha * w - p.beta) * mask;
}

inline double prey_rate(double t, double u, double w, double mask, double in_ball, const ModelParams& p) noexcept {
  return p.gamma * (1.0 - std::sin(t)) * in_ball * mask * (1.0 - w / p.C) - p.delta * u;
}

/// A source model exposes `at(t)`, returning an evaluator with per-cell
/// `f(k, w)` and `g(k, u, w)`.
template <typename S>
concept SourceModel = requires(const S& s, double t, std::size_t k, double v) {
  { s.at(t).f(k, v) } -> std::convertible_to<double>;
  { s.at(t).g(k, v, v) } -> std::convertible_to<double>;
};

/// The seasonal Lotka-Volterra instance.
class SeasonalLotkaVolterra {
public:
  SeasonalLotkaVolterra(ModelParams p, CoefficientMask mask) : p_(p), mask_(std::move(mask)) {}

  struct Evaluator {
    const ModelParams* p;
    const double* physical;
    const double* birth;
    double seasonal; // gamma * (1 - sin t)

    double f(std::size_t k, double w) const noexcept { return (p->alpha * w - p->beta) * physical[k]; }
    double g(std::size_t k, double u, double w) const noexcept {
      return seasonal * birth[k] * (1.0 - w / p->C) - p->delta * u;
    }
  };

  Evaluator at(double t) const noexcept {
    return {&p_, mask_.physical.values().data(), mask_.birth.values().data(), p_.gamma * (1.0 - std::sin(t))};
  }

  const ModelParams& params() const noexcept { return p_; }
  const CoefficientMask& mask() const noexcept { return mask_; }

private:
  ModelParams p_;
  CoefficientMask mask_;
};

namespace detail {

/// Sets tiny negative roundoff to zero; anything more negative rejects the step.
inline void clamp_roundoff(ScalarField& out, double reference_max, const char* name) {
  const double eps = 1e-12 * std::max(reference_max, linf_norm(out));
  for (auto& v : out.values()) {
    if (!std::isfinite(v)) throw StepRejected(std::string("reaction produced non-finite ") + name);
    if (v < 0.0) {
      if (v < -eps) throw StepRejected(std::string("reaction drove ") + name + " negative");
      v = 0.0;
    }
  }
}

} // namespace detail

/// Explicit midpoint step of the source ODEs. q_now / q_mid are the control sampled
/// at t and t + dt/2; an empty span means q = 0.
template <SourceModel Sources>
std::pair<ScalarField, ScalarField> react_rk2(const ScalarField& u, const ScalarField& w,
                                              std::span<const double> q_now, std::span<const double> q_mid,
                                              double t, double dt, const Sources& sources) {
  const std::size_t n = u.size();
  const auto e0 = sources.at(t);
  const auto e1 = sources.at(t + 0.5 * dt);
  ScalarField un(u.grid()), wn(w.grid());
  for (std::size_t k = 0; k < n; ++k) {
    const double u0 = u[k], w0 = w[k];
    const double k1u = e0.f(k, w0) * u0 + (q_now.empty() ? 0.0 : q_now[k]);
    const double k1w = e0.g(k, u0, w0) * w0;
    const double um = u0 + 0.5 * dt * k1u;
    const double wm = w0 + 0.5 * dt * k1w;
    const double k2u = e1.f(k, wm) * um + (q_mid.empty() ? 0.0 : q_mid[k]);
    const double k2w = e1.g(k, um, wm) * wm;
    un[k] = u0 + dt * k2u;
    wn[k] = w0 + dt * k2w;
  }
  detail::clamp_roundoff(un, linf_norm(u), "u");
  detail::clamp_roundoff(wn, linf_norm(w), "w");
  return {std::move(un), std::move(wn)};
}

} // namespace pestctl
