#pragma once

/// @file oracles.hpp
/// Closed-form and high-accuracy reference solutions for constant-coefficient
/// special cases. Nothing here calls into the production stepping code.

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace pestctl::oracles {

/// Isotropic Gaussian  mass / (2 pi var) exp(-|x - c|^2 / (2 var)).
struct GaussianState {
  double cx = 0.0;
  double cy = 0.0;
  double variance = 1.0;
  double mass = 1.0;

  double density(double x, double y) const noexcept {
    const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
    return mass / (2.0 * std::numbers::pi * variance) * std::exp(-r2 / (2.0 * variance));
  }
};

/// Free-space heat flow for time t: the variance grows by 2 mu t, mass is unchanged.
inline GaussianState heat_exact(GaussianState g, double mu, double t) {
  if (t < 0.0) throw std::invalid_argument("heat_exact needs t >= 0");
  g.variance += 2.0 * mu * t;
  return g;
}

/// w_t = mu lap(w) + a w with constant a: heat flow times e^{a t}.
inline GaussianState duhamel_exact(GaussianState g, double a, double mu, double t) {
  g = heat_exact(g, mu, t);
  g.mass *= std::exp(a * t);
  return g;
}

using PlaneFunction = std::function<double(double, double)>;

/// u_t + div(u v) = 0 with constant v: u(t, x) = u0(x - v t).
inline PlaneFunction advect_exact(PlaneFunction u0, double vx, double vy, double t) {
  return [u0 = std::move(u0), sx = vx * t, sy = vy * t](double x, double y) { return u0(x - sx, y - sy); };
}

struct ODEState {
  double t = 0.0;
  double u = 0.0;
  double w = 0.0;
};

/// Right-hand side (t, u, w) -> (u', w').
using PairRhs = std::function<std::pair<double, double>(double, double, double)>;

namespace detail {

inline ODEState rk4(const PairRhs& f, ODEState s, double t_end, std::size_t steps) {
  const double h = (t_end - s.t) / static_cast<double>(steps);
  const double t0 = s.t;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = t0 + static_cast<double>(k) * h;
    const auto [a1, b1] = f(t, s.u, s.w);
    const auto [a2, b2] = f(t + 0.5 * h, s.u + 0.5 * h * a1, s.w + 0.5 * h * b1);
    const auto [a3, b3] = f(t + 0.5 * h, s.u + 0.5 * h * a2, s.w + 0.5 * h * b2);
    const auto [a4, b4] = f(t + h, s.u + h * a3, s.w + h * b3);
    s.u += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    s.w += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
  }
  s.t = t_end;
  return s;
}

} // namespace detail

/// Classical RK4 on a uniform step, halving the step until two successive
/// solutions agree to `tol` (max-norm, relative to 1 + |state|). The finer of the
/// last pair is returned, Richardson-corrected.
inline ODEState ode_reference(const PairRhs& f, ODEState s, double t_end, double tol, std::size_t max_halvings = 20) {
  if (!(tol > 0.0)) throw std::invalid_argument("ode_reference needs tol > 0");
  std::size_t steps = 16;
  ODEState coarse = detail::rk4(f, s, t_end, steps);
  for (std::size_t h = 0; h < max_halvings; ++h) {
    steps *= 2;
    ODEState fine = detail::rk4(f, s, t_end, steps);
    const double du = fine.u - coarse.u, dw = fine.w - coarse.w;
    const double err = std::max(std::abs(du) / (1.0 + std::abs(fine.u)), std::abs(dw) / (1.0 + std::abs(fine.w)));
    if (err < tol) {
      fine.u += du / 15.0;
      fine.w += dw / 15.0;
      return fine;
    }
    coarse = fine;
  }
  throw std::runtime_error("ode_reference did not reach the requested tolerance");
}

} // namespace pestctl::oracles
