#pragma once

/// @file transport.hpp
/// Conservative Lax-Friedrichs advection of u_t + div(u v) = 0 with dimensional
/// splitting. Per sweep, with F = v u,
///
///   F_{i+1/2} = (F_i + F_{i+1}) / 2 - dx / (2 dt) (u_{i+1} - u_i)
///   u_i <- u_i - dt / dx (F_{i+1/2} - F_{i-1/2})
///
/// One layer of ghost cells holding 0 closes each sweep, so mass can leave through
/// the outer faces but never enter.

#include "pestctl/error.hpp"
#include "pestctl/fields.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace pestctl {

enum class SweepOrder { x_then_y, y_then_x };

/// Largest |component| of each axis.
inline std::pair<double, double> max_abs_components(const VectorField& v) noexcept {
  return {linf_norm(v.x), linf_norm(v.y)};
}

/// safety * min(dx / max|v_x|, dy / max|v_y|); +infinity when v vanishes.
inline double max_advective_dt(const VectorField& v, double safety) noexcept {
  const auto [mx, my] = max_abs_components(v);
  const Grid& g = v.grid();
  double dt = std::numeric_limits<double>::infinity();
  if (mx > 0.0) dt = std::min(dt, g.dx() / mx);
  if (my > 0.0) dt = std::min(dt, g.dy() / my);
  return safety * dt;
}

namespace detail {

// One Lax-Friedrichs sweep along a strided line of n cells.
inline void lxf_line(const double* u, const double* vel, double* out, std::size_t n, std::size_t stride,
                     double lambda) {
  auto at = [&](const double* p, std::size_t i) { return p[i * stride]; };
  std::vector<double> flux(n + 1);
  // flux[k] is the flux through the face between cell k-1 and cell k.
  for (std::size_t k = 0; k <= n; ++k) {
    const double ul = k > 0 ? at(u, k - 1) : 0.0;
    const double ur = k < n ? at(u, k) : 0.0;
    const double fl = k > 0 ? at(vel, k - 1) * ul : 0.0;
    const double fr = k < n ? at(vel, k) * ur : 0.0;
    flux[k] = 0.5 * (fl + fr) - 0.5 / lambda * (ur - ul);
  }
  for (std::size_t i = 0; i < n; ++i) out[i * stride] = at(u, i) - lambda * (flux[i + 1] - flux[i]);
}

inline ScalarField sweep_x(const ScalarField& u, const ScalarField& vx, double dt) {
  const Grid& g = u.grid();
  ScalarField out(g);
  const double lambda = dt / g.dx();
  for (std::size_t j = 0; j < g.ny; ++j) {
    const std::size_t row = g.index(0, j);
    lxf_line(&u.values()[row], &vx.values()[row], &out.values()[row], g.nx, 1, lambda);
  }
  return out;
}

inline ScalarField sweep_y(const ScalarField& u, const ScalarField& vy, double dt) {
  const Grid& g = u.grid();
  ScalarField out(g);
  const double lambda = dt / g.dy();
  for (std::size_t i = 0; i < g.nx; ++i)
    lxf_line(&u.values()[i], &vy.values()[i], &out.values()[i], g.ny, g.nx, lambda);
  return out;
}

} // namespace detail

/// One advection step with the velocity frozen over dt.
/// Throws StepRejected when either sweep violates its CFL condition.
inline ScalarField advect(const ScalarField& u, const VectorField& v, double dt,
                          SweepOrder order = SweepOrder::x_then_y) {
  const Grid& g = u.grid();
  const auto [mx, my] = max_abs_components(v);
  const double cx = dt * mx / g.dx(), cy = dt * my / g.dy();
  if (!(cx <= 1.0) || !(cy <= 1.0))
    throw StepRejected("advection CFL violated (x: " + std::to_string(cx) + ", y: " + std::to_string(cy) + ")");
  ScalarField out = order == SweepOrder::x_then_y ? detail::sweep_y(detail::sweep_x(u, v.x, dt), v.y, dt)
                                                  : detail::sweep_x(detail::sweep_y(u, v.y, dt), v.x, dt);
  if (!out.all_finite()) throw StepRejected("advection produced non-finite values");
  return out;
}

} // namespace pestctl
