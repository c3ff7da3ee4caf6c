#pragma once

/// @file diffusion.hpp
/// Explicit five-point heat step w_t = mu * lap(w) with reflecting (homogeneous
/// Neumann) walls. Under the stability bound every new value is a convex
/// combination of old neighbours, which gives positivity and the discrete maximum
/// principle for free.

#include "pestctl/error.hpp"
#include "pestctl/fields.hpp"

#include <string>

namespace pestctl {

/// safety / (2 mu (1/dx^2 + 1/dy^2)).
inline double max_diffusive_dt(double mu, const Grid& grid, double safety) noexcept {
  const double k = 1.0 / (grid.dx() * grid.dx()) + 1.0 / (grid.dy() * grid.dy());
  return safety / (2.0 * mu * k);
}

inline ScalarField diffuse(const ScalarField& w, double mu, double dt) {
  const Grid& g = w.grid();
  const double rx = mu * dt / (g.dx() * g.dx());
  const double ry = mu * dt / (g.dy() * g.dy());
  // Allow a few ulps past 1/2 so that safety == 1 lands exactly on the limit.
  if (!(rx + ry <= 0.5 * (1.0 + 1e-12)))
    throw StepRejected("diffusion stability bound violated (mu dt (1/dx^2+1/dy^2) = " + std::to_string(rx + ry) +
                       ")");
  const double c0 = 1.0 - 2.0 * rx - 2.0 * ry;
  ScalarField out(g);
  const std::size_t nx = g.nx, ny = g.ny;
  for (std::size_t j = 0; j < ny; ++j) {
    const std::size_t jd = j > 0 ? j - 1 : 0;
    const std::size_t ju = j + 1 < ny ? j + 1 : ny - 1;
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t il = i > 0 ? i - 1 : 0;
      const std::size_t ir = i + 1 < nx ? i + 1 : nx - 1;
      out(i, j) = c0 * w(i, j) + rx * (w(il, j) + w(ir, j)) + ry * (w(i, jd) + w(i, ju));
    }
  }
  if (!out.all_finite()) throw StepRejected("diffusion produced non-finite values");
  return out;
}

} // namespace pestctl
