#pragma once

#include "pestctl/fields.hpp"
#include "pestctl/reaction.hpp"

#include <functional>
#include <numbers>
#include <optional>
#include <string>

namespace pestctl {

/// Integrand of a cost functional, evaluated at (t, x, y, u, w).
using CostIntegrand = std::function<double(double t, double x, double y, double u, double w)>;

/// I = int_{t_begin}^{t_end} int_{region} Phi(t, x, u, w) dx dt.
/// No region means the whole numerical domain.
struct CostSpec {
  std::string name = "prey_in_R";
  CostIntegrand integrand = [](double, double, double, double, double w) { return w; };
  double t_begin = 4.0 * std::numbers::pi;
  double t_end = 12.0 * std::numbers::pi;
  std::optional<Region> region = harm_rectangle();
};

/// Prey mass inside R over [4pi, 12pi].
inline CostSpec prey_in_rectangle_cost() { return CostSpec{}; }

} // namespace pestctl
