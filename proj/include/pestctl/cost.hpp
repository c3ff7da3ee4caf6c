#pragma once

#include "pestctl/cost_spec.hpp"
#include "pestctl/error.hpp"
#include "pestctl/simulator.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace pestctl {

/// Trapezoid rule of recorded spatial integrals over [t_begin, t_end].
/// Throws if the recorded series does not cover the horizon.
inline double cost_eval(const std::vector<TimeSample>& series, const std::vector<double>& values, double t_begin,
                        double t_end) {
  if (series.size() != values.size()) throw std::invalid_argument("cost samples do not match the time series");
  if (series.empty() || series.front().t > t_begin || series.back().t < t_end)
    throw std::invalid_argument("recorded time series does not cover the cost horizon");
  return trapezoid_over(series, values, t_begin, t_end);
}

/// Cost number `channel` of the CostSpecs the simulation was configured with.
inline double cost_eval(const SimOutput& out, std::size_t channel = 0) {
  if (channel >= out.cost_specs.size()) throw std::out_of_range("no such cost channel");
  const CostSpec& spec = out.cost_specs[channel];
  return cost_eval(out.series, out.cost_samples[channel], spec.t_begin, spec.t_end);
}

/// t -> integral of w over R, one entry per recorded step.
inline std::vector<std::pair<double, double>> running_cost(const SimOutput& out) {
  std::vector<std::pair<double, double>> r;
  r.reserve(out.series.size());
  for (const auto& s : out.series) r.emplace_back(s.t, s.running_cost);
  return r;
}

} // namespace pestctl
