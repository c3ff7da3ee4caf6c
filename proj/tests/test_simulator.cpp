#include "pestctl/cost.hpp"
#include "pestctl/simulator.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace pestctl;

namespace {

constexpr double pi = std::numbers::pi;

SimConfig small_config(std::size_t n = 64, double t_end = 2.0) {
  SimConfig c;
  c.resolution = n;
  c.t_end = t_end;
  c.costs.clear();
  return c;
}

ReleaseStrategy rect_release(double budget = 1000.0, int window = 0) {
  return {"q", harm_rectangle(), TimeWindow::seasonal(window), budget};
}

double state_distance(const SimState& a, const SimState& b) { return l1_norm(a.u - b.u) + l1_norm(a.w - b.w); }

} // namespace

TEST(ComputeDt, ReferenceExample) {
  SimConfig c;
  Simulator sim(c);
  VectorField v(sim.grid());
  v.x[100] = 2.0;
  v.y[300] = -2.0;
  EXPECT_NEAR(sim.compute_dt(v), 0.9 * 0.0375 * 0.0375 / 0.4, 1e-15);
  EXPECT_NEAR(sim.compute_dt(v), 3.164e-3, 1e-6);
}

TEST(ComputeDt, ReactionBoundDominatesForSlowDiffusion) {
  SimConfig c = small_config();
  c.params.mu = 1e-6;
  Simulator sim(c);
  EXPECT_DOUBLE_EQ(sim.compute_dt(VectorField(sim.grid())), 0.1 / 18.0);
}

TEST(Simulator, ZeroDataStaysZero) {
  SimConfig c = small_config();
  c.initial.w0_amplitude = 0.0;
  const SimOutput out = run(c);
  EXPECT_EQ(linf_norm(out.final_state.u), 0.0);
  EXPECT_EQ(linf_norm(out.final_state.w), 0.0);
  for (const auto& s : out.series) EXPECT_EQ(s.mass_u + s.mass_w, 0.0);
}

TEST(Simulator, NoPredatorsWithoutRelease) {
  const SimOutput out = run(small_config(64, 4.0));
  EXPECT_EQ(linf_norm(out.final_state.u), 0.0);
  EXPECT_GT(out.series.back().mass_w, 0.0);
}

TEST(Simulator, PredatorsDecayWithoutPrey) {
  SimConfig c = small_config(128, 1.0);
  c.initial = {1.0, make_ball(0, 0, 0.5), 0.0, natality_ball()};
  const SimOutput out = run(c);
  const double m0 = out.series.front().mass_u;
  double previous = m0;
  for (const auto& s : out.series) {
    EXPECT_EQ(s.mass_w, 0.0);
    EXPECT_LE(s.mass_u, previous);
    EXPECT_NEAR(s.mass_u, m0 * std::exp(-2.0 * s.t), 1e-3 * m0 * std::exp(-2.0 * s.t)) << s.t;
    previous = s.mass_u;
  }
}

TEST(Simulator, LandsOnEndAndCostBounds) {
  SimConfig c = small_config(64, 5 * pi);
  c.costs = {CostSpec{"a", CostSpec{}.integrand, 1.0, 4 * pi, harm_rectangle()}};
  Simulator sim(c);
  const auto landings = sim.landing_times();
  ASSERT_EQ(landings.size(), 3u);
  const SimOutput out = sim.run();
  EXPECT_EQ(out.series.back().t, 5 * pi);
  for (double L : landings) {
    bool hit = false;
    for (const auto& s : out.series) hit = hit || s.t == L;
    EXPECT_TRUE(hit) << L;
  }
  for (std::size_t k = 1; k < out.series.size(); ++k) ASSERT_GT(out.series[k].t, out.series[k - 1].t);
}

TEST(Simulator, DeterministicOutput) {
  SimConfig c = small_config(64, 5 * pi);
  c.costs = {prey_in_rectangle_cost()};
  c.costs[0].t_end = 5 * pi;
  c.strategies = {rect_release(1000.0, 1)};
  c.snapshot_times = {3.0, 4.5 * pi};
  const SimOutput a = run(c), b = run(c);
  ASSERT_EQ(a.series.size(), b.series.size());
  for (std::size_t k = 0; k < a.series.size(); ++k) ASSERT_EQ(a.series[k], b.series[k]);
  EXPECT_EQ(a.snapshots, b.snapshots);
  EXPECT_EQ(a.final_state.u, b.final_state.u);
  EXPECT_EQ(a.final_state.w, b.final_state.w);
  EXPECT_EQ(a.costs, b.costs);
}

TEST(Simulator, PrefixSharingIsBitIdentical) {
  SimConfig base = small_config(64, 6 * pi);
  base.costs = {prey_in_rectangle_cost()};
  base.costs[0].t_end = 6 * pi;
  auto prefix = Simulator(base).run_prefix(4 * pi);
  EXPECT_EQ(prefix.second.t, 4 * pi);
  for (int window : {0, 2}) {
    SimConfig c = base;
    c.strategies = {rect_release(1000.0, window)};
    const SimOutput direct = run(c);
    const SimOutput resumed = Simulator(c).resume(prefix.first, prefix.second);
    EXPECT_EQ(direct.costs, resumed.costs);
    EXPECT_EQ(direct.final_state.w, resumed.final_state.w);
    EXPECT_EQ(direct.final_state.u, resumed.final_state.u);
    EXPECT_EQ(direct.series.size(), resumed.series.size());
  }
}

TEST(Simulator, SnapshotsTakeNearestStep) {
  SimConfig c = small_config(64, 2.0);
  c.snapshot_times = {1.0, 0.0, 5.0};
  const SimOutput out = run(c);
  ASSERT_EQ(out.snapshots.size(), 3u);
  EXPECT_EQ(out.snapshots[0].t, 0.0);
  EXPECT_NEAR(out.snapshots[1].t, 1.0, out.stats.dt_max);
  // Past the horizon: the final state.
  EXPECT_EQ(out.snapshots[2].t, 2.0);
  EXPECT_EQ(out.snapshots[2].w, out.final_state.w);
}

TEST(Simulator, RepeatedRejectionBecomesNumericalFailure) {
  SimConfig c = small_config(32, 1.0);
  const Grid g = c.grid();
  InitialData d{ScalarField(g), indicator(natality_ball(), g)};
  d.u0[0] = std::numeric_limits<double>::quiet_NaN();
  c.initial_fields = d;
  EXPECT_THROW(run(c), NumericalFailure);
}

TEST(Simulator, RejectsInvalidConfiguration) {
  SimConfig c = small_config();
  c.params.gamma = -1.0;
  EXPECT_THROW(Simulator{c}, ConfigError);
  c = small_config();
  c.t_end = 0.0;
  EXPECT_THROW(Simulator{c}, ConfigError);
}

TEST(Simulator, ReferenceRunMonitorsPass) {
  SimConfig c = small_config(128, 12 * pi);
  c.costs = {prey_in_rectangle_cost()};
  const SimOutput out = run(c);
  for (const auto& v : out.monitors.verdicts) EXPECT_TRUE(v.pass) << v.name << " margin " << v.worst_margin;
  double peak = 0.0;
  for (const auto& s : out.series) {
    peak = std::max(peak, s.linf_w);
    ASSERT_GE(std::min(s.min_u, s.min_w), 0.0);
  }
  EXPECT_LE(peak, 10.5);
}

// Without predators the prey source is nonnegative, so total prey mass never
// decreases; it saturates, with a smaller gain over each successive period.
TEST(Simulator, PreyMassSaturatesWithoutPredators) {
  SimConfig c = small_config(128, 6 * pi);
  c.costs = {prey_in_rectangle_cost()};
  c.costs[0].t_begin = 2 * pi;
  c.costs[0].t_end = 4 * pi;
  const SimOutput out = run(c);
  double at2 = -1.0, at4 = -1.0;
  for (std::size_t k = 0; k < out.series.size(); ++k) {
    const auto& s = out.series[k];
    if (k > 0) ASSERT_GE(s.mass_w, out.series[k - 1].mass_w * (1.0 - 1e-13)) << s.t;
    if (s.t == 2 * pi) at2 = s.mass_w_physical;
    if (s.t == 4 * pi) at4 = s.mass_w_physical;
  }
  ASSERT_GT(at2, 0.0);
  ASSERT_GT(at4, 0.0);
  const double at6 = out.series.back().mass_w_physical;
  EXPECT_LT(at6 - at4, at4 - at2) << at2 << ' ' << at4 << ' ' << at6;
  EXPECT_LE(out.series.back().mass_w_physical, ModelParams{}.C * 64.0);
}

TEST(MonitorApriori, EnvelopeScalesWithInitialPrey) {
  const ModelParams p;
  std::vector<TimeSample> a, b;
  for (int k = 0; k < 5; ++k) {
    TimeSample s;
    s.t = 0.5 * k;
    s.mass_w = 3.0 * std::exp(2.0 * s.t);
    s.linf_w = 2.0;
    a.push_back(s);
    s.mass_w *= 2.0;
    b.push_back(s);
  }
  const auto ra = monitor_apriori(a, p, ControlSchedule{}), rb = monitor_apriori(b, p, ControlSchedule{});
  EXPECT_NEAR(ra.find("w_L1_envelope")->worst_margin, rb.find("w_L1_envelope")->worst_margin, 1e-12);
  EXPECT_TRUE(ra.all_pass());

  a.back().mass_w = 3.0 * std::exp(p.K_g() * 2.0) * 1.01;
  EXPECT_FALSE(monitor_apriori(a, p, ControlSchedule{}).find("w_L1_envelope")->pass);
  a.back().min_w = -1e-3;
  EXPECT_FALSE(monitor_apriori(a, p, ControlSchedule{}).find("positivity")->pass);
}

// Three-level ratio tests: the response per unit perturbation should not
// change by more than a factor 2 as the perturbation shrinks.
TEST(Stability, LipschitzInControl) {
  SimConfig c = small_config(64, 6 * pi);
  c.strategies = {rect_release(1000.0, 0)};
  const SimState base = run(c).final_state;
  const Grid g = c.grid();
  std::vector<double> ratios;
  for (double eps : {100.0, 50.0, 25.0}) {
    SimConfig p = c;
    p.strategies[0].budget += eps;
    const double dq = total_release(p.strategies[0], g) - total_release(c.strategies[0], g);
    ratios.push_back(state_distance(run(p).final_state, base) / dq);
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  EXPECT_GT(*lo, 0.0);
  EXPECT_LE(*hi / *lo, 2.0) << ratios[0] << ' ' << ratios[1] << ' ' << ratios[2];
}

TEST(Stability, LipschitzInInitialPrey) {
  SimConfig c = small_config(64, 6 * pi);
  c.strategies = {rect_release(1000.0, 0)};
  const Grid g = c.grid();
  const InitialData d0 = c.initial.build(g);
  c.initial_fields = d0;
  const SimState base = run(c).final_state;
  const ScalarField bump = indicator(make_ball(1.0, 0.5, 0.75), g);
  std::vector<double> ratios;
  for (double eps : {0.4, 0.2, 0.1}) {
    SimConfig p = c;
    InitialData d = d0;
    d.w0 += eps * bump;
    p.initial_fields = d;
    ratios.push_back(state_distance(run(p).final_state, base) / l1_norm(eps * bump));
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  EXPECT_GT(*lo, 0.0);
  EXPECT_LE(*hi / *lo, 2.0) << ratios[0] << ' ' << ratios[1] << ' ' << ratios[2];
}
