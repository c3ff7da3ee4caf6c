#include "pestctl/nonlocal_velocity.hpp"
#include "pestctl/oracles.hpp"
#include "pestctl/transport.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace pestctl;

namespace {

double smooth_bump(double x, double y, double r) {
  const double s = (x * x + y * y) / (r * r);
  return s < 1.0 ? std::pow(1.0 - s, 3) : 0.0;
}

VectorField constant_velocity(const Grid& g, double vx, double vy) {
  return VectorField(ScalarField(g, vx), ScalarField(g, vy));
}

// Central-difference divergence, largest magnitude over interior cells.
double max_abs_divergence(const VectorField& v) {
  const Grid& g = v.grid();
  double m = 0.0;
  for (std::size_t j = 1; j + 1 < g.ny; ++j)
    for (std::size_t i = 1; i + 1 < g.nx; ++i) {
      const double d =
          (v.x(i + 1, j) - v.x(i - 1, j)) / (2 * g.dx()) + (v.y(i, j + 1) - v.y(i, j - 1)) / (2 * g.dy());
      m = std::max(m, std::abs(d));
    }
  return m;
}

// L1 error of the advected bump against the exact translate at t_end.
double translate_error(std::size_t n, double t_end) {
  const Grid g = Grid::square(n, -2.0, 2.0);
  const auto u0 = [](double x, double y) { return smooth_bump(x, y, 0.75); };
  ScalarField u = ScalarField::sample(g, u0);
  const VectorField v = constant_velocity(g, 1.0, 0.0);
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / max_advective_dt(v, 0.9)));
  const double dt = t_end / static_cast<double>(steps);
  for (std::size_t k = 0; k < steps; ++k) u = advect(u, v, dt);
  const ScalarField exact = ScalarField::sample(g, oracles::advect_exact(u0, 1.0, 0.0, t_end));
  return l1_norm(u - exact);
}

} // namespace

TEST(MaxAdvectiveDt, Formula) {
  const Grid g = Grid::square(256, -4.8, 4.8);
  VectorField v = constant_velocity(g, 0.0, 0.0);
  v.x[17] = -2.0;
  v.y[5] = 1.0;
  EXPECT_NEAR(max_advective_dt(v, 0.9), 0.016875, 1e-15);
  EXPECT_DOUBLE_EQ(max_advective_dt(v, 0.5), 0.5 * max_advective_dt(v, 1.0));
  EXPECT_TRUE(std::isinf(max_advective_dt(constant_velocity(g, 0.0, 0.0), 0.9)));
}

TEST(Advect, ZeroVelocityAveragesNeighbours) {
  const Grid g = Grid::square(16, 0.0, 1.0);
  ScalarField u(g);
  for (std::size_t k = 0; k < u.size(); ++k) u[k] = static_cast<double>((k * 7919) % 13);
  const ScalarField x_only = detail::sweep_x(u, ScalarField(g), 0.01);
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 1; i + 1 < g.nx; ++i) EXPECT_DOUBLE_EQ(x_only(i, j), 0.5 * (u(i - 1, j) + u(i + 1, j)));
}

TEST(Advect, ZeroVelocityConservesInteriorMass) {
  const Grid g = Grid::square(64, -2.0, 2.0);
  const ScalarField u = ScalarField::sample(g, [](double x, double y) { return smooth_bump(x, y, 1.0); });
  const ScalarField out = advect(u, constant_velocity(g, 0.0, 0.0), 0.01);
  EXPECT_NEAR(integral(out), integral(u), 1e-12 * integral(u));
}

TEST(Advect, ConservesMassForInteriorData) {
  const Grid g = Grid::square(128, -4.8, 4.8);
  const ScalarField u = ScalarField::sample(g, [](double x, double y) { return 3.0 * smooth_bump(x - 0.4, y, 2.0); });
  ScalarField w = indicator(make_ball(0.5, -0.3, 1.8), g);
  w *= 9.0;
  const VectorField v = nonlocal_velocity(w, Mollifier(0.8, g), 2.0);
  const double dt = max_advective_dt(v, 0.9);
  ScalarField cur = u;
  for (int s = 0; s < 20; ++s) {
    const ScalarField next = advect(cur, v, dt);
    EXPECT_NEAR(integral(next), integral(cur), 1e-12 * integral(cur));
    cur = next;
  }
}

TEST(Advect, PreservesPositivity) {
  const Grid g = Grid::square(64, -2.0, 2.0);
  ScalarField u = indicator(make_rect(-0.5, 0.7, -1.0, 0.2), g);
  const VectorField v(ScalarField::sample(g, [](double x, double y) { return std::sin(3 * y) - 0.4 * x; }),
                      ScalarField::sample(g, [](double x, double) { return std::cos(2 * x); }));
  const double dt = max_advective_dt(v, 1.0);
  for (int s = 0; s < 40; ++s) {
    u = advect(u, v, dt, s % 2 ? SweepOrder::y_then_x : SweepOrder::x_then_y);
    ASSERT_GE(min_value(u), 0.0);
  }
}

TEST(Advect, RejectsCflViolation) {
  const Grid g = Grid::square(32, 0.0, 1.0);
  const VectorField v = constant_velocity(g, 1.0, 0.0);
  const double limit = max_advective_dt(v, 1.0);
  EXPECT_NO_THROW(advect(ScalarField(g, 1.0), v, limit));
  EXPECT_THROW(advect(ScalarField(g, 1.0), v, 1.01 * limit), StepRejected);
}

TEST(Advect, TranslateConvergesAtFirstOrder) {
  std::vector<double> err;
  for (std::size_t n : {64u, 128u, 256u, 512u}) err.push_back(translate_error(n, 0.5));
  for (std::size_t k = 1; k < err.size(); ++k) {
    const double rate = std::log2(err[k - 1] / err[k]);
    EXPECT_GE(rate, 0.7) << "refinement " << k << " errors " << err[k - 1] << " -> " << err[k];
  }
}

TEST(Advect, LinfGrowthBoundedByDivergence) {
  const Grid g = Grid::square(128, -3.0, 3.0);
  const ScalarField u0 = ScalarField::sample(g, [](double x, double y) { return std::exp(-(x * x + y * y) / 0.5); });
  ScalarField w = indicator(make_ball(0.5, 0.0, 1.5), g);
  w *= 8.0;
  const std::vector<VectorField> fields{
      VectorField(ScalarField::sample(g, [](double x, double) { return -x; }),
                  ScalarField::sample(g, [](double, double y) { return -y; })),
      VectorField(ScalarField::sample(g, [](double x, double) { return 0.5 * x; }),
                  ScalarField::sample(g, [](double, double y) { return -1.5 * y; })),
      nonlocal_velocity(w, Mollifier(0.8, g), 2.0)};
  for (const auto& v : fields) {
    const double div = max_abs_divergence(v);
    const double dt = max_advective_dt(v, 0.9);
    ScalarField u = u0;
    for (int s = 0; s < 50; ++s) {
      const ScalarField next = advect(u, v, dt);
      // Allowance: twice the first-order growth factor.
      ASSERT_LE(linf_norm(next), linf_norm(u) * (1.0 + 2.0 * dt * div) * (1.0 + 1e-14)) << "step " << s;
      u = next;
    }
  }
}

TEST(Advect, SweepOrdersCommuteToSecondOrder) {
  const Grid g = Grid::square(256, -3.0, 3.0);
  const ScalarField u = ScalarField::sample(g, [](double x, double y) { return std::exp(-(x * x + y * y) / 0.5); });
  const VectorField v(ScalarField::sample(g, [](double, double y) { return std::sin(y) + 0.3; }),
                      ScalarField::sample(g, [](double x, double) { return std::cos(x); }));
  const double dt0 = max_advective_dt(v, 0.8);
  std::vector<double> diff;
  for (double f : {1.0, 0.5, 0.25}) {
    const double dt = f * dt0;
    diff.push_back(l1_norm(advect(u, v, dt, SweepOrder::x_then_y) - advect(u, v, dt, SweepOrder::y_then_x)));
  }
  for (std::size_t k = 1; k < diff.size(); ++k) EXPECT_GE(std::log2(diff[k - 1] / diff[k]), 1.7);
}
