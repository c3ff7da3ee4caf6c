#include "pestctl/nonlocal_velocity.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace pestctl;

namespace {

constexpr double ell = 0.8;

Grid padded(std::size_t n) { return Grid::square(n, -4.8, 4.8); }

double bump(double x, double y, double cx, double cy, double r) {
  const double s = ((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (r * r);
  return s < 1.0 ? (1.0 - s) * (1.0 - s) : 0.0;
}

// True when cell (i, j) is at least `margin` cells from every edge.
bool interior(const Grid& g, std::size_t i, std::size_t j, std::size_t margin) {
  return i >= margin && j >= margin && i + margin < g.nx && j + margin < g.ny;
}

} // namespace

TEST(Mollifier, PeakValue) {
  // 4 / (pi ell^2) at the origin.
  EXPECT_NEAR(mollifier_eval({0, 0}, ell), 1.98944, 1e-5);
  EXPECT_DOUBLE_EQ(mollifier_eval({0, 0}, ell), 4.0 / (std::numbers::pi * 0.64));
}

TEST(Mollifier, VanishesOnAndOutsideSupport) {
  EXPECT_EQ(mollifier_eval({ell, 0}, ell), 0.0);
  EXPECT_EQ(mollifier_eval({0.6, 0.6}, ell), 0.0);
  EXPECT_GT(mollifier_eval({0.79, 0}, ell), 0.0);
}

TEST(Mollifier, RiemannSumIsOneAtFineSpacing) {
  const Mollifier m(ell, ell / 20.0, ell / 20.0);
  EXPECT_NEAR(m.raw_mass(), 1.0, 1e-3);
  double s = 0.0;
  for (double v : m.eta_stencil()) s += v;
  EXPECT_NEAR(s, 1.0, 1e-14);
}

TEST(Mollifier, StencilMatchesClosedForm) {
  const double h = ell / 20.0;
  const Mollifier m(ell, h, h);
  double worst = 0.0;
  for (int b = -m.radius_y(); b <= m.radius_y(); ++b)
    for (int a = -m.radius_x(); a <= m.radius_x(); ++a) {
      const double expected = mollifier_eval({a * h, b * h}, ell);
      const double got = m.eta(a, b) / (h * h * m.normalisation());
      worst = std::max(worst, std::abs(got - expected));
    }
  EXPECT_LE(worst, 1e-12);
}

TEST(Mollifier, RadiusAtProductionResolution) {
  const Mollifier m(ell, padded(256));
  EXPECT_EQ(m.radius_x(), 22);
  EXPECT_EQ(m.width(), 45u);
}

TEST(Mollifier, CoarseGridIsAConfigError) {
  EXPECT_THROW(Mollifier(ell, 1.0, 0.1), ConfigError);
  EXPECT_THROW(Mollifier(0.0, 0.1, 0.1), ConfigError);
}

TEST(MollifierGradient, ZeroAtOriginAndOutside) {
  const Vec2 g0 = mollifier_grad_eval({0, 0}, ell);
  EXPECT_EQ(g0.x, 0.0);
  EXPECT_EQ(g0.y, 0.0);
  const Vec2 g1 = mollifier_grad_eval({0.9, 0}, ell);
  EXPECT_EQ(g1.x, 0.0);
}

TEST(MollifierGradient, OddFunction) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(-ell, ell);
  for (int k = 0; k < 200; ++k) {
    const Vec2 p{d(rng), d(rng)};
    const Vec2 a = mollifier_grad_eval(p, ell), b = mollifier_grad_eval({-p.x, -p.y}, ell);
    EXPECT_EQ(a.x, -b.x);
    EXPECT_EQ(a.y, -b.y);
  }
}

TEST(MollifierGradient, MatchesCentralDifference) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(-0.55, 0.55);
  const double h = 1e-4;
  for (int k = 0; k < 200; ++k) {
    const Vec2 p{d(rng), d(rng)};
    const Vec2 g = mollifier_grad_eval(p, ell);
    const double fx = (mollifier_eval({p.x + h, p.y}, ell) - mollifier_eval({p.x - h, p.y}, ell)) / (2 * h);
    const double fy = (mollifier_eval({p.x, p.y + h}, ell) - mollifier_eval({p.x, p.y - h}, ell)) / (2 * h);
    EXPECT_NEAR(g.x, fx, 1e-6);
    EXPECT_NEAR(g.y, fy, 1e-6);
  }
}

TEST(SmoothedGradient, ConstantFieldHasZeroGradientInside) {
  const Grid g = padded(64);
  const Mollifier m(ell, g);
  const VectorField grad = smoothed_gradient(ScalarField(g, 3.0), m);
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i)
      if (interior(g, i, j, static_cast<std::size_t>(m.radius_x()) + 1)) {
        EXPECT_NEAR(grad.x(i, j), 0.0, 1e-12);
        EXPECT_NEAR(grad.y(i, j), 0.0, 1e-12);
      }
  const VectorField zero = smoothed_gradient(ScalarField(g), m);
  EXPECT_EQ(linf_norm(zero.x), 0.0);
}

TEST(SmoothedGradient, LinearRampHasUnitSlope) {
  const Grid g = padded(128);
  const Mollifier m(ell, g);
  const VectorField grad = smoothed_gradient(ScalarField::sample(g, [](double x, double) { return x; }), m);
  const std::size_t margin = static_cast<std::size_t>(m.radius_x()) + 1;
  for (std::size_t j = margin; j + margin < g.ny; ++j)
    for (std::size_t i = margin; i + margin < g.nx; ++i) {
      ASSERT_NEAR(grad.x(i, j), 1.0, 1e-2);
      ASSERT_NEAR(grad.y(i, j), 0.0, 1e-2);
    }
}

TEST(SmoothedGradient, PointsTowardAnOffCentreBump) {
  const Grid g = padded(64);
  const Mollifier m(ell, g);
  const double cx = 1.1, cy = -0.7, r = 1.5;
  const ScalarField w = ScalarField::sample(g, [&](double x, double y) { return bump(x, y, cx, cy, r); });
  const VectorField grad = smoothed_gradient(w, m);
  std::size_t support = 0, toward = 0;
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double dx = cx - g.x_center(i), dy = cy - g.y_center(j);
      if (w(i, j) <= 0.0 || std::hypot(dx, dy) < 1e-9) continue;
      ++support;
      if (grad.x(i, j) * dx + grad.y(i, j) * dy > 0.0) ++toward;
    }
  ASSERT_GT(support, 50u);
  EXPECT_GE(static_cast<double>(toward), 0.95 * static_cast<double>(support));
}

TEST(SmoothedGradient, Linear) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  const Grid g = padded(32);
  const Mollifier m(ell, g);
  const ScalarField w1 = ScalarField::sample(g, [&](double, double) { return d(rng); });
  const ScalarField w2 = ScalarField::sample(g, [&](double, double) { return d(rng); });
  const double a = 1.7, b = -0.4;
  const VectorField lhs = smoothed_gradient(a * w1 + b * w2, m);
  const VectorField g1 = smoothed_gradient(w1, m), g2 = smoothed_gradient(w2, m);
  const double scale = std::max(linf_norm(g1.x), linf_norm(g2.x));
  for (std::size_t k = 0; k < lhs.x.size(); ++k) {
    EXPECT_NEAR(lhs.x[k], a * g1.x[k] + b * g2.x[k], 1e-12 * scale);
    EXPECT_NEAR(lhs.y[k], a * g1.y[k] + b * g2.y[k], 1e-12 * scale);
  }
}

TEST(SmoothedGradient, TranslationEquivariantInside) {
  const Grid g = padded(64);
  const Mollifier m(ell, g);
  const ScalarField w = ScalarField::sample(g, [](double x, double y) { return bump(x, y, 0.0, 0.0, 1.2); });
  // Shift by copying, so the samples are bit-identical.
  ScalarField exact_shift(g);
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 1; i < g.nx; ++i) exact_shift(i, j) = w(i - 1, j);
  const VectorField a = smoothed_gradient(w, m), b = smoothed_gradient(exact_shift, m);
  const std::size_t margin = static_cast<std::size_t>(m.radius_x()) + 2;
  for (std::size_t j = margin; j + margin < g.ny; ++j)
    for (std::size_t i = margin; i + margin < g.nx; ++i) {
      EXPECT_EQ(b.x(i, j), a.x(i - 1, j));
      EXPECT_EQ(b.y(i, j), a.y(i - 1, j));
    }
}

TEST(SmoothedGradient, EvenFieldGivesOddXComponent) {
  const Grid g = padded(64);
  const Mollifier m(ell, g);
  ScalarField w = ScalarField::sample(g, [](double x, double y) {
    return bump(x, y, 1.3, 0.2, 1.0) + bump(x, y, -1.3, 0.2, 1.0) + bump(x, y, 0.0, -0.5, 2.0);
  });
  // Cell centres are not exactly symmetric in floating point; mirror the samples.
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx / 2; ++i) w(g.nx - 1 - i, j) = w(i, j);
  const VectorField grad = smoothed_gradient(w, m);
  const double scale = linf_norm(grad.x);
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) {
      const std::size_t mi = g.nx - 1 - i;
      EXPECT_NEAR(grad.x(i, j), -grad.x(mi, j), 1e-14 * scale);
      EXPECT_NEAR(grad.y(i, j), grad.y(mi, j), 1e-14 * scale);
    }
}

TEST(SmoothedGradient, FftPathMatchesDirect) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> d(0.0, 10.0);
  for (std::size_t n : {32u, 64u, 96u}) {
    const Grid g = padded(n);
    const Mollifier m(ell, g);
    SmoothedGradient fft(m, g, ConvolutionMethod::fft);
    for (int rep = 0; rep < 3; ++rep) {
      const ScalarField w = ScalarField::sample(g, [&](double x, double y) {
        return d(rng) * bump(x, y, 0.5, -0.3, 3.0) + (rep == 2 ? d(rng) : 0.0);
      });
      const VectorField a = smoothed_gradient(w, m), b = fft(w);
      for (std::size_t k = 0; k < a.x.size(); ++k) {
        ASSERT_NEAR(a.x[k], b.x[k], 1e-10);
        ASSERT_NEAR(a.y[k], b.y[k], 1e-10);
      }
    }
  }
}

TEST(SmoothedGradient, FftPathMatchesDirectAtProductionSize) {
  const Grid g = padded(256);
  const Mollifier m(ell, g);
  SmoothedGradient fft(m, g, ConvolutionMethod::fft);
  ScalarField w = indicator(make_ball(0, 0, 2), g);
  w *= 9.5;
  const VectorField a = smoothed_gradient(w, m), b = fft(w);
  double worst = 0.0;
  for (std::size_t k = 0; k < a.x.size(); ++k)
    worst = std::max({worst, std::abs(a.x[k] - b.x[k]), std::abs(a.y[k] - b.y[k])});
  EXPECT_LE(worst, 1e-10);
}

TEST(NonlocalVelocity, ZeroFieldGivesZeroVelocity) {
  const Grid g = padded(32);
  const VectorField v = nonlocal_velocity(ScalarField(g), Mollifier(ell, g), 2.0);
  EXPECT_EQ(linf_norm(v.x), 0.0);
  EXPECT_EQ(linf_norm(v.y), 0.0);
}

TEST(NonlocalVelocity, SpeedBelowCap) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> d(0.0, 50.0);
  const Grid g = padded(64);
  const Mollifier m(ell, g);
  const double kappa = 2.0;
  for (int rep = 0; rep < 5; ++rep) {
    const ScalarField w = ScalarField::sample(g, [&](double, double) { return d(rng); });
    const VectorField grad = smoothed_gradient(w, m);
    const VectorField v = nonlocal_velocity(w, m, kappa);
    for (std::size_t k = 0; k < v.x.size(); ++k) {
      const double gn = std::hypot(grad.x[k], grad.y[k]);
      const double vn = std::hypot(v.x[k], v.y[k]);
      ASSERT_LT(vn, kappa);
      ASSERT_LE(vn, kappa * gn / std::sqrt(1.0 + gn * gn) * (1.0 + 1e-14));
      if (gn > 0.0) {
        ASSERT_GT(v.x[k] * grad.x[k] + v.y[k] * grad.y[k], 0.0);
      }
    }
  }
}

TEST(NonlocalVelocity, UnitGradientGivesKappaOverRootTwo) {
  const Grid g = Grid::square(1, 0.0, 1.0);
  VectorField grad(g);
  grad.x[0] = 0.6;
  grad.y[0] = 0.8;
  const VectorField v = saturate(grad, 2.0);
  EXPECT_NEAR(std::hypot(v.x[0], v.y[0]), 2.0 / std::sqrt(2.0), 1e-15);
}

TEST(FftSize, SmoothNumbers) {
  EXPECT_EQ(detail::fft_friendly_size(278), 280u);
  EXPECT_EQ(detail::fft_friendly_size(256), 256u);
  EXPECT_EQ(detail::fft_friendly_size(11), 12u);
}
