#pragma once

/// @file fields.hpp
/// Uniform cell-centred 2D grid, scalar and vector fields living on it, and the
/// discrete norms and region integrals used by every other part of the library.
///
/// Storage is row-major with x varying fastest: value (i, j) sits at j * nx + i,
/// where i indexes x and j indexes y. All integrals use the midpoint rule, so a
/// cell contributes value * dx * dy.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace pestctl {

struct Grid {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  Grid() = default;
  Grid(std::size_t nx_, std::size_t ny_, double x_lo, double x_hi, double y_lo, double y_hi)
      : nx(nx_), ny(ny_), x_min(x_lo), x_max(x_hi), y_min(y_lo), y_max(y_hi) {
    if (nx == 0 || ny == 0) throw std::invalid_argument("grid needs at least one cell per axis");
    if (!(x_max > x_min) || !(y_max > y_min))
      throw std::invalid_argument("grid extents must be increasing");
  }

  /// Square grid of n x n cells on [lo, hi]^2.
  static Grid square(std::size_t n, double lo, double hi) { return Grid(n, n, lo, hi, lo, hi); }

  double dx() const noexcept { return (x_max - x_min) / static_cast<double>(nx); }
  double dy() const noexcept { return (y_max - y_min) / static_cast<double>(ny); }
  double cell_area() const noexcept { return dx() * dy(); }
  std::size_t size() const noexcept { return nx * ny; }

  double x_center(std::size_t i) const noexcept {
    return x_min + (static_cast<double>(i) + 0.5) * dx();
  }
  double y_center(std::size_t j) const noexcept {
    return y_min + (static_cast<double>(j) + 0.5) * dy();
  }
  std::size_t index(std::size_t i, std::size_t j) const noexcept { return j * nx + i; }

  friend bool operator==(const Grid&, const Grid&) = default;
};

class ScalarField {
public:
  ScalarField() = default;
  explicit ScalarField(const Grid& grid, double fill = 0.0) : grid_(grid), values_(grid.size(), fill) {}
  ScalarField(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
      throw std::invalid_argument("field value count does not match grid");
  }

  /// Samples fn(x, y) at every cell centre.
  template <typename Fn>
  static ScalarField sample(const Grid& grid, Fn&& fn) {
    ScalarField f(grid);
    for (std::size_t j = 0; j < grid.ny; ++j) {
      const double y = grid.y_center(j);
      for (std::size_t i = 0; i < grid.nx; ++i) f.values_[grid.index(i, j)] = fn(grid.x_center(i), y);
    }
    return f;
  }

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  double operator()(std::size_t i, std::size_t j) const noexcept { return values_[grid_.index(i, j)]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return values_[grid_.index(i, j)]; }
  double operator[](std::size_t k) const noexcept { return values_[k]; }
  double& operator[](std::size_t k) noexcept { return values_[k]; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  bool all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
  }

  ScalarField& operator+=(const ScalarField& o) {
    assert(o.grid_ == grid_);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
    return *this;
  }
  ScalarField& operator-=(const ScalarField& o) {
    assert(o.grid_ == grid_);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
    return *this;
  }
  ScalarField& operator*=(double s) {
    for (auto& v : values_) v *= s;
    return *this;
  }
  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
  friend ScalarField operator*(double s, ScalarField a) { return a *= s; }

  friend bool operator==(const ScalarField&, const ScalarField&) = default;

private:
  Grid grid_;
  std::vector<double> values_;
};

struct VectorField {
  ScalarField x;
  ScalarField y;

  VectorField() = default;
  explicit VectorField(const Grid& grid) : x(grid), y(grid) {}
  VectorField(ScalarField x_, ScalarField y_) : x(std::move(x_)), y(std::move(y_)) {
    if (!(x.grid() == y.grid())) throw std::invalid_argument("vector components on different grids");
  }

  const Grid& grid() const noexcept { return x.grid(); }
};

struct Ball {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 1.0;
  friend bool operator==(const Ball&, const Ball&) = default;
};

struct Rect {
  double x_lo = 0.0;
  double x_hi = 1.0;
  double y_lo = 0.0;
  double y_hi = 1.0;
  friend bool operator==(const Rect&, const Rect&) = default;
};

using Region = std::variant<Ball, Rect>;

inline Region make_ball(double cx, double cy, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
  return Ball{cx, cy, radius};
}

inline Region make_rect(double x_lo, double x_hi, double y_lo, double y_hi) {
  if (!(x_hi >= x_lo) || !(y_hi >= y_lo)) throw std::invalid_argument("rectangle bounds out of order");
  return Rect{x_lo, x_hi, y_lo, y_hi};
}

/// Closed-set membership.
inline bool contains(const Region& region, double x, double y) noexcept {
  return std::visit(
      [&](const auto& r) -> bool {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Ball>) {
          const double ddx = x - r.cx, ddy = y - r.cy;
          return ddx * ddx + ddy * ddy <= r.radius * r.radius;
        } else {
          return x >= r.x_lo && x <= r.x_hi && y >= r.y_lo && y <= r.y_hi;
        }
      },
      region);
}

/// Exact (analytic) area of the region in the plane.
inline double region_area(const Region& region) noexcept {
  return std::visit(
      [](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Ball>)
          return std::numbers::pi * r.radius * r.radius;
        else
          return (r.x_hi - r.x_lo) * (r.y_hi - r.y_lo);
      },
      region);
}

inline std::string describe(const Region& region) {
  return std::visit(
      [](const auto& r) -> std::string {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Ball>)
          return "ball(" + std::to_string(r.cx) + "," + std::to_string(r.cy) + ";" + std::to_string(r.radius) + ")";
        else
          return "rect(" + std::to_string(r.x_lo) + "," + std::to_string(r.x_hi) + ";" + std::to_string(r.y_lo) +
                 "," + std::to_string(r.y_hi) + ")";
      },
      region);
}

/// 1 on cells whose centre lies in the region, 0 elsewhere.
inline ScalarField indicator(const Region& region, const Grid& grid) {
  return ScalarField::sample(grid, [&](double x, double y) { return contains(region, x, y) ? 1.0 : 0.0; });
}

/// Fraction of each cell covered by the region. Exact for rectangles; disks
/// use a sub-sampled rim with `rim_samples`^2 points per boundary cell.
inline ScalarField coverage(const Region& region, const Grid& grid, int rim_samples = 16) {
  ScalarField out(grid);
  const double dx = grid.dx(), dy = grid.dy();
  // Covered length of [c - h/2, c + h/2] inside [lo, hi], as a fraction of h.
  auto fraction = [](double c, double h, double lo, double hi) {
    const double a = c - h / 2, b = c + h / 2;
    if (a >= lo && b <= hi) return 1.0;
    return std::clamp((std::min(b, hi) - std::max(a, lo)) / h, 0.0, 1.0);
  };
  for (std::size_t j = 0; j < grid.ny; ++j) {
    const double y = grid.y_center(j);
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const double x = grid.x_center(i);
      double frac = 0.0;
      if (const auto* r = std::get_if<Rect>(&region)) {
        frac = fraction(x, dx, r->x_lo, r->x_hi) * fraction(y, dy, r->y_lo, r->y_hi);
      } else {
        const auto& b = std::get<Ball>(region);
        const double d = std::hypot(x - b.cx, y - b.cy), half_diag = 0.5 * std::hypot(dx, dy);
        if (d + half_diag <= b.radius) {
          frac = 1.0;
        } else if (d - half_diag < b.radius) {
          int hits = 0;
          for (int sb = 0; sb < rim_samples; ++sb)
            for (int sa = 0; sa < rim_samples; ++sa)
              hits += contains(region, x - dx / 2 + (sa + 0.5) * dx / rim_samples,
                               y - dy / 2 + (sb + 0.5) * dy / rim_samples);
          frac = static_cast<double>(hits) / (rim_samples * rim_samples);
        }
      }
      out(i, j) = frac;
    }
  }
  return out;
}

/// Flat indices of the cells whose centre lies in the region, in storage order.
inline std::vector<std::size_t> region_cells(const Region& region, const Grid& grid) {
  std::vector<std::size_t> cells;
  for (std::size_t j = 0; j < grid.ny; ++j)
    for (std::size_t i = 0; i < grid.nx; ++i)
      if (contains(region, grid.x_center(i), grid.y_center(j))) cells.push_back(grid.index(i, j));
  return cells;
}

inline double l1_norm(const ScalarField& f) noexcept {
  double s = 0.0;
  for (double v : f.values()) s += std::abs(v);
  return s * f.grid().cell_area();
}

inline double linf_norm(const ScalarField& f) noexcept {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

/// Signed integral: sum of values times cell area.
inline double integral(const ScalarField& f) noexcept {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s * f.grid().cell_area();
}

inline double min_value(const ScalarField& f) noexcept {
  return f.size() == 0 ? 0.0 : *std::min_element(f.values().begin(), f.values().end());
}

/// Anisotropic discrete total variation over interior cell faces.
inline double tv_anisotropic(const ScalarField& f) noexcept {
  const Grid& g = f.grid();
  double sx = 0.0, sy = 0.0;
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i + 1 < g.nx; ++i) sx += std::abs(f(i + 1, j) - f(i, j));
  for (std::size_t j = 0; j + 1 < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) sy += std::abs(f(i, j + 1) - f(i, j));
  return sx * g.dy() + sy * g.dx();
}

inline double integrate_region(const ScalarField& f, const Region& region) noexcept {
  const Grid& g = f.grid();
  double s = 0.0;
  for (std::size_t j = 0; j < g.ny; ++j) {
    const double y = g.y_center(j);
    for (std::size_t i = 0; i < g.nx; ++i)
      if (contains(region, g.x_center(i), y)) s += f(i, j);
  }
  return s * g.cell_area();
}

/// Same as integrate_region but over a precomputed cell list.
inline double integrate_cells(const ScalarField& f, std::span<const std::size_t> cells) noexcept {
  double s = 0.0;
  for (std::size_t k : cells) s += f[k];
  return s * f.grid().cell_area();
}

/// Averages 2x2 blocks onto a grid with half the resolution. Preserves the integral.
inline ScalarField restrict_conservative(const ScalarField& f) {
  const Grid& g = f.grid();
  if (g.nx % 2 != 0 || g.ny % 2 != 0) throw std::invalid_argument("restriction needs even cell counts");
  Grid coarse(g.nx / 2, g.ny / 2, g.x_min, g.x_max, g.y_min, g.y_max);
  ScalarField out(coarse);
  for (std::size_t j = 0; j < coarse.ny; ++j)
    for (std::size_t i = 0; i < coarse.nx; ++i)
      out(i, j) = 0.25 * (f(2 * i, 2 * j) + f(2 * i + 1, 2 * j) + f(2 * i, 2 * j + 1) + f(2 * i + 1, 2 * j + 1));
  return out;
}

} // namespace pestctl
