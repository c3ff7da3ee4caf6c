#pragma once

/// @file nonlocal_velocity.hpp
/// Compactly supported mollifier and the predator velocity
///
///   v(w) = kappa * g / sqrt(1 + |g|^2),   g = grad(w * eta) = w * grad(eta).
///
/// The convolution is a zero-extended linear convolution: values of w outside the
/// grid count as 0. Two evaluation paths exist. The direct path sums over the
/// compact stencil and is the reference. The FFT path (FFTW, zero padded) computes
/// the same linear convolution and is what long simulations use.

#include "pestctl/error.hpp"
#include "pestctl/fields.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

namespace pestctl {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double mollifier_eval(Vec2 p, double ell) noexcept {
  const double s = (p.x * p.x + p.y * p.y) / (ell * ell);
  if (s > 1.0) return 0.0;
  const double c = 1.0 - s;
  return 4.0 / (std::numbers::pi * ell * ell) * c * c * c;
}

/// Analytic gradient of mollifier_eval.
inline Vec2 mollifier_grad_eval(Vec2 p, double ell) noexcept {
  const double s = (p.x * p.x + p.y * p.y) / (ell * ell);
  if (s > 1.0) return {};
  const double c = 1.0 - s;
  const double k = -24.0 / (std::numbers::pi * ell * ell * ell * ell) * c * c;
  return {k * p.x, k * p.y};
}

/// Discrete stencils of eta and grad(eta) for a given grid spacing.
///
/// Entries are kernel samples at offsets (a dx, b dy) times the cell area, all scaled
/// by one common factor so that the eta stencil sums to exactly 1.
class Mollifier {
public:
  Mollifier(double ell, double dx, double dy) : ell_(ell), dx_(dx), dy_(dy) {
    if (!(ell > 0.0)) throw ConfigError("mollifier radius must be positive");
    if (!(dx > 0.0) || !(dy > 0.0)) throw ConfigError("grid spacing must be positive");
    if (dx > ell || dy > ell)
      throw ConfigError("grid spacing coarser than the mollifier radius; stencil would be empty");
    rx_ = static_cast<int>(std::ceil(ell / dx));
    ry_ = static_cast<int>(std::ceil(ell / dy));
    const std::size_t n = width() * height();
    eta_.assign(n, 0.0);
    gx_.assign(n, 0.0);
    gy_.assign(n, 0.0);
    const double area = dx * dy;
    double mass = 0.0;
    for (int b = -ry_; b <= ry_; ++b)
      for (int a = -rx_; a <= rx_; ++a) {
        const Vec2 p{a * dx, b * dy};
        const std::size_t k = slot(a, b);
        eta_[k] = mollifier_eval(p, ell) * area;
        const Vec2 g = mollifier_grad_eval(p, ell);
        gx_[k] = g.x * area;
        gy_[k] = g.y * area;
        mass += eta_[k];
      }
    raw_mass_ = mass;
    scale_ = 1.0 / mass;
    for (std::size_t k = 0; k < n; ++k) {
      eta_[k] *= scale_;
      gx_[k] *= scale_;
      gy_[k] *= scale_;
    }
  }

  Mollifier(double ell, const Grid& grid) : Mollifier(ell, grid.dx(), grid.dy()) {}

  double horizon() const noexcept { return ell_; }
  double dx() const noexcept { return dx_; }
  double dy() const noexcept { return dy_; }
  int radius_x() const noexcept { return rx_; }
  int radius_y() const noexcept { return ry_; }
  std::size_t width() const noexcept { return static_cast<std::size_t>(2 * rx_ + 1); }
  std::size_t height() const noexcept { return static_cast<std::size_t>(2 * ry_ + 1); }

  /// Riemann sum of the raw kernel samples before renormalisation.
  double raw_mass() const noexcept { return raw_mass_; }
  /// Factor applied to every stencil entry (1 / raw_mass).
  double normalisation() const noexcept { return scale_; }

  std::size_t slot(int a, int b) const noexcept {
    return static_cast<std::size_t>(b + ry_) * width() + static_cast<std::size_t>(a + rx_);
  }
  double eta(int a, int b) const noexcept { return eta_[slot(a, b)]; }
  double grad_x(int a, int b) const noexcept { return gx_[slot(a, b)]; }
  double grad_y(int a, int b) const noexcept { return gy_[slot(a, b)]; }

  const std::vector<double>& eta_stencil() const noexcept { return eta_; }
  const std::vector<double>& grad_x_stencil() const noexcept { return gx_; }
  const std::vector<double>& grad_y_stencil() const noexcept { return gy_; }

private:
  double ell_, dx_, dy_;
  int rx_ = 0, ry_ = 0;
  double raw_mass_ = 0.0, scale_ = 1.0;
  std::vector<double> eta_, gx_, gy_;
};

/// out(i,j) = sum_{a,b} w(i-a, j-b) * K(a,b), zero outside the grid.
/// Summation order is fixed (stencil rows, then columns, then cells).
inline ScalarField convolve_direct(const ScalarField& w, const std::vector<double>& stencil, int rx, int ry) {
  const Grid& g = w.grid();
  const auto nx = static_cast<long>(g.nx), ny = static_cast<long>(g.ny);
  const std::size_t width = static_cast<std::size_t>(2 * rx + 1);
  ScalarField out(g);
  for (int b = -ry; b <= ry; ++b)
    for (int a = -rx; a <= rx; ++a) {
      const double k = stencil[static_cast<std::size_t>(b + ry) * width + static_cast<std::size_t>(a + rx)];
      if (k == 0.0) continue;
      const long j0 = std::max(0L, static_cast<long>(b)), j1 = std::min(ny, ny + b);
      const long i0 = std::max(0L, static_cast<long>(a)), i1 = std::min(nx, nx + a);
      for (long j = j0; j < j1; ++j) {
        double* dst = &out.values()[static_cast<std::size_t>(j * nx)];
        const double* src = &w.values()[static_cast<std::size_t>((j - b) * nx)];
        for (long i = i0; i < i1; ++i) dst[i] += k * src[i - a];
      }
    }
  return out;
}

/// grad(w * eta) via the direct stencil sum.
inline VectorField smoothed_gradient(const ScalarField& w, const Mollifier& m) {
  return VectorField(convolve_direct(w, m.grad_x_stencil(), m.radius_x(), m.radius_y()),
                     convolve_direct(w, m.grad_y_stencil(), m.radius_x(), m.radius_y()));
}

/// Pointwise kappa * g / sqrt(1 + |g|^2).
inline VectorField saturate(const VectorField& g, double kappa) {
  VectorField v(g.grid());
  for (std::size_t k = 0; k < g.x.size(); ++k) {
    const double gx = g.x[k], gy = g.y[k];
    const double f = kappa / std::sqrt(1.0 + gx * gx + gy * gy);
    v.x[k] = f * gx;
    v.y[k] = f * gy;
  }
  return v;
}

inline VectorField nonlocal_velocity(const ScalarField& w, const Mollifier& m, double kappa) {
  return saturate(smoothed_gradient(w, m), kappa);
}

namespace detail {

/// FFTW's planner is not re-entrant; execution on distinct buffers is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};
struct FftwPlanDestroy {
  void operator()(fftw_plan_s* p) const noexcept {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(p);
  }
};

template <typename T>
using fftw_buffer = std::unique_ptr<T[], FftwFree>;
using fftw_plan_handle = std::unique_ptr<fftw_plan_s, FftwPlanDestroy>;

/// Smallest 2^a 3^b 5^c 7^d that is >= n.
inline std::size_t fft_friendly_size(std::size_t n) {
  for (std::size_t m = std::max<std::size_t>(n, 1);; ++m) {
    std::size_t r = m;
    for (std::size_t p : {2u, 3u, 5u, 7u})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

} // namespace detail

enum class ConvolutionMethod { direct, fft };

/// grad(w * eta) bound to one grid, reusable across time steps.
///
/// Holds FFTW plans and work buffers, so one instance must not be used from two
/// threads at once. Distinct instances are independent.
class SmoothedGradient {
public:
  SmoothedGradient(Mollifier m, const Grid& grid, ConvolutionMethod method)
      : mollifier_(std::move(m)), grid_(grid), method_(method) {
    if (method_ == ConvolutionMethod::fft) setup_fft();
  }

  const Mollifier& mollifier() const noexcept { return mollifier_; }
  ConvolutionMethod method() const noexcept { return method_; }

  VectorField operator()(const ScalarField& w) {
    if (method_ == ConvolutionMethod::direct) return smoothed_gradient(w, mollifier_);
    return fft_gradient(w);
  }

private:
  void setup_fft() {
    px_ = detail::fft_friendly_size(grid_.nx + static_cast<std::size_t>(mollifier_.radius_x()));
    py_ = detail::fft_friendly_size(grid_.ny + static_cast<std::size_t>(mollifier_.radius_y()));
    const std::size_t nreal = px_ * py_;
    const std::size_t ncplx = py_ * (px_ / 2 + 1);
    real_.reset(static_cast<double*>(fftw_malloc(sizeof(double) * nreal)));
    spec_.reset(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * ncplx)));
    work_.reset(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * ncplx)));
    {
      std::lock_guard lock(detail::fftw_planner_mutex());
      const int n0 = static_cast<int>(py_), n1 = static_cast<int>(px_);
      // FFTW_ESTIMATE keeps plan selection (and therefore rounding) reproducible.
      forward_.reset(fftw_plan_dft_r2c_2d(n0, n1, real_.get(), spec_.get(), FFTW_ESTIMATE));
      inverse_.reset(fftw_plan_dft_c2r_2d(n0, n1, work_.get(), real_.get(), FFTW_ESTIMATE));
    }
    kx_ = kernel_spectrum(mollifier_.grad_x_stencil());
    ky_ = kernel_spectrum(mollifier_.grad_y_stencil());
  }

  std::vector<std::complex<double>> kernel_spectrum(const std::vector<double>& stencil) {
    const int rx = mollifier_.radius_x(), ry = mollifier_.radius_y();
    std::fill(real_.get(), real_.get() + px_ * py_, 0.0);
    for (int b = -ry; b <= ry; ++b)
      for (int a = -rx; a <= rx; ++a) {
        const std::size_t ia = static_cast<std::size_t>((a + static_cast<long>(px_)) % static_cast<long>(px_));
        const std::size_t jb = static_cast<std::size_t>((b + static_cast<long>(py_)) % static_cast<long>(py_));
        real_[jb * px_ + ia] = stencil[mollifier_.slot(a, b)];
      }
    fftw_execute_dft_r2c(forward_.get(), real_.get(), spec_.get());
    const std::size_t ncplx = py_ * (px_ / 2 + 1);
    std::vector<std::complex<double>> out(ncplx);
    const double inv = 1.0 / static_cast<double>(px_ * py_);
    for (std::size_t k = 0; k < ncplx; ++k) out[k] = std::complex<double>(spec_[k][0], spec_[k][1]) * inv;
    return out;
  }

  ScalarField apply(const std::vector<std::complex<double>>& kernel) {
    const std::size_t ncplx = py_ * (px_ / 2 + 1);
    for (std::size_t k = 0; k < ncplx; ++k) {
      const std::complex<double> z = std::complex<double>(spec_[k][0], spec_[k][1]) * kernel[k];
      work_[k][0] = z.real();
      work_[k][1] = z.imag();
    }
    fftw_execute_dft_c2r(inverse_.get(), work_.get(), real_.get());
    ScalarField out(grid_);
    for (std::size_t j = 0; j < grid_.ny; ++j)
      for (std::size_t i = 0; i < grid_.nx; ++i) out(i, j) = real_[j * px_ + i];
    return out;
  }

  VectorField fft_gradient(const ScalarField& w) {
    std::fill(real_.get(), real_.get() + px_ * py_, 0.0);
    for (std::size_t j = 0; j < grid_.ny; ++j)
      for (std::size_t i = 0; i < grid_.nx; ++i) real_[j * px_ + i] = w(i, j);
    fftw_execute_dft_r2c(forward_.get(), real_.get(), spec_.get());
    ScalarField gx = apply(kx_);
    ScalarField gy = apply(ky_);
    return VectorField(std::move(gx), std::move(gy));
  }

  Mollifier mollifier_;
  Grid grid_;
  ConvolutionMethod method_;
  std::size_t px_ = 0, py_ = 0;
  detail::fftw_buffer<double> real_;
  detail::fftw_buffer<fftw_complex> spec_, work_;
  detail::fftw_plan_handle forward_, inverse_;
  std::vector<std::complex<double>> kx_, ky_;
};

} // namespace pestctl
