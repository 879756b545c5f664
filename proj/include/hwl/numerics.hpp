#pragma once

/**
 * @file numerics.hpp
 * @brief Uniform grids, sampled signals, trapezoid quadrature, differences and the DFT.
 *
 * Every other module works on SampledSignal. Quadrature is the composite
 * trapezoid rule and differentiation uses central differences (one-sided at
 * the two ends), both second order in the grid step.
 *
 * Spectrum convention
 * -------------------
 * For samples f_n = f(x_min + n h), n = 0..N-1, the raw DFT is
 *
 *     X_k = sum_n f_n exp(-2 pi i k n / N).
 *
 * Bin k carries the angular frequency w_k = 2 pi k / (N h), folded into
 * (-pi/h, pi/h]: DC sits at bin 0 and negative frequencies occupy the upper
 * half of the array (k > N/2 maps to k - N). The stored value is the
 * approximation of the continuous transform f^(w) = int f(x) exp(-i w x) dx,
 *
 *     Spectrum::values[k] = h * exp(-i w_k x_min) * X_k,
 *
 * so that sum |f_n|^2 h = sum_k |values[k]|^2 dw / (2 pi) with dw = 2 pi / (N h).
 */

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hwl/error.hpp"

namespace hwl {

using complex = std::complex<double>;

/// Uniform grid x_i = x_min + i * step, 0 <= i < count.
class Grid {
 public:
  Grid(double x_min, double step, std::size_t count) : x_min_(x_min), step_(step), count_(count) {
    if (!std::isfinite(x_min) || !std::isfinite(step) || !(step > 0.0))
      throw InvalidParameter("grid step must be finite and positive");
    if (count < 2) throw InvalidParameter("grid needs at least two samples");
  }

  /// count = floor((max - min) / step) + 1; a ratio within 1e-9 of an integer is rounded to it.
  static Grid from_range(double min, double max, double step) {
    if (!(step > 0.0) || !std::isfinite(step)) throw InvalidParameter("grid step must be finite and positive");
    if (!(min < max)) throw InvalidParameter("grid range must satisfy min < max");
    const double ratio = (max - min) / step;
    double intervals = std::round(ratio);
    if (std::abs(ratio - intervals) > 1e-9 * std::max(1.0, ratio)) intervals = std::floor(ratio);
    return Grid(min, step, static_cast<std::size_t>(intervals) + 1);
  }

  double x_min() const noexcept { return x_min_; }
  double step() const noexcept { return step_; }
  std::size_t count() const noexcept { return count_; }
  double x(std::size_t i) const noexcept { return x_min_ + static_cast<double>(i) * step_; }
  double x_max() const noexcept { return x(count_ - 1); }
  double span() const noexcept { return static_cast<double>(count_ - 1) * step_; }
  double center() const noexcept { return x_min_ + 0.5 * span(); }

  /// Index of the sample nearest to x; throws OutOfGrid when x is beyond half a step of the ends.
  std::size_t nearest_index(double x) const {
    const double r = (x - x_min_) / step_;
    if (!(r >= -0.5) || !(r <= static_cast<double>(count_ - 1) + 0.5))
      throw OutOfGrid("abscissa " + std::to_string(x) + " lies outside the grid");
    return static_cast<std::size_t>(std::clamp(std::round(r), 0.0, static_cast<double>(count_ - 1)));
  }

  bool contains(double x) const noexcept { return x >= x_min_ - 0.5 * step_ && x <= x_max() + 0.5 * step_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double x_min_;
  double step_;
  std::size_t count_;
};

/// Real-valued samples on a uniform grid. All values are finite.
class SampledSignal {
 public:
  SampledSignal(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.count()) throw InvalidParameter("sample count does not match the grid");
    for (double v : values_)
      if (!std::isfinite(v)) throw InvalidParameter("sampled signal contains a non-finite value");
  }

  static SampledSignal zeros(Grid grid) { return SampledSignal(grid, std::vector<double>(grid.count(), 0.0)); }

  template <class F>
  static SampledSignal from_function(Grid grid, F&& f) {
    std::vector<double> v(grid.count());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.x(i));
    return SampledSignal(grid, std::move(v));
  }

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double x(std::size_t i) const noexcept { return grid_.x(i); }

  /// Pointwise map of the values, keeping the grid.
  template <class F>
  SampledSignal map(F&& f) const {
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid_.x(i), values_[i]);
    return SampledSignal(grid_, std::move(v));
  }

 private:
  Grid grid_;
  std::vector<double> values_;
};

namespace detail {

inline void require_same_grid(const SampledSignal& a, const SampledSignal& b) {
  if (!(a.grid() == b.grid())) throw InvalidParameter("signals live on different grids");
}

}  // namespace detail

inline SampledSignal operator+(const SampledSignal& a, const SampledSignal& b) {
  detail::require_same_grid(a, b);
  return a.map([&, i = std::size_t{0}](double, double v) mutable { return v + b[i++]; });
}

inline SampledSignal operator-(const SampledSignal& a, const SampledSignal& b) {
  detail::require_same_grid(a, b);
  return a.map([&, i = std::size_t{0}](double, double v) mutable { return v - b[i++]; });
}

inline SampledSignal operator*(double s, const SampledSignal& a) {
  return a.map([s](double, double v) { return s * v; });
}

/// Composite trapezoid approximation of the integral over the grid span.
inline double integrate(const SampledSignal& f) {
  const auto v = f.values();
  double interior = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) interior += v[i];
  return f.grid().step() * (interior + 0.5 * (v.front() + v.back()));
}

/// Central differences inside, first-order one-sided differences at both ends.
inline SampledSignal derivative(const SampledSignal& f) {
  const auto v = f.values();
  const double h = f.grid().step();
  const std::size_t n = v.size();
  std::vector<double> d(n);
  d.front() = (v[1] - v[0]) / h;
  d.back() = (v[n - 1] - v[n - 2]) / h;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
  return SampledSignal(f.grid(), std::move(d));
}

inline double l1_norm(const SampledSignal& f) {
  return integrate(f.map([](double, double v) { return std::abs(v); }));
}

inline double sup_norm(const SampledSignal& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

/// sqrt of the trapezoid integral of f^2.
inline double l2_norm(const SampledSignal& f) {
  return std::sqrt(integrate(f.map([](double, double v) { return v * v; })));
}

/// Linear interpolation between the two neighbouring samples.
inline double interpolate(const SampledSignal& f, double x) {
  const Grid& g = f.grid();
  if (x < g.x_min() || x > g.x_max()) throw OutOfGrid("abscissa " + std::to_string(x) + " lies outside the grid");
  const double r = (x - g.x_min()) / g.step();
  const auto i = std::min(static_cast<std::size_t>(r), g.count() - 2);
  const double t = r - static_cast<double>(i);
  return (1.0 - t) * f[i] + t * f[i + 1];
}

/// ||f||_1 + ||f'||_inf
inline double mixed_norm(const SampledSignal& f) { return l1_norm(f) + sup_norm(derivative(f)); }

/// Frequency of DFT bin k for an n-point transform at the given step, folded into (-pi/step, pi/step].
inline double bin_frequency(std::size_t k, std::size_t n, double step) {
  const double period = static_cast<double>(n) * step;
  const auto kk = static_cast<double>(k);
  const double folded = (2 * k <= n) ? kk : kk - static_cast<double>(n);
  return 2.0 * std::numbers::pi * folded / period;
}

/// Continuous-transform approximation on the DFT bins; see the file comment for the convention.
struct Spectrum {
  Grid grid;  // grid of the signal the spectrum came from; idft maps back onto it
  std::vector<double> frequencies;
  std::vector<complex> values;

  double frequency_step() const { return 2.0 * std::numbers::pi / (static_cast<double>(grid.count()) * grid.step()); }
};

namespace detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

/// In-place unnormalized FFT. sign = FFTW_FORWARD (-1) or FFTW_BACKWARD (+1).
inline void fft_inplace(std::vector<complex>& data, int sign) {
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    // Only fftw_execute is re-entrant; planning is not.
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(data.size()), ptr, ptr, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(fftw_planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace detail

inline Spectrum dft(const SampledSignal& f) {
  const Grid& g = f.grid();
  const std::size_t n = g.count();
  std::vector<complex> data(f.values().begin(), f.values().end());
  detail::fft_inplace(data, FFTW_FORWARD);
  Spectrum s{g, std::vector<double>(n), std::move(data)};
  for (std::size_t k = 0; k < n; ++k) {
    const double w = bin_frequency(k, n, g.step());
    s.frequencies[k] = w;
    s.values[k] *= g.step() * std::polar(1.0, -w * g.x_min());
  }
  return s;
}

/// Inverse of dft. The imaginary part of the result is discarded.
inline SampledSignal idft(const Spectrum& s) {
  const Grid& g = s.grid;
  const std::size_t n = g.count();
  if (s.values.size() != n || s.frequencies.size() != n)
    throw InvalidParameter("spectrum length does not match its grid");
  std::vector<complex> data(n);
  for (std::size_t k = 0; k < n; ++k) data[k] = s.values[k] * std::polar(1.0, s.frequencies[k] * g.x_min()) / g.step();
  detail::fft_inplace(data, FFTW_BACKWARD);
  std::vector<double> out(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = data[i].real() * inv_n;
  return SampledSignal(g, std::move(out));
}

}  // namespace hwl
