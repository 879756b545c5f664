#pragma once

/**
 * @file hilbert.hpp
 * @brief Hilbert transform engines.
 *
 *   hilbert_pv        principal-value quadrature of (1/pi) PV int f(x - t) dt / t
 *   hilbert_spectral  multiplication of the spectrum by -i sign(w)
 *   hilbert_box_closed_form  exact transform of a piecewise-constant function
 *
 * PV quadrature
 * -------------
 * Pairing t with -t gives the regular integrand g(t) = [f(x - t) - f(x + t)] / t
 * on (0, inf), with g(0+) = -2 f'(x). At a grid point x_i the trapezoid rule on
 * the nodes t_j = j h reads
 *
 *     Hf(x_i) ~ (1/pi) sum_{j >= 1} (f_{i-j} - f_{i+j}) / j  -  h f'(x_i) / pi,
 *
 * where the last term is the t = 0 end of the trapezoid, filled in from the
 * limit of g (singularity correction). The kernel is never evaluated at t = 0.
 * Samples outside the grid count as zero.
 *
 * Jump averaging: sampled discontinuous functions follow the half-open
 * convention (a jump between samples m-1 and m is taken to sit at node m and
 * f_m is the right-hand value). The trapezoid rule is only second order for a
 * step if the node value at the jump is the mean of the one-sided limits, so
 * detected jump nodes are replaced by that mean before summation. A node is a
 * jump when its first difference exceeds both neighbouring differences by a
 * factor of 16; smooth samples never meet that test.
 */

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "hwl/error.hpp"
#include "hwl/numerics.hpp"
#include "hwl/wavelets.hpp"

namespace hwl {

struct PvConfig {
  bool singularity_correction = true;
  bool jump_averaging = true;
  unsigned eval_parallelism = 1;  // advisory; results do not depend on it
};

struct SpectralConfig {
  int pad_factor = 16;
};

namespace detail {

inline constexpr double kJumpRatio = 16.0;

/// Replace samples at detected jump nodes by the mean of the one-sided values.
inline std::vector<double> average_jumps(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n < 3) return out;
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  const double floor = 1e-12 * scale;
  auto diff = [&](std::size_t m) { return (m >= 1 && m < n) ? std::abs(v[m] - v[m - 1]) : 0.0; };
  for (std::size_t m = 1; m < n; ++m) {
    const double d = diff(m);
    if (d <= floor) continue;
    const double neighbours = std::max(m >= 2 ? diff(m - 1) : 0.0, m + 1 < n ? diff(m + 1) : 0.0);
    if (d > kJumpRatio * neighbours) out[m] = 0.5 * (v[m - 1] + v[m]);
  }
  return out;
}

template <class Body>
void parallel_for(std::size_t n, unsigned workers, Body&& body) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, n / 64))));
  if (workers == 1) {
    body(std::size_t{0}, n);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = std::min(n, w * chunk);
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo < hi) pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
}

}  // namespace detail

inline SampledSignal hilbert_pv(const SampledSignal& f, const PvConfig& cfg = {}) {
  const Grid& g = f.grid();
  const std::size_t n = g.count();
  const std::vector<double> v =
      cfg.jump_averaging ? detail::average_jumps(f.values()) : std::vector<double>(f.values().begin(), f.values().end());

  std::vector<double> out(n, 0.0);
  const auto nz_first = std::find_if(v.begin(), v.end(), [](double x) { return x != 0.0; });
  if (nz_first == v.end()) return SampledSignal(g, std::move(out));
  const auto lo = static_cast<std::ptrdiff_t>(nz_first - v.begin());
  const auto hi =
      static_cast<std::ptrdiff_t>(std::find_if(v.rbegin(), v.rend(), [](double x) { return x != 0.0; }).base() - v.begin()) - 1;

  std::vector<double> inv(n + 1, 0.0);
  for (std::size_t j = 1; j <= n; ++j) inv[j] = 1.0 / static_cast<double>(j);

  std::vector<double> slope;
  if (cfg.singularity_correction) {
    const SampledSignal averaged(g, v);
    const SampledSignal d = derivative(averaged);
    slope.assign(d.values().begin(), d.values().end());
  }

  const double h = g.step();
  auto at = [&](std::ptrdiff_t m) { return (m >= lo && m <= hi) ? v[static_cast<std::size_t>(m)] : 0.0; };

  detail::parallel_for(n, cfg.eval_parallelism, [&](std::size_t begin, std::size_t end) {
    for (std::size_t ui = begin; ui < end; ++ui) {
      const auto i = static_cast<std::ptrdiff_t>(ui);
      // Only offsets j for which i - j or i + j hits the nonzero range contribute.
      std::ptrdiff_t jlo, jhi;
      if (i < lo) {
        jlo = lo - i;
        jhi = hi - i;
      } else if (i > hi) {
        jlo = i - hi;
        jhi = i - lo;
      } else {
        jlo = 1;
        jhi = std::max(i - lo, hi - i);
      }
      double acc = 0.0;
      for (std::ptrdiff_t j = jlo; j <= jhi; ++j) acc += (at(i - j) - at(i + j)) * inv[static_cast<std::size_t>(j)];
      double value = acc / std::numbers::pi;
      if (cfg.singularity_correction) value -= h * slope[ui] / std::numbers::pi;
      out[ui] = value;
    }
  });
  return SampledSignal(g, std::move(out));
}

inline SampledSignal hilbert_spectral(const SampledSignal& f, const SpectralConfig& cfg = {}) {
  if (cfg.pad_factor < 1) throw InvalidParameter("pad_factor must be at least 1");
  const Grid& g = f.grid();
  const std::size_t n = g.count();
  const std::size_t len = n * static_cast<std::size_t>(cfg.pad_factor);
  const std::size_t offset = (len - n) / 2;

  std::vector<complex> data(len, complex{});
  for (std::size_t i = 0; i < n; ++i) data[offset + i] = f[i];
  detail::fft_inplace(data, FFTW_FORWARD);
  data[0] = 0.0;
  for (std::size_t k = 1; k < len; ++k) {
    if (2 * k == len) {
      data[k] = 0.0;  // Nyquist: sign(w) undefined
    } else if (2 * k < len) {
      data[k] *= complex(0.0, -1.0);
    } else {
      data[k] *= complex(0.0, 1.0);
    }
  }
  detail::fft_inplace(data, FFTW_BACKWARD);

  const double inv_len = 1.0 / static_cast<double>(len);
  std::vector<double> out(n);
  double max_re = 0.0, max_im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const complex z = data[offset + i] * inv_len;
    out[i] = z.real();
    max_re = std::max(max_re, std::abs(z.real()));
    max_im = std::max(max_im, std::abs(z.imag()));
  }
  if (max_im > 1e-10 * max_re + 1e-300)
    throw Error("spectral Hilbert transform left an imaginary residue of " + std::to_string(max_im));
  return SampledSignal(g, std::move(out));
}

/// Sum over pieces of (level / pi) ln|(x - b_i) / (x - b_{i+1})|.
inline double hilbert_box_closed_form(const PiecewiseConstant& p, double x) {
  const auto& b = p.breakpoints();
  for (double bp : b)
    if (x == bp) throw SingularPoint("closed-form transform is singular at breakpoint " + std::to_string(bp));
  double sum = 0.0;
  for (std::size_t i = 0; i < p.levels().size(); ++i)
    sum += p.levels()[i] * std::log(std::abs((x - b[i]) / (x - b[i + 1])));
  return sum / std::numbers::pi;
}

inline SampledSignal hilbert_box_closed_form(const PiecewiseConstant& p, const Grid& grid) {
  return SampledSignal::from_function(grid, [&](double x) { return hilbert_box_closed_form(p, x); });
}

}  // namespace hwl
