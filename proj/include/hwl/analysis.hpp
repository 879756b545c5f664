#pragma once

/**
 * @file analysis.hpp
 * @brief Empirical checks of the decay, moment, smoothness and modulation
 *        properties of Hilbert-transformed wavelets.
 */

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hwl/error.hpp"
#include "hwl/hilbert.hpp"
#include "hwl/numerics.hpp"
#include "hwl/wavelets.hpp"

namespace hwl {

// ---------------------------------------------------------------------------
// Moments
// ---------------------------------------------------------------------------

/// Per-order tolerance = max(floor, truncation_factor * truncation_bound[k]).
struct MomentTolerance {
  double floor = 1e-6;
  double truncation_factor = 10.0;

  static MomentTolerance fixed(double tol) { return {tol, 0.0}; }
};

struct MomentReport {
  std::vector<double> moments;           // moments[k] ~ int x^k f(x) dx
  std::vector<double> truncation_bound;  // |x_edge|^k * |f_edge| * span
  std::vector<double> tolerance;         // tolerance actually applied to each order
  int vanishing_count = 0;               // largest n with |moments[k]| < tolerance[k] for all k < n
};

/**
 * Trapezoid moments of orders 0..k_max. The truncation bound estimates the
 * mass of x^k f beyond the grid from the edge samples; a signal whose tail
 * decays like |x|^-p contributes about |x_edge|^(k+1) |f(x_edge)| outside,
 * which the span factor over-covers.
 */
inline MomentReport moments(const SampledSignal& f, int k_max, MomentTolerance tol = {}) {
  if (k_max < 0) throw InvalidParameter("k_max must be nonnegative");
  const Grid& g = f.grid();
  const double edge_x = std::max(std::abs(g.x_min()), std::abs(g.x_max()));
  const double edge_f = std::max(std::abs(f.values().front()), std::abs(f.values().back()));

  MomentReport r;
  bool still_vanishing = true;
  for (int k = 0; k <= k_max; ++k) {
    const double m = integrate(f.map([k](double x, double v) { return std::pow(x, k) * v; }));
    const double bound = std::pow(edge_x, k) * edge_f * g.span();
    const double t = std::max(tol.floor, tol.truncation_factor * bound);
    r.moments.push_back(m);
    r.truncation_bound.push_back(bound);
    r.tolerance.push_back(t);
    if (still_vanishing && std::abs(m) < t) {
      ++r.vanishing_count;
    } else {
      still_vanishing = false;
    }
  }
  return r;
}

/// Finite-difference derivatives of the spectrum at w = 0 next to the moment prediction (-i)^k int x^k f.
struct SpectralMomentCheck {
  std::vector<complex> derivative;
  std::vector<complex> predicted;
  double frequency_step = 0.0;
};

/**
 * Estimates f^(k)(0) for k = 0..k_max by second-order central differences
 * over the DFT bins around DC (odd orders use a doubled spacing so every node
 * is a bin). The signal is zero-padded by pad_factor to refine the bin spacing.
 * Compared against (-i)^k times the k-th moment.
 */
inline SpectralMomentCheck spectral_moment_check(const SampledSignal& f, int k_max, int pad_factor = 16) {
  if (k_max < 0 || k_max > 6) throw InvalidParameter("k_max must lie in [0, 6]");
  if (pad_factor < 1) throw InvalidParameter("pad_factor must be at least 1");
  const Grid& g = f.grid();
  const std::size_t n = g.count();
  const std::size_t len = n * static_cast<std::size_t>(pad_factor);
  const std::size_t offset = (len - n) / 2;
  std::vector<double> padded(len, 0.0);
  std::copy(f.values().begin(), f.values().end(), padded.begin() + static_cast<std::ptrdiff_t>(offset));
  const Grid wide(g.x_min() - static_cast<double>(offset) * g.step(), g.step(), len);
  const Spectrum s = dft(SampledSignal(wide, std::move(padded)));
  const double dw = s.frequency_step();
  auto bin = [&](long j) { return s.values[static_cast<std::size_t>((j % static_cast<long>(len) + static_cast<long>(len)) % static_cast<long>(len))]; };

  SpectralMomentCheck out;
  out.frequency_step = dw;
  const MomentReport mr = moments(f, k_max, MomentTolerance::fixed(0.0));
  for (int k = 0; k <= k_max; ++k) {
    const long spacing = (k % 2 == 0) ? 1 : 2;
    const double h = static_cast<double>(spacing) * dw;
    complex acc{};
    double binom = 1.0;
    for (int i = 0; i <= k; ++i) {
      // offset of node i in units of the spacing is k/2 - i
      const long j = spacing * k / 2 - static_cast<long>(i) * spacing;
      acc += ((i % 2 == 0) ? binom : -binom) * bin(j);
      binom = binom * (k - i) / (i + 1);
    }
    out.derivative.push_back(acc / std::pow(h, k));
    out.predicted.push_back(std::pow(complex(0.0, -1.0), k) * mr.moments[static_cast<std::size_t>(k)]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Decay fits
// ---------------------------------------------------------------------------

enum class Side { left, right, two_sided };

inline std::string to_string(Side s) {
  switch (s) {
    case Side::left: return "left";
    case Side::right: return "right";
    default: return "two_sided";
  }
}

inline Side side_from_string(const std::string& s) {
  if (s == "left") return Side::left;
  if (s == "right") return Side::right;
  if (s == "two_sided") return Side::two_sided;
  throw InvalidParameter("unknown side '" + s + "'");
}

/// |f(x)| ~ exp(log_constant) / |x|^exponent over the window.
struct DecayFit {
  double exponent = 0.0;
  double log_constant = 0.0;
  double r_squared = 0.0;
  Interval window{0.0, 0.0};
  Side side = Side::two_sided;
  std::size_t points_used = 0;
  std::size_t excluded = 0;
};

namespace detail {

inline DecayFit fit_one_side(const SampledSignal& f, Interval window, Side side) {
  const Grid& g = f.grid();
  const double tiny = 1e3 * std::numeric_limits<double>::epsilon() * sup_norm(f);
  const double lo = side == Side::left ? -window.hi : window.lo;
  const double hi = side == Side::left ? -window.lo : window.hi;
  const double slack = 0.5 * g.step();
  if (lo < g.x_min() - slack || hi > g.x_max() + slack)
    throw OutOfGrid("fit window [" + std::to_string(lo) + ", " + std::to_string(hi) + "] is not inside the grid");

  std::vector<double> lx, ly;
  std::size_t candidates = 0;
  for (std::size_t i = 0; i < g.count(); ++i) {
    const double x = g.x(i);
    if (x < lo || x > hi) continue;
    ++candidates;
    const double v = std::abs(f[i]);
    if (v == 0.0 || v < tiny) continue;
    lx.push_back(std::log(std::abs(x)));
    ly.push_back(std::log(v));
  }
  const std::size_t used = lx.size();
  if (used < 8) throw TooFewPoints("decay fit needs at least 8 usable points, found " + std::to_string(used));
  if (2 * (candidates - used) > candidates)
    throw TooFewPoints("more than half of the window samples are zero or below the noise floor");

  const double nn = static_cast<double>(used);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < used; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= nn;
  my /= nn;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < used; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < used; ++i) {
    const double r = ly[i] - (intercept + slope * lx[i]);
    ss_res += r * r;
  }
  DecayFit fit;
  fit.exponent = -slope;
  fit.log_constant = intercept;
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  fit.window = window;
  fit.side = side;
  fit.points_used = used;
  fit.excluded = candidates - used;
  return fit;
}

}  // namespace detail

/// Least-squares line through (ln|x|, ln|f(x)|) for |x| in the window (0 < lo < hi).
inline DecayFit fit_decay(const SampledSignal& f, Interval window, Side side = Side::two_sided) {
  if (!(window.lo > 0.0) || !(window.hi > window.lo)) throw InvalidParameter("fit window must satisfy 0 < lo < hi");
  if (side != Side::two_sided) return detail::fit_one_side(f, window, side);
  const DecayFit l = detail::fit_one_side(f, window, Side::left);
  const DecayFit r = detail::fit_one_side(f, window, Side::right);
  DecayFit fit;
  fit.exponent = 0.5 * (l.exponent + r.exponent);
  fit.log_constant = 0.5 * (l.log_constant + r.log_constant);
  fit.r_squared = std::min(l.r_squared, r.r_squared);
  fit.window = window;
  fit.side = Side::two_sided;
  fit.points_used = l.points_used + r.points_used;
  fit.excluded = l.excluded + r.excluded;
  return fit;
}

// ---------------------------------------------------------------------------
// Bound certificates
// ---------------------------------------------------------------------------

using Transform = std::function<SampledSignal(const SampledSignal&)>;

inline constexpr double kCertificateGrowthLimit = 0.05;

struct BoundCertificate {
  int n = 0;                              // 0: 1/|x| bound; n >= 1: 1/|x|^(n+1) bound with n vanishing moments
  std::map<std::string, double> norms;    // norm bundle
  double norm_sum = 0.0;                  // sum entering the inequality
  double empirical_constant = 0.0;        // sup |H psi| (1 + |x|^(n+1)) / norm_sum on the given grid
  double argmax_x = 0.0;
  double doubled_span_constant = 0.0;     // same on a grid of twice the span
  double growth = 0.0;                    // doubled / original - 1
  bool stable = false;                    // growth < 5%
  Interval span{0.0, 0.0};
  Interval doubled_span{0.0, 0.0};

  std::string theorem() const { return n == 0 ? "T1" : "T2(" + std::to_string(n) + ")"; }
};

namespace detail {

inline SampledSignal power_weighted(const SampledSignal& f, int p) {
  return f.map([p](double x, double v) { return std::pow(x, p) * v; });
}

inline std::map<std::string, double> norm_bundle(const SampledSignal& psi, int n, double& sum) {
  std::map<std::string, double> b;
  b["psi_mixed"] = mixed_norm(psi);
  b["x_psi_mixed"] = mixed_norm(power_weighted(psi, 1));
  if (n == 0) {
    sum = b["psi_mixed"] + b["x_psi_mixed"];
  } else {
    b["x^" + std::to_string(n + 1) + "_psi_mixed"] = mixed_norm(power_weighted(psi, n + 1));
    b["x^" + std::to_string(n) + "_psi_l1"] = l1_norm(power_weighted(psi, n));
    sum = b["psi_mixed"] + b["x^" + std::to_string(n + 1) + "_psi_mixed"] + b["x^" + std::to_string(n) + "_psi_l1"];
  }
  return b;
}

inline double weighted_sup(const SampledSignal& hpsi, int n, double norm_sum, double* argmax = nullptr) {
  double best = 0.0, where = 0.0;
  for (std::size_t i = 0; i < hpsi.size(); ++i) {
    const double x = hpsi.x(i);
    const double c = std::abs(hpsi[i]) * (1.0 + std::pow(std::abs(x), n + 1)) / norm_sum;
    if (c > best) {
      best = c;
      where = x;
    }
  }
  if (argmax != nullptr) *argmax = where;
  return best;
}

/// Zero-extends f to a grid with (at least) twice the span, same step, same center.
inline SampledSignal zero_extend_doubled(const SampledSignal& f) {
  const Grid& g = f.grid();
  const std::size_t pad = g.count() / 2;
  const Grid wide(g.x_min() - static_cast<double>(pad) * g.step(), g.step(), g.count() + 2 * pad);
  std::vector<double> v(wide.count(), 0.0);
  std::copy(f.values().begin(), f.values().end(), v.begin() + static_cast<std::ptrdiff_t>(pad));
  return SampledSignal(wide, std::move(v));
}

}  // namespace detail

/**
 * Empirical constant of |H psi(x)| <= C (norm sum) / (1 + |x|^(n+1)).
 * The stability probe zero-extends psi to twice the span, transforms it again
 * with `transform` (PV quadrature by default) and compares the constants.
 */
inline BoundCertificate theorem_certificate(const SampledSignal& psi, const SampledSignal& hpsi, int n,
                                            const Transform& transform = {}) {
  if (n < 0) throw InvalidParameter("certificate order n must be nonnegative");
  detail::require_same_grid(psi, hpsi);
  const Transform tf = transform ? transform : Transform([](const SampledSignal& s) { return hilbert_pv(s); });

  BoundCertificate c;
  c.n = n;
  c.norms = detail::norm_bundle(psi, n, c.norm_sum);
  if (!(c.norm_sum > 0.0)) throw InvalidParameter("certificate needs a nonzero signal");
  c.empirical_constant = detail::weighted_sup(hpsi, n, c.norm_sum, &c.argmax_x);
  c.span = {psi.grid().x_min(), psi.grid().x_max()};

  const SampledSignal wide = detail::zero_extend_doubled(psi);
  double wide_sum = 0.0;
  detail::norm_bundle(wide, n, wide_sum);
  c.doubled_span_constant = detail::weighted_sup(tf(wide), n, wide_sum);
  c.doubled_span = {wide.grid().x_min(), wide.grid().x_max()};
  c.growth = c.doubled_span_constant / c.empirical_constant - 1.0;
  c.stable = std::isfinite(c.empirical_constant) && c.growth < kCertificateGrowthLimit;
  return c;
}

// ---------------------------------------------------------------------------
// Tail limit x Hf(x) -> (1/pi) int f
// ---------------------------------------------------------------------------

struct TailLimit {
  double x_probe = 0.0;
  double probe_value = 0.0;  // x_probe * Hf(x_probe)
  double predicted = 0.0;    // (1/pi) int f
};

inline TailLimit tail_limit(const SampledSignal& f, const SampledSignal& hf, double x_probe) {
  if (!hf.grid().contains(x_probe) || x_probe < hf.grid().x_min() || x_probe > hf.grid().x_max())
    throw OutOfGrid("probe " + std::to_string(x_probe) + " lies outside the grid");
  return {x_probe, x_probe * interpolate(hf, x_probe), integrate(f) / std::numbers::pi};
}

// ---------------------------------------------------------------------------
// Sobolev norms
// ---------------------------------------------------------------------------

/// (sum_k (1 + w_k^2)^gamma |f^(w_k)|^2 dw / 2 pi)^(1/2) over the DFT bins of f.
inline double sobolev_norm(const SampledSignal& f, double gamma) {
  if (!(gamma >= 0.0)) throw InvalidParameter("gamma must be nonnegative");
  const Spectrum s = dft(f);
  const double dw = s.frequency_step();
  double acc = 0.0;
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    const double w = s.frequencies[k];
    acc += std::pow(1.0 + w * w, gamma) * std::norm(s.values[k]);
  }
  return std::sqrt(acc * dw / (2.0 * std::numbers::pi));
}

inline constexpr double kSobolevStabilityLimit = 0.10;

struct SobolevEstimate {
  std::vector<double> gammas;
  std::vector<double> norms;         // at the given resolution
  std::vector<double> coarse_norms;  // at half the resolution
  std::vector<double> relative_change;
  std::vector<bool> stable;
  int smoothness_order = 0;  // largest n with a stable gamma > n + 1/2 (0 if none)
};

/// Every other sample of f, on a grid of twice the step.
inline SampledSignal decimate(const SampledSignal& f) {
  const Grid& g = f.grid();
  const std::size_t count = (g.count() + 1) / 2;
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = f[2 * i];
  return SampledSignal(Grid(g.x_min(), 2.0 * g.step(), count), std::move(v));
}

inline SobolevEstimate smoothness_profile(const SampledSignal& fine, const SampledSignal& coarse,
                                          const std::vector<double>& gammas) {
  if (gammas.empty()) throw InvalidParameter("gamma grid must not be empty");
  SobolevEstimate e;
  e.gammas = gammas;
  int order = -1;
  for (double gamma : gammas) {
    const double nf = sobolev_norm(fine, gamma);
    const double nc = sobolev_norm(coarse, gamma);
    const double change = nf > 0.0 ? std::abs(nf - nc) / nf : 0.0;
    const bool ok = change < kSobolevStabilityLimit;
    e.norms.push_back(nf);
    e.coarse_norms.push_back(nc);
    e.relative_change.push_back(change);
    e.stable.push_back(ok);
    if (ok && gamma > 0.5) order = std::max(order, static_cast<int>(std::ceil(gamma - 0.5)) - 1);
  }
  e.smoothness_order = std::max(order, 0);
  return e;
}

/// Coarse resolution obtained by decimating f by two.
inline SobolevEstimate smoothness_profile(const SampledSignal& f, const std::vector<double>& gammas) {
  return smoothness_profile(f, decimate(f), gammas);
}

// ---------------------------------------------------------------------------
// Modulation identity H[w cos] = w sin
// ---------------------------------------------------------------------------

inline constexpr double kBedrosianEdgeLimit = 1e-4;

/// Indices with |x - center| <= span / 4.
inline std::pair<std::size_t, std::size_t> central_half(const Grid& g) {
  const std::size_t quarter = (g.count() - 1) / 4;
  return {quarter, g.count() - 1 - quarter};
}

/// L-infinity distance between H[w cos(omega0 x)] (spectral) and w sin(omega0 x) on the central half-grid.
inline double bedrosian_residual(Window window, double omega0, const Grid& grid, SpectralConfig cfg = {}) {
  const double edge = std::max(window.envelope(grid.x_min()), window.envelope(grid.x_max()));
  if (edge > kBedrosianEdgeLimit)
    throw GridTooNarrow("window envelope is " + std::to_string(edge) + " at the grid edge");
  const SampledSignal modulated = sample(make_modulated_window(window, omega0, 0.0), grid);
  const SampledSignal expected = sample(make_modulated_window(window, omega0, -0.5 * std::numbers::pi), grid);
  const SampledSignal transformed = hilbert_spectral(modulated, cfg);
  const auto [lo, hi] = central_half(grid);
  double worst = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) worst = std::max(worst, std::abs(transformed[i] - expected[i]));
  return worst;
}

// ---------------------------------------------------------------------------
// Partition of unity
// ---------------------------------------------------------------------------

/// sum_{|k| <= K} g(x - k) - 1 with g the scaling function or its spectral Hilbert transform.
inline SampledSignal partition_deviation(const WaveletSpec& spec, int K, bool transformed, const Grid& grid,
                                         SpectralConfig cfg = {}) {
  if (!spec.is_scaling_function()) throw InvalidParameter("partition of unity applies to scaling functions only");
  if (K < 0) throw InvalidParameter("K must be nonnegative");
  const double per_unit = 1.0 / grid.step();
  const double rounded = std::round(per_unit);
  if (std::abs(per_unit - rounded) > 1e-9 * per_unit) throw InvalidParameter("grid step must divide 1");
  const auto shift = static_cast<std::size_t>(rounded);

  const Interval support = spec.support();
  const double reach = static_cast<double>(K) + std::max(std::abs(support.lo), std::abs(support.hi)) + 1.0;
  const std::size_t pad = static_cast<std::size_t>(std::ceil(reach)) * shift;
  const Grid wide(grid.x_min() - static_cast<double>(pad) * grid.step(), grid.step(), grid.count() + 2 * pad);
  SampledSignal g = sample(spec, wide);
  if (transformed) g = hilbert_spectral(g, cfg);

  std::vector<double> out(grid.count());
  for (std::size_t i = 0; i < grid.count(); ++i) {
    double sum = 0.0;
    for (int k = -K; k <= K; ++k) {
      // sample of g at x_i - k lives at wide index pad + i - k * shift
      const auto idx = static_cast<std::ptrdiff_t>(pad + i) - static_cast<std::ptrdiff_t>(k) * static_cast<std::ptrdiff_t>(shift);
      sum += g[static_cast<std::size_t>(idx)];
    }
    out[i] = sum - 1.0;
  }
  return SampledSignal(grid, std::move(out));
}

}  // namespace hwl
