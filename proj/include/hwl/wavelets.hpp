#pragma once

/**
 * @file wavelets.hpp
 * @brief Test-function generators: Haar family, centered B-splines,
 *        compactly supported semi-orthogonal spline wavelets and modulated windows.
 *
 * B-splines are evaluated with the Cox-de Boor recursion on integer knots.
 * Intervals are half-open: a degree-0 spline is 1 on [-1/2, 1/2) and the
 * Haar wavelet is -1 at x = 0.
 *
 * Spline wavelet of order m = degree + 1 (Chui-Wang):
 *
 *     psi(x) = sum_{k=0}^{3m-2} q_k N_m(2x - k),
 *     q_k    = (-1)^k / 2^(m-1) * sum_{l=0}^{m} C(m,l) N_{2m}(k - l + 1),
 *
 * with N_m the cardinal B-spline of order m on [0, m]. The raw support is
 * [0, 2m - 1]; the generator shifts it to be centered at 0 and rescales it to
 * unit L2 norm. It has m vanishing moments.
 */

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "hwl/error.hpp"
#include "hwl/numerics.hpp"

namespace hwl {

inline constexpr int kMaxSplineDegree = 20;

/// levels[i] on [breakpoints[i], breakpoints[i+1]), zero elsewhere.
class PiecewiseConstant {
 public:
  PiecewiseConstant(std::vector<double> breakpoints, std::vector<double> levels)
      : breakpoints_(std::move(breakpoints)), levels_(std::move(levels)) {
    if (breakpoints_.size() < 2 || levels_.size() + 1 != breakpoints_.size())
      throw InvalidParameter("piecewise constant needs m+1 breakpoints for m levels");
    for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i)
      if (!(breakpoints_[i] < breakpoints_[i + 1])) throw InvalidParameter("breakpoints must be strictly increasing");
  }

  double operator()(double x) const {
    if (x < breakpoints_.front() || x >= breakpoints_.back()) return 0.0;
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    return levels_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
  }

  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  const std::vector<double>& levels() const noexcept { return levels_; }

 private:
  std::vector<double> breakpoints_;
  std::vector<double> levels_;
};

/// +1 on [-1, 0), -1 on [0, 1).
inline PiecewiseConstant make_haar_wavelet() { return PiecewiseConstant({-1.0, 0.0, 1.0}, {1.0, -1.0}); }

/// Unit box on [0, 1).
inline PiecewiseConstant make_haar_scaling() { return PiecewiseConstant({0.0, 1.0}, {1.0}); }

inline PiecewiseConstant make_box(double a, double b) { return PiecewiseConstant({a, b}, {1.0}); }

// ---------------------------------------------------------------------------
// Cardinal B-splines
// ---------------------------------------------------------------------------

/**
 * Values of every order-m cardinal B-spline that is nonzero at y, i.e.
 * out[r] = N_m(y - (floor(y) - m + 1 + r)) for r = 0..m-1 (Cox-de Boor triangle).
 */
inline void cardinal_bspline_basis(int order, double y, std::vector<double>& out) {
  const double i = std::floor(y);
  const double u = y - i;
  out.assign(static_cast<std::size_t>(order), 0.0);
  out[0] = 1.0;
  std::vector<double> left(static_cast<std::size_t>(order)), right(static_cast<std::size_t>(order));
  for (int j = 1; j < order; ++j) {
    left[static_cast<std::size_t>(j)] = u + j - 1;
    right[static_cast<std::size_t>(j)] = j - u;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double temp = out[static_cast<std::size_t>(r)] / j;
      out[static_cast<std::size_t>(r)] = saved + right[static_cast<std::size_t>(r + 1)] * temp;
      saved = left[static_cast<std::size_t>(j - r)] * temp;
    }
    out[static_cast<std::size_t>(j)] = saved;
  }
}

/// Cardinal B-spline of the given order (degree order-1) supported on [0, order).
inline double cardinal_bspline(int order, double y) {
  if (!(y >= 0.0) || y >= order) return 0.0;
  std::vector<double> basis;
  cardinal_bspline_basis(order, y, basis);
  const auto r = static_cast<std::size_t>(order - 1 - static_cast<int>(std::floor(y)));
  return basis[r];
}

/// Centered B-spline of the given degree, supported on [-(d+1)/2, (d+1)/2).
inline double bspline(int degree, double x) { return cardinal_bspline(degree + 1, x + 0.5 * (degree + 1)); }

// ---------------------------------------------------------------------------
// Generator specifications
// ---------------------------------------------------------------------------

struct Interval {
  double lo;
  double hi;
  double length() const { return hi - lo; }
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
};

enum class WindowKind { sinc2, gauss };

/// Localization window for modulated test functions.
struct Window {
  WindowKind kind = WindowKind::sinc2;
  double sigma = 1.0;  // gauss only

  double operator()(double x) const {
    if (kind == WindowKind::gauss) return std::exp(-0.5 * (x / sigma) * (x / sigma));
    if (std::abs(x) < 1e-4) {
      const double x2 = x * x;
      return 1.0 - x2 / 3.0 + 2.0 * x2 * x2 / 45.0;
    }
    const double s = std::sin(x) / x;
    return s * s;
  }

  /// Upper bound of |w| at distance |x| from the origin.
  double envelope(double x) const {
    if (kind == WindowKind::gauss) return (*this)(x);
    return std::min(1.0, 1.0 / (x * x));
  }

  std::string name() const { return kind == WindowKind::sinc2 ? "sinc2" : "gauss"; }
};

namespace kind {

struct HaarScaling {};
struct HaarWavelet {};
struct BSplineScaling {
  int degree;
};
struct SplineWavelet {
  int degree;
  std::vector<double> coefficients;  // q_k, k = 0..3m-2
  double scale;                      // unit-L2 normalization
};
struct ModulatedWindow {
  Window window;
  double omega0;
  double phase;
};
struct Box {
  double a;
  double b;
};

}  // namespace kind

/// A test function: which family it belongs to plus its parameters.
class WaveletSpec {
 public:
  using Kind = std::variant<kind::HaarScaling, kind::HaarWavelet, kind::BSplineScaling, kind::SplineWavelet,
                            kind::ModulatedWindow, kind::Box>;

  explicit WaveletSpec(Kind k) : kind_(std::move(k)) {}

  const Kind& kind() const noexcept { return kind_; }

  double operator()(double x) const {
    return std::visit(
        [x](const auto& k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, kind::HaarScaling>) {
            static const PiecewiseConstant haar = make_haar_scaling();
            return haar(x);
          } else if constexpr (std::is_same_v<K, kind::HaarWavelet>) {
            static const PiecewiseConstant haar = make_haar_wavelet();
            return haar(x);
          } else if constexpr (std::is_same_v<K, kind::BSplineScaling>) {
            return bspline(k.degree, x);
          } else if constexpr (std::is_same_v<K, kind::SplineWavelet>) {
            return k.scale * raw_spline_wavelet(k, x);
          } else if constexpr (std::is_same_v<K, kind::ModulatedWindow>) {
            return k.window(x) * std::cos(k.omega0 * x + k.phase);
          } else {
            return (x >= k.a && x < k.b) ? 1.0 : 0.0;
          }
        },
        kind_);
  }

  Interval support() const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return std::visit(
        [](const auto& k) -> Interval {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, kind::HaarScaling>) {
            return {0.0, 1.0};
          } else if constexpr (std::is_same_v<K, kind::HaarWavelet>) {
            return {-1.0, 1.0};
          } else if constexpr (std::is_same_v<K, kind::BSplineScaling>) {
            return {-0.5 * (k.degree + 1), 0.5 * (k.degree + 1)};
          } else if constexpr (std::is_same_v<K, kind::SplineWavelet>) {
            const double half = 0.5 * (2 * (k.degree + 1) - 1);
            return {-half, half};
          } else if constexpr (std::is_same_v<K, kind::ModulatedWindow>) {
            return {-inf, inf};
          } else {
            return {k.a, k.b};
          }
        },
        kind_);
  }

  bool is_scaling_function() const {
    return std::holds_alternative<kind::HaarScaling>(kind_) || std::holds_alternative<kind::BSplineScaling>(kind_);
  }

  std::string name() const {
    return std::visit(
        [](const auto& k) -> std::string {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, kind::HaarScaling>) return "haar-scaling";
          else if constexpr (std::is_same_v<K, kind::HaarWavelet>) return "haar-wavelet";
          else if constexpr (std::is_same_v<K, kind::BSplineScaling>) return "bspline-scaling," + std::to_string(k.degree);
          else if constexpr (std::is_same_v<K, kind::SplineWavelet>) return "spline-wavelet," + std::to_string(k.degree);
          else if constexpr (std::is_same_v<K, kind::ModulatedWindow>) return k.window.name() + "-cos";
          else return "box";
        },
        kind_);
  }

  /// Unnormalized Chui-Wang wavelet, centered at the origin.
  static double raw_spline_wavelet(const kind::SplineWavelet& k, double x) {
    const int m = k.degree + 1;
    const double y = 2.0 * (x + 0.5 * (2 * m - 1));  // argument of N_m(y - j)
    if (!(y >= 0.0) || y >= static_cast<double>(3 * m - 2 + m)) return 0.0;
    thread_local std::vector<double> basis;
    cardinal_bspline_basis(m, y, basis);
    const int first = static_cast<int>(std::floor(y)) - m + 1;
    double sum = 0.0;
    for (int r = 0; r < m; ++r) {
      const int j = first + r;
      if (j >= 0 && j < static_cast<int>(k.coefficients.size()))
        sum += k.coefficients[static_cast<std::size_t>(j)] * basis[static_cast<std::size_t>(r)];
    }
    return sum;
  }

 private:
  Kind kind_;
};

namespace detail {

inline void check_degree(int degree) {
  if (degree < 0 || degree > kMaxSplineDegree)
    throw InvalidParameter("spline degree must lie in [0, " + std::to_string(kMaxSplineDegree) + "]");
}

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace detail

inline WaveletSpec make_haar_scaling_spec() { return WaveletSpec(kind::HaarScaling{}); }
inline WaveletSpec make_haar_wavelet_spec() { return WaveletSpec(kind::HaarWavelet{}); }
inline WaveletSpec make_box_spec(double a, double b) {
  if (!(a < b)) throw InvalidParameter("box requires a < b");
  return WaveletSpec(kind::Box{a, b});
}

inline WaveletSpec make_bspline_scaling(int degree) {
  detail::check_degree(degree);
  return WaveletSpec(kind::BSplineScaling{degree});
}

inline WaveletSpec make_spline_wavelet(int degree) {
  detail::check_degree(degree);
  const int m = degree + 1;
  kind::SplineWavelet w{degree, std::vector<double>(static_cast<std::size_t>(3 * m - 1)), 1.0};
  const double norm = std::ldexp(1.0, -(m - 1));
  for (int k = 0; k <= 3 * m - 2; ++k) {
    double s = 0.0;
    for (int l = 0; l <= m; ++l) s += detail::binomial(m, l) * cardinal_bspline(2 * m, k - l + 1);
    w.coefficients[static_cast<std::size_t>(k)] = ((k % 2 == 0) ? norm : -norm) * s;
  }
  // Exact L2 norm: psi is a polynomial of degree m-1 on each half-integer piece.
  using gauss = boost::math::quadrature::gauss<double, 30>;
  const double half = 0.5 * (2 * m - 1);
  double energy = 0.0;
  for (int piece = 0; piece < 2 * (2 * m - 1); ++piece) {
    const double a = -half + 0.5 * piece;
    energy += gauss::integrate(
        [&](double x) {
          const double v = WaveletSpec::raw_spline_wavelet(w, x);
          return v * v;
        },
        a, a + 0.5);
  }
  w.scale = 1.0 / std::sqrt(energy);
  return WaveletSpec(std::move(w));
}

/// x -> w(x) cos(omega0 x + phase).
inline WaveletSpec make_modulated_window(Window window, double omega0, double phase = 0.0) {
  if (!std::isfinite(omega0) || omega0 < 0.0) throw InvalidParameter("omega0 must be finite and nonnegative");
  if (!std::isfinite(phase)) throw InvalidParameter("phase must be finite");
  if (window.kind == WindowKind::gauss && !(window.sigma > 0.0)) throw InvalidParameter("gauss sigma must be positive");
  return WaveletSpec(kind::ModulatedWindow{window, omega0, phase});
}

template <class F>
  requires std::is_invocable_r_v<double, const F&, double>
SampledSignal sample(const F& f, const Grid& grid) {
  return SampledSignal::from_function(grid, f);
}

}  // namespace hwl
