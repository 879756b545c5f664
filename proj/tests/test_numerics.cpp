#include <cmath>
#include <numbers>
#include <random>

#include "catch_amalgamated.hpp"

#include "hwl/numerics.hpp"

using namespace hwl;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("grid count follows floor((max - min) / step) + 1") {
  CHECK(Grid::from_range(-64, 64, 0.00390625).count() == 32769);
  CHECK(Grid::from_range(0, 1, 0.3).count() == 4);
  CHECK(Grid::from_range(0, 1, 0.1).count() == 11);
  const Grid g = Grid::from_range(-2, 2, 0.5);
  CHECK(g.x_max() == 2.0);
  CHECK(g.center() == 0.0);
  CHECK(g.span() == 4.0);
}

TEST_CASE("grid rejects degenerate parameters") {
  CHECK_THROWS_AS(Grid(0.0, 0.0, 10), InvalidParameter);
  CHECK_THROWS_AS(Grid(0.0, -1.0, 10), InvalidParameter);
  CHECK_THROWS_AS(Grid(0.0, 1.0, 1), InvalidParameter);
  CHECK_THROWS_AS(Grid::from_range(1, 1, 0.1), InvalidParameter);
  CHECK_THROWS_AS(Grid(std::nan(""), 1.0, 4), InvalidParameter);
}

TEST_CASE("nearest_index and contains") {
  const Grid g(-1.0, 0.25, 9);
  CHECK(g.nearest_index(0.0) == 4);
  CHECK(g.nearest_index(0.1) == 4);
  CHECK(g.nearest_index(0.2) == 5);
  CHECK(g.nearest_index(-1.1) == 0);
  CHECK_THROWS_AS(g.nearest_index(1.2), OutOfGrid);
  CHECK(g.contains(1.1));
  CHECK_FALSE(g.contains(1.2));
}

TEST_CASE("sampled signal validates its samples") {
  const Grid g(0.0, 1.0, 3);
  CHECK_THROWS_AS(SampledSignal(g, {1.0, 2.0}), InvalidParameter);
  CHECK_THROWS_AS(SampledSignal(g, {1.0, INFINITY, 2.0}), InvalidParameter);
  CHECK_THROWS_AS(SampledSignal(g, {1.0, NAN, 2.0}), InvalidParameter);
  const SampledSignal a(g, {1.0, 2.0, 3.0});
  const SampledSignal b(Grid(0.0, 0.5, 3), {1.0, 2.0, 3.0});
  CHECK_THROWS_AS(a + b, InvalidParameter);
  const SampledSignal c = a + 2.0 * a - a;
  CHECK(c[2] == 6.0);
}

TEST_CASE("trapezoid rule") {
  const Grid g = Grid::from_range(-1, 3, 0.01);
  // exact for linear functions
  CHECK_THAT(integrate(SampledSignal::from_function(g, [](double x) { return 2 * x + 1; })), WithinAbs(12.0, 1e-12));
  // error -(b-a) h^2 f''/12 for x^2
  CHECK_THAT(integrate(SampledSignal::from_function(g, [](double x) { return x * x; })),
             WithinAbs(28.0 / 3.0 + 4.0 * 1e-4 * 2.0 / 12.0, 1e-10));
  const Grid wide = Grid::from_range(-12, 12, 1.0 / 64);
  CHECK_THAT(integrate(SampledSignal::from_function(wide, [](double x) { return std::exp(-0.5 * x * x); })),
             WithinRel(std::sqrt(2 * std::numbers::pi), 1e-13));
}

TEST_CASE("central differences are exact on quadratics inside the grid") {
  const Grid g = Grid::from_range(0, 1, 0.125);
  const SampledSignal d = derivative(SampledSignal::from_function(g, [](double x) { return 3 * x * x - x; }));
  for (std::size_t i = 1; i + 1 < g.count(); ++i) CHECK_THAT(d[i], WithinAbs(6 * g.x(i) - 1, 1e-12));
  CHECK_THAT(d[0], WithinAbs((3 * 0.125 * 0.125 - 0.125) / 0.125, 1e-12));
}

TEST_CASE("norms") {
  const Grid g = Grid::from_range(-1, 1, 0.001);
  const SampledSignal f = SampledSignal::from_function(g, [](double x) { return x; });
  CHECK_THAT(l1_norm(f), WithinAbs(1.0, 1e-6));
  CHECK(sup_norm(f) == 1.0);
  CHECK_THAT(l2_norm(f), WithinAbs(std::sqrt(2.0 / 3.0), 1e-6));
  CHECK_THAT(mixed_norm(f), WithinAbs(2.0, 1e-6));
}

TEST_CASE("linear interpolation") {
  const SampledSignal f(Grid(0.0, 1.0, 3), {0.0, 2.0, 6.0});
  CHECK(interpolate(f, 0.5) == 1.0);
  CHECK(interpolate(f, 1.75) == 5.0);
  CHECK(interpolate(f, 2.0) == 6.0);
  CHECK_THROWS_AS(interpolate(f, 2.5), OutOfGrid);
}

TEST_CASE("bin frequencies fold into (-pi/h, pi/h]") {
  CHECK(bin_frequency(0, 8, 0.5) == 0.0);
  CHECK_THAT(bin_frequency(4, 8, 0.5), WithinAbs(std::numbers::pi / 0.5, 1e-15));
  CHECK_THAT(bin_frequency(5, 8, 0.5), WithinAbs(-3 * 2 * std::numbers::pi / 4.0, 1e-15));
  CHECK_THAT(bin_frequency(4, 9, 1.0), WithinAbs(2 * std::numbers::pi * 4 / 9, 1e-15));
  CHECK_THAT(bin_frequency(5, 9, 1.0), WithinAbs(-2 * std::numbers::pi * 4 / 9, 1e-15));
}

TEST_CASE("dft approximates the continuous transform of a Gaussian") {
  // int exp(-x^2/2) exp(-i w x) dx = sqrt(2 pi) exp(-w^2/2); the grid is off-center to exercise the phase factor
  const Grid g(-15.0, 1.0 / 32, 1200);
  const Spectrum s = dft(SampledSignal::from_function(g, [](double x) { return std::exp(-0.5 * x * x); }));
  double worst = 0.0;
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    const double w = s.frequencies[k];
    worst = std::max(worst, std::abs(s.values[k] - complex(std::sqrt(2 * std::numbers::pi) * std::exp(-0.5 * w * w), 0.0)));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("Parseval with the documented normalization") {
  std::mt19937 rng(1234);
  std::normal_distribution<double> nd;
  std::vector<double> v(777);
  for (double& x : v) x = nd(rng);
  const SampledSignal f(Grid(-3.0, 0.01, v.size()), v);
  const Spectrum s = dft(f);
  double time_energy = 0.0, freq_energy = 0.0;
  for (double x : v) time_energy += x * x * 0.01;
  for (const complex& z : s.values) freq_energy += std::norm(z);
  freq_energy *= s.frequency_step() / (2 * std::numbers::pi);
  CHECK_THAT(freq_energy, WithinRel(time_energy, 1e-12));
}

TEST_CASE("idft inverts dft") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  for (std::size_t n : {2u, 17u, 256u, 1001u}) {
    std::vector<double> v(n);
    for (double& x : v) x = ud(rng);
    const SampledSignal f(Grid(ud(rng), 0.37, n), v);
    const SampledSignal back = idft(dft(f));
    for (std::size_t i = 0; i < n; ++i) CHECK_THAT(back[i], WithinAbs(f[i], 1e-13));
  }
}
