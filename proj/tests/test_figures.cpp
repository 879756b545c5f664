#include <filesystem>
#include <fstream>
#include <string>

#include "catch_amalgamated.hpp"

#include "hwl/figures.hpp"

using namespace hwl;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("figure 1 has two panels with original and transform") {
  const FigureSpec spec = make_figure(1);
  REQUIRE(spec.panels.size() == 2);
  for (const Panel& p : spec.panels) {
    REQUIRE(p.traces.size() == 2);
    CHECK(p.traces[0].role == StyleRole::original);
    CHECK(p.traces[1].role == StyleRole::transformed);
  }
  CHECK(spec.panels[0].traces[0].label == "haar-scaling");
  CHECK(spec.panels[1].traces[0].label == "bspline-scaling,3");
  const std::string svg = render_figure_svg(spec);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(count(svg, "class=\"panel\"") == 2);
  CHECK(count(svg, "class=\"original\"") == 2);
  CHECK(count(svg, "class=\"transformed\"") == 2);
  CHECK(count(svg, "#1f4fd1") == 2);
  CHECK(count(svg, "#d12a1f") == 2);
  CHECK(count(svg, ">x</text>") == 2);
}

TEST_CASE("figure 2 is one kernel panel clipped at |y| <= 5") {
  const FigureSpec spec = make_figure(2);
  REQUIRE(spec.panels.size() == 1);
  REQUIRE(spec.panels[0].traces.size() == 1);
  CHECK(spec.panels[0].traces[0].role == StyleRole::kernel);
  CHECK(spec.panels[0].y_range.hi == 5.0);
  CHECK(spec.panels[0].y_range.lo == -5.0);
  const std::string svg = render_figure_svg(spec);
  CHECK(count(svg, "class=\"kernel\"") == 1);

  // The path breaks at the clipped column: two subpaths, one per branch of the hyperbola.
  const std::size_t tag = svg.find("class=\"kernel\"");
  REQUIRE(tag != std::string::npos);
  const std::size_t open = svg.find("d=\"", tag) + 3;
  const std::string d = svg.substr(open, svg.find('"', open) - open);
  CHECK(count(d, "M") == 2);
}

TEST_CASE("figure 3 has four spline-wavelet panels") {
  const FigureSpec spec = make_figure(3);
  REQUIRE(spec.panels.size() == 4);
  for (int d = 0; d <= 3; ++d) CHECK(spec.panels[static_cast<std::size_t>(d)].traces[0].label == "spline-wavelet," + std::to_string(d));
  const std::string svg = render_figure_svg(spec);
  CHECK(count(svg, "class=\"panel\"") == 4);
  CHECK(count(svg, "class=\"transformed\"") == 4);
}

TEST_CASE("clipping breaks paths at out-of-range samples") {
  const SampledSignal s(Grid(0.0, 1.0, 5), {0.0, 0.5, 3.0, 0.5, 0.0});
  const FigureSpec spec{1, "t", {Panel{"p", {Trace{s, StyleRole::original, "s"}}, {0, 4}, {-1, 1}}}};
  const std::string svg = render_figure_svg(spec);
  CHECK(count(svg, " M") == 2);
  CHECK(count(svg, " L") == 2);
}

TEST_CASE("invalid figures") {
  CHECK_THROWS_AS(make_figure(0), InvalidParameter);
  CHECK_THROWS_AS(make_figure(4), InvalidParameter);
  CHECK_THROWS_AS(render_figure_svg(FigureSpec{1, "empty", {}}), InvalidParameter);
  CHECK_THROWS_AS(render_figure_svg(FigureSpec{5, "bad id", make_figure(2).panels}), InvalidParameter);
  const SampledSignal s(Grid(0.0, 1.0, 2), {0.0, 1.0});
  CHECK_THROWS_AS(render_figure_svg(FigureSpec{1, "no traces", {Panel{"p", {}, {0, 1}, {0, 1}}}}), InvalidParameter);
}

TEST_CASE("rendering is deterministic and writes a file") {
  const auto path = std::filesystem::temp_directory_path() / "hwl_test_figure_2.svg";
  render_figure(make_figure(2), path);
  std::ifstream in(path);
  const std::string text((std::istreambuf_iterator<char>(in)), {});
  CHECK(text == render_figure_svg(make_figure(2)));
  CHECK(text.find("</svg>") != std::string::npos);
}
