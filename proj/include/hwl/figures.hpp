#pragma once

/**
 * @file figures.hpp
 * @brief Standalone SVG line plots and the three figure pipelines
 *        (scaling functions, the 1/(pi x) kernel, spline-wavelet pairs).
 */

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "hwl/error.hpp"
#include "hwl/hilbert.hpp"
#include "hwl/numerics.hpp"
#include "hwl/wavelets.hpp"

namespace hwl {

enum class StyleRole { original, transformed, kernel };

struct Trace {
  SampledSignal signal;
  StyleRole role;
  std::string label;
};

struct Panel {
  std::string title;
  std::vector<Trace> traces;
  Interval x_range;
  Interval y_range;  // samples outside are clipped and the line is broken there
};

struct FigureSpec {
  int figure_id = 0;
  std::string caption;
  std::vector<Panel> panels;
};

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

inline const char* stroke(StyleRole r) {
  switch (r) {
    case StyleRole::original: return "#1f4fd1";
    case StyleRole::transformed: return "#d12a1f";
    default: return "#000000";
  }
}

inline double nice_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

}  // namespace detail

inline std::string render_figure_svg(const FigureSpec& spec) {
  if (spec.figure_id < 1 || spec.figure_id > 3) throw InvalidParameter("figure id must be 1, 2 or 3");
  if (spec.panels.empty()) throw InvalidParameter("figure has no panels");

  constexpr double panel_w = 360, panel_h = 270, left = 55, right = 15, top = 35, bottom = 45;
  const double width = panel_w * static_cast<double>(spec.panels.size());
  const double height = panel_h + 30;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::fmt(width) << "\" height=\"" << detail::fmt(height)
      << "\" viewBox=\"0 0 " << detail::fmt(width) << ' ' << detail::fmt(height) << "\" font-family=\"sans-serif\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (std::size_t p = 0; p < spec.panels.size(); ++p) {
    const Panel& panel = spec.panels[p];
    if (panel.traces.empty()) throw InvalidParameter("panel '" + panel.title + "' has no traces");
    const double ox = panel_w * static_cast<double>(p);
    const double plot_w = panel_w - left - right, plot_h = panel_h - top - bottom;
    const auto [x0, x1] = panel.x_range;
    const auto [y0, y1] = panel.y_range;
    auto px = [&](double x) { return ox + left + (x - x0) / (x1 - x0) * plot_w; };
    auto py = [&](double y) { return top + (y1 - y) / (y1 - y0) * plot_h; };

    svg << "<g class=\"panel\" id=\"panel-" << p + 1 << "\">\n";
    svg << "<text x=\"" << detail::fmt(ox + left + plot_w / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">"
        << panel.title << "</text>\n";
    svg << "<rect x=\"" << detail::fmt(ox + left) << "\" y=\"" << detail::fmt(top) << "\" width=\"" << detail::fmt(plot_w)
        << "\" height=\"" << detail::fmt(plot_h) << "\" fill=\"none\" stroke=\"#444\"/>\n";

    const double xs = detail::nice_step(x1 - x0), ys = detail::nice_step(y1 - y0);
    for (double t = std::ceil(x0 / xs) * xs; t <= x1 + 1e-9 * xs; t += xs) {
      svg << "<line x1=\"" << detail::fmt(px(t)) << "\" y1=\"" << detail::fmt(top + plot_h) << "\" x2=\"" << detail::fmt(px(t))
          << "\" y2=\"" << detail::fmt(top + plot_h + 4) << "\" stroke=\"#444\"/>";
      svg << "<text x=\"" << detail::fmt(px(t)) << "\" y=\"" << detail::fmt(top + plot_h + 16)
          << "\" text-anchor=\"middle\" font-size=\"10\">" << detail::tick_label(t) << "</text>\n";
    }
    for (double t = std::ceil(y0 / ys) * ys; t <= y1 + 1e-9 * ys; t += ys) {
      svg << "<line x1=\"" << detail::fmt(ox + left - 4) << "\" y1=\"" << detail::fmt(py(t)) << "\" x2=\"" << detail::fmt(ox + left)
          << "\" y2=\"" << detail::fmt(py(t)) << "\" stroke=\"#444\"/>";
      svg << "<text x=\"" << detail::fmt(ox + left - 6) << "\" y=\"" << detail::fmt(py(t) + 3)
          << "\" text-anchor=\"end\" font-size=\"10\">" << detail::tick_label(t) << "</text>\n";
    }
    if (y0 < 0.0 && y1 > 0.0)
      svg << "<line x1=\"" << detail::fmt(px(x0)) << "\" y1=\"" << detail::fmt(py(0)) << "\" x2=\"" << detail::fmt(px(x1))
          << "\" y2=\"" << detail::fmt(py(0)) << "\" stroke=\"#bbb\" stroke-dasharray=\"3,3\"/>\n";
    svg << "<text x=\"" << detail::fmt(ox + left + plot_w / 2) << "\" y=\"" << detail::fmt(panel_h - 5)
        << "\" text-anchor=\"middle\" font-size=\"11\">x</text>\n";

    for (const Trace& tr : panel.traces) {
      const SampledSignal& s = tr.signal;
      const std::size_t stride = std::max<std::size_t>(1, s.size() / 1500);
      std::ostringstream d;
      bool pen_down = false;
      for (std::size_t i = 0; i < s.size(); i += stride) {
        const double x = s.x(i), y = s[i];
        if (x < x0 || x > x1 || y < y0 || y > y1) {
          pen_down = false;
          continue;
        }
        d << (pen_down ? " L" : " M") << detail::fmt(px(x)) << ',' << detail::fmt(py(y));
        pen_down = true;
      }
      svg << "<path class=\"" << (tr.role == StyleRole::original ? "original" : tr.role == StyleRole::transformed ? "transformed" : "kernel")
          << "\" fill=\"none\" stroke=\"" << detail::stroke(tr.role) << "\" stroke-width=\"1.5\" d=\"" << d.str() << "\">"
          << "<title>" << tr.label << "</title></path>\n";
    }
    svg << "</g>\n";
  }
  svg << "<text x=\"" << detail::fmt(width / 2) << "\" y=\"" << detail::fmt(height - 8)
      << "\" text-anchor=\"middle\" font-size=\"12\">" << spec.caption << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

inline void render_figure(const FigureSpec& spec, const std::filesystem::path& path) {
  const std::string text = render_figure_svg(spec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << text;
}

// ---------------------------------------------------------------------------
// Pipelines
// ---------------------------------------------------------------------------

namespace detail {

inline Panel transform_pair(const std::string& title, const WaveletSpec& spec, Interval range, Interval y_range,
                            const PvConfig& pv) {
  const Grid grid = Grid::from_range(range.lo, range.hi, 1.0 / 256);
  SampledSignal f = sample(spec, grid);
  SampledSignal hf = hilbert_pv(f, pv);
  return Panel{title, {Trace{std::move(f), StyleRole::original, spec.name()}, Trace{std::move(hf), StyleRole::transformed, "H " + spec.name()}},
               range, y_range};
}

}  // namespace detail

/// Figure 1: Haar scaling function and cubic B-spline with their transforms.
/// Figure 2: the kernel 1/(pi x). Figure 3: spline wavelets of degree 0..3 with their transforms.
inline FigureSpec make_figure(int id, const PvConfig& pv = {}) {
  switch (id) {
    case 1:
      return FigureSpec{1,
                        "Scaling functions (blue) and their Hilbert transforms (red)",
                        {detail::transform_pair("(a) Haar scaling function", make_haar_scaling_spec(), {-3, 4}, {-1.5, 1.5}, pv),
                         detail::transform_pair("(b) cubic B-spline", make_bspline_scaling(3), {-6, 6}, {-0.6, 0.8}, pv)}};
    case 2: {
      const double h = 1.0 / 256;
      const Grid grid(-5.0 + 0.5 * h, h, 2560);  // symmetric, never samples x = 0
      SampledSignal kernel = SampledSignal::from_function(grid, [](double x) { return 1.0 / (std::numbers::pi * x); });
      return FigureSpec{2, "Kernel 1/(pi x) of the Hilbert transform", {Panel{"1/(pi x)", {Trace{std::move(kernel), StyleRole::kernel, "1/(pi x)"}}, {-5, 5}, {-5, 5}}}};
    }
    case 3: {
      FigureSpec fig{3, "Spline wavelets (blue) and their Hilbert transforms (red)", {}};
      for (int d = 0; d <= 3; ++d)
        fig.panels.push_back(detail::transform_pair("degree " + std::to_string(d), make_spline_wavelet(d), {-6, 6}, {-2.0, 2.0}, pv));
      return fig;
    }
    default:
      throw InvalidParameter("figure id must be 1, 2 or 3");
  }
}

}  // namespace hwl
