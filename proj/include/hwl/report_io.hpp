#pragma once

/**
 * @file report_io.hpp
 * @brief Signal CSV files and JSON analysis reports.
 *
 * CSV: header `x,value`, one row per sample, 17 significant digits. Reading
 * checks that the abscissas are uniformly spaced to 1e-9 relative.
 *
 * JSON: one object per report with a `kind` discriminator, the tool version,
 * a digest of the inputs and the report fields. See docs/report-schema.md.
 */

#include <array>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>

#include "json.hpp"

#include "hwl/analysis.hpp"
#include "hwl/error.hpp"
#include "hwl/numerics.hpp"
#include "hwl/version.hpp"

namespace hwl {

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

inline std::optional<double> parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

}  // namespace detail

inline void write_signal_csv(const SampledSignal& f, std::ostream& out) {
  out << "x,value\n";
  for (std::size_t i = 0; i < f.size(); ++i) out << detail::format_double(f.x(i)) << ',' << detail::format_double(f[i]) << '\n';
}

inline void write_signal_csv(const SampledSignal& f, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  write_signal_csv(f, out);
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

inline SampledSignal read_signal_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty file", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,value") throw ParseError("expected header 'x,value'", 1);

  std::vector<double> xs, vs;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) throw ParseError("blank line", row);
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
      throw ParseError("expected two comma-separated fields", row);
    const auto x = detail::parse_double(std::string_view(line).substr(0, comma));
    const auto v = detail::parse_double(std::string_view(line).substr(comma + 1));
    if (!x || !v) throw ParseError("malformed number", row);
    if (!std::isfinite(*x) || !std::isfinite(*v)) throw ParseError("non-finite value", row);
    xs.push_back(*x);
    vs.push_back(*v);
  }
  if (xs.size() < 2) throw ParseError("need at least two samples", 0);

  const double step = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  if (!(step > 0.0)) throw ParseError("non-uniform grid: abscissas are not increasing", 2);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double expected = xs.front() + static_cast<double>(i) * step;
    if (std::abs(xs[i] - expected) > 1e-9 * step) throw ParseError("non-uniform grid", i + 2);
  }
  return SampledSignal(Grid(xs.front(), step, xs.size()), std::move(vs));
}

inline SampledSignal read_signal_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'", 0);
  return read_signal_csv(in);
}

// ---------------------------------------------------------------------------
// Digests
// ---------------------------------------------------------------------------

/// FNV-1a 64 over grid parameters and sample bits; stable across platforms with IEEE doubles.
class Digest {
 public:
  Digest& add(const SampledSignal& f) {
    add_double(f.grid().x_min());
    add_double(f.grid().step());
    add_u64(f.grid().count());
    for (double v : f.values()) add_double(v);
    return *this;
  }

  Digest& add(std::string_view s) {
    for (unsigned char c : s) mix(c);
    return *this;
  }

  Digest& add_double(double v) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, sizeof bits);
    return add_u64(bits);
  }

  std::string str() const {
    std::ostringstream os;
    os << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << state_;
    return os.str();
  }

 private:
  Digest& add_u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(v >> (8 * i)));
    return *this;
  }
  void mix(unsigned char c) {
    state_ ^= c;
    state_ *= 0x100000001b3ULL;
  }

  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

inline std::string digest_of(const SampledSignal& f) { return Digest().add(f).str(); }

// ---------------------------------------------------------------------------
// Report records not defined by the analysis module
// ---------------------------------------------------------------------------

struct BedrosianReport {
  std::string window;
  double sigma = 1.0;
  double omega0 = 0.0;
  Interval grid_range{0.0, 0.0};
  double grid_step = 0.0;
  double residual = 0.0;
};

struct PartitionReport {
  std::string scaling;
  int K = 0;
  bool transformed = false;
  Interval central{0.0, 0.0};
  double max_abs_deviation = 0.0;  // over the central region
  double min_abs_deviation = 0.0;
};

using Report = std::variant<MomentReport, DecayFit, BoundCertificate, SobolevEstimate, TailLimit, BedrosianReport,
                            PartitionReport>;

struct ReportMeta {
  std::string input_digest;
  std::optional<bool> pass;
};

struct ParsedReport {
  Report report;
  std::string tool_version;
  ReportMeta meta;
};

// ---------------------------------------------------------------------------
// JSON mapping
// ---------------------------------------------------------------------------

inline void to_json(nlohmann::json& j, const Interval& v) { j = nlohmann::json::array({v.lo, v.hi}); }
inline void from_json(const nlohmann::json& j, Interval& v) {
  if (!j.is_array() || j.size() != 2) throw SchemaError("interval must be a two-element array");
  v.lo = j.at(0).get<double>();
  v.hi = j.at(1).get<double>();
}

inline void to_json(nlohmann::json& j, const MomentReport& r) {
  j = {{"moments", r.moments},
       {"truncation_bound", r.truncation_bound},
       {"tolerance", r.tolerance},
       {"vanishing_count", r.vanishing_count}};
}
inline void from_json(const nlohmann::json& j, MomentReport& r) {
  j.at("moments").get_to(r.moments);
  j.at("truncation_bound").get_to(r.truncation_bound);
  j.at("tolerance").get_to(r.tolerance);
  j.at("vanishing_count").get_to(r.vanishing_count);
}

inline void to_json(nlohmann::json& j, const DecayFit& r) {
  j = {{"exponent", r.exponent},   {"log_constant", r.log_constant}, {"r_squared", r.r_squared},
       {"fit_window", r.window},   {"side", to_string(r.side)},      {"points_used", r.points_used},
       {"excluded", r.excluded}};
}
inline void from_json(const nlohmann::json& j, DecayFit& r) {
  j.at("exponent").get_to(r.exponent);
  j.at("log_constant").get_to(r.log_constant);
  j.at("r_squared").get_to(r.r_squared);
  j.at("fit_window").get_to(r.window);
  r.side = side_from_string(j.at("side").get<std::string>());
  j.at("points_used").get_to(r.points_used);
  j.at("excluded").get_to(r.excluded);
}

inline void to_json(nlohmann::json& j, const BoundCertificate& r) {
  j = {{"theorem", r.theorem()},
       {"n", r.n},
       {"norm_bundle", r.norms},
       {"norm_sum", r.norm_sum},
       {"empirical_constant", r.empirical_constant},
       {"argmax_x", r.argmax_x},
       {"doubled_span_constant", r.doubled_span_constant},
       {"growth", r.growth},
       {"stable", r.stable},
       {"span", r.span},
       {"doubled_span", r.doubled_span}};
}
inline void from_json(const nlohmann::json& j, BoundCertificate& r) {
  j.at("n").get_to(r.n);
  j.at("norm_bundle").get_to(r.norms);
  j.at("norm_sum").get_to(r.norm_sum);
  j.at("empirical_constant").get_to(r.empirical_constant);
  j.at("argmax_x").get_to(r.argmax_x);
  j.at("doubled_span_constant").get_to(r.doubled_span_constant);
  j.at("growth").get_to(r.growth);
  j.at("stable").get_to(r.stable);
  j.at("span").get_to(r.span);
  j.at("doubled_span").get_to(r.doubled_span);
}

inline void to_json(nlohmann::json& j, const SobolevEstimate& r) {
  j = {{"gammas", r.gammas},
       {"norms", r.norms},
       {"coarse_norms", r.coarse_norms},
       {"relative_change", r.relative_change},
       {"stable", r.stable},
       {"smoothness_order", r.smoothness_order}};
}
inline void from_json(const nlohmann::json& j, SobolevEstimate& r) {
  j.at("gammas").get_to(r.gammas);
  j.at("norms").get_to(r.norms);
  j.at("coarse_norms").get_to(r.coarse_norms);
  j.at("relative_change").get_to(r.relative_change);
  j.at("stable").get_to(r.stable);
  j.at("smoothness_order").get_to(r.smoothness_order);
}

inline void to_json(nlohmann::json& j, const TailLimit& r) {
  j = {{"x_probe", r.x_probe}, {"probe_value", r.probe_value}, {"predicted", r.predicted}};
}
inline void from_json(const nlohmann::json& j, TailLimit& r) {
  j.at("x_probe").get_to(r.x_probe);
  j.at("probe_value").get_to(r.probe_value);
  j.at("predicted").get_to(r.predicted);
}

inline void to_json(nlohmann::json& j, const BedrosianReport& r) {
  j = {{"window", r.window},         {"sigma", r.sigma},         {"omega0", r.omega0},
       {"grid_range", r.grid_range}, {"grid_step", r.grid_step}, {"residual", r.residual}};
}
inline void from_json(const nlohmann::json& j, BedrosianReport& r) {
  j.at("window").get_to(r.window);
  j.at("sigma").get_to(r.sigma);
  j.at("omega0").get_to(r.omega0);
  j.at("grid_range").get_to(r.grid_range);
  j.at("grid_step").get_to(r.grid_step);
  j.at("residual").get_to(r.residual);
}

inline void to_json(nlohmann::json& j, const PartitionReport& r) {
  j = {{"scaling", r.scaling},
       {"K", r.K},
       {"transformed", r.transformed},
       {"central", r.central},
       {"max_abs_deviation", r.max_abs_deviation},
       {"min_abs_deviation", r.min_abs_deviation}};
}
inline void from_json(const nlohmann::json& j, PartitionReport& r) {
  j.at("scaling").get_to(r.scaling);
  j.at("K").get_to(r.K);
  j.at("transformed").get_to(r.transformed);
  j.at("central").get_to(r.central);
  j.at("max_abs_deviation").get_to(r.max_abs_deviation);
  j.at("min_abs_deviation").get_to(r.min_abs_deviation);
}

namespace detail {

template <class T>
struct ReportKind;
template <> struct ReportKind<MomentReport> { static constexpr const char* name = "moment_report"; };
template <> struct ReportKind<DecayFit> { static constexpr const char* name = "decay_fit"; };
template <> struct ReportKind<BoundCertificate> { static constexpr const char* name = "bound_certificate"; };
template <> struct ReportKind<SobolevEstimate> { static constexpr const char* name = "sobolev_estimate"; };
template <> struct ReportKind<TailLimit> { static constexpr const char* name = "tail_limit"; };
template <> struct ReportKind<BedrosianReport> { static constexpr const char* name = "bedrosian"; };
template <> struct ReportKind<PartitionReport> { static constexpr const char* name = "partition"; };

template <std::size_t I = 0>
Report report_from_kind(const std::string& kind, const nlohmann::json& j) {
  if constexpr (I == std::variant_size_v<Report>) {
    throw SchemaError("unknown report kind '" + kind + "'");
  } else {
    using T = std::variant_alternative_t<I, Report>;
    if (kind == ReportKind<T>::name) return Report(std::in_place_index<I>, j.get<T>());
    return report_from_kind<I + 1>(kind, j);
  }
}

}  // namespace detail

inline nlohmann::json report_to_json(const Report& report, const ReportMeta& meta = {}) {
  nlohmann::json j = std::visit([](const auto& r) { return nlohmann::json(r); }, report);
  j["kind"] = std::visit([](const auto& r) { return std::string(detail::ReportKind<std::decay_t<decltype(r)>>::name); }, report);
  j["tool_version"] = kToolVersion;
  j["input_digest"] = meta.input_digest;
  if (meta.pass) j["pass"] = *meta.pass;
  return j;
}

inline ParsedReport report_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("report must be a JSON object");
  if (!j.contains("kind") || !j["kind"].is_string()) throw SchemaError("report lacks a string 'kind'");
  try {
    ParsedReport p{detail::report_from_kind(j["kind"].get<std::string>(), j), j.value("tool_version", ""),
                   ReportMeta{j.value("input_digest", ""), std::nullopt}};
    if (j.contains("pass")) p.meta.pass = j["pass"].get<bool>();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("report does not match its schema: ") + e.what());
  } catch (const InvalidParameter& e) {
    throw SchemaError(std::string("report does not match its schema: ") + e.what());
  }
}

/// Pretty-printed with two-space indentation and sorted keys; byte-identical for identical inputs.
inline std::string report_json_text(const Report& report, const ReportMeta& meta = {}) {
  return report_to_json(report, meta).dump(2) + "\n";
}

inline void write_report_json(const Report& report, const std::filesystem::path& path, const ReportMeta& meta = {}) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << report_json_text(report, meta);
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

inline ParsedReport read_report_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  return report_from_json(j);
}

}  // namespace hwl
