// hwl: generate test signals, transform them, analyze the result and draw figures.
//
//   hwl gen --wavelet spline-wavelet,3 --grid -32:32:0.00390625 --out psi.csv
//   hwl hilbert --method pv --in psi.csv --out hpsi.csv
//   hwl analyze decay --in hpsi.csv --window 3:12 --json decay.json
//   hwl figure --id 3 --out fig3.svg
//
// Exit codes: 0 success, 2 usage error, 3 data error.

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hwl/hwl.hpp"

namespace {

using json = nlohmann::json;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double number(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* first = text.data();
  if (!text.empty() && text.front() == '+') ++first;
  const auto res = std::from_chars(first, text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(v))
    throw UsageError("invalid number '" + text + "' in " + what);
  return v;
}

int integer(const std::string& text, const std::string& what) {
  const double v = number(text, what);
  if (v != std::floor(v) || std::abs(v) > 1e6) throw UsageError("expected an integer in " + what + ", got '" + text + "'");
  return static_cast<int>(v);
}

// min:max:step
hwl::Grid parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw UsageError("grid must be min:max:step, got '" + text + "'");
  const double lo = number(parts[0], "--grid"), hi = number(parts[1], "--grid"), step = number(parts[2], "--grid");
  if (!(lo < hi)) throw UsageError("grid needs min < max");
  if (!(step > 0.0)) throw UsageError("grid needs step > 0");
  if ((hi - lo) / step > 16777216.0) throw UsageError("grid has more than 2^24 intervals");
  return hwl::Grid::from_range(lo, hi, step);
}

hwl::Interval parse_interval(const std::string& text, const std::string& what) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw UsageError(what + " must be a:b, got '" + text + "'");
  return {number(parts[0], what), number(parts[1], what)};
}

void expect_params(const std::vector<std::string>& parts, std::size_t lo, std::size_t hi) {
  const std::size_t n = parts.size() - 1;
  if (n < lo || n > hi)
    throw UsageError("generator '" + parts[0] + "' takes " + (lo == hi ? std::to_string(lo) : std::to_string(lo) + " to " + std::to_string(hi)) +
                     " parameter(s), got " + std::to_string(n));
}

hwl::WaveletSpec parse_wavelet(const std::string& text) {
  const auto p = split(text, ',');
  const std::string& name = p[0];
  const std::string what = "--wavelet " + text;
  try {
    if (name == "haar-scaling") {
      expect_params(p, 0, 0);
      return hwl::make_haar_scaling_spec();
    }
    if (name == "haar-wavelet") {
      expect_params(p, 0, 0);
      return hwl::make_haar_wavelet_spec();
    }
    if (name == "bspline-scaling") {
      expect_params(p, 1, 1);
      return hwl::make_bspline_scaling(integer(p[1], what));
    }
    if (name == "spline-wavelet") {
      expect_params(p, 1, 1);
      return hwl::make_spline_wavelet(integer(p[1], what));
    }
    if (name == "sinc2-cos") {
      expect_params(p, 1, 2);
      return hwl::make_modulated_window({hwl::WindowKind::sinc2, 1.0}, number(p[1], what), p.size() > 2 ? number(p[2], what) : 0.0);
    }
    if (name == "gauss-cos") {
      expect_params(p, 2, 3);
      return hwl::make_modulated_window({hwl::WindowKind::gauss, number(p[1], what)}, number(p[2], what),
                                        p.size() > 3 ? number(p[3], what) : 0.0);
    }
    if (name == "box") {
      expect_params(p, 2, 2);
      return hwl::make_box_spec(number(p[1], what), number(p[2], what));
    }
  } catch (const hwl::InvalidParameter& e) {
    throw UsageError(std::string(e.what()));
  }
  throw UsageError("unknown wavelet '" + name +
                   "'; expected haar-scaling, haar-wavelet, bspline-scaling,d, spline-wavelet,d, sinc2-cos,w0[,phase], "
                   "gauss-cos,sigma,w0[,phase] or box,a,b");
}

hwl::Window parse_window(const std::string& text) {
  const auto p = split(text, ',');
  if (p[0] == "sinc2" && p.size() == 1) return {hwl::WindowKind::sinc2, 1.0};
  if (p[0] == "gauss" && p.size() <= 2) {
    const double sigma = p.size() == 2 ? number(p[1], "--window") : 1.0;
    if (!(sigma > 0.0)) throw UsageError("gauss window needs sigma > 0");
    return {hwl::WindowKind::gauss, sigma};
  }
  throw UsageError("window must be sinc2 or gauss[,sigma], got '" + text + "'");
}

unsigned threads_from_env() {
  const char* env = std::getenv("HWL_THREADS");
  if (env == nullptr) return 1;
  const int n = std::atoi(env);
  return n > 0 ? static_cast<unsigned>(n) : 1;
}

void emit_json(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw hwl::Error("cannot open '" + path + "' for writing");
  out << text;
}

// CLI11 reads "-64:64:0.1" as a short flag, so bind such values to their option with '='.
std::vector<std::string> normalize_args(int argc, char** argv) {
  static const std::vector<std::string> value_options = {"--grid", "--window", "--central", "--x", "--omega0"};
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    const bool takes_value = std::find(value_options.begin(), value_options.end(), a) != value_options.end();
    if (takes_value && i + 1 < argc && argv[i + 1][0] == '-' && argv[i + 1][1] != '-') {
      a += "=";
      a += argv[++i];
    }
    args.push_back(a);
  }
  std::reverse(args.begin(), args.end());  // CLI11 consumes the vector from the back
  return args;
}

struct Options {
  // gen
  std::string wavelet, grid, out;
  // hilbert
  std::string method = "pv", in;
  int pad = 16;
  // analyze
  std::string json_path, window, side = "two_sided", hilbert_in, gammas = "0,1,2,3,3.25,4", coarse_in, scaling, central;
  int max_order = 3, n = 0, K = 50, min_vanishing = 1, min_order = 0;
  double min_r2 = 0.99, omega0 = 3.0, x_probe = 100.0, rtol = 5e-3, atol = 0.0, limit = 0.0;
  std::optional<double> expect_exponent;
  double exponent_tol = 0.1;
  std::optional<double> fixed_tolerance;
  bool transformed = false;
  // figure
  int figure_id = 0;
};

std::string param_digest(const std::string& command, const std::vector<hwl::SampledSignal*>& inputs, const std::string& params) {
  hwl::Digest d;
  d.add(command).add("\n").add(params);
  for (const auto* s : inputs) d.add(*s);
  return d.str();
}

int run_gen(const Options& o) {
  const hwl::WaveletSpec spec = parse_wavelet(o.wavelet);
  const hwl::Grid grid = parse_grid(o.grid);
  hwl::write_signal_csv(hwl::sample(spec, grid), std::filesystem::path(o.out));
  return 0;
}

int run_hilbert(const Options& o) {
  if (o.method != "pv" && o.method != "spectral") throw UsageError("--method must be pv or spectral");
  if (o.pad < 1) throw UsageError("--pad must be at least 1");
  const hwl::SampledSignal f = hwl::read_signal_csv(std::filesystem::path(o.in));
  json config;
  hwl::SampledSignal hf = f;
  if (o.method == "pv") {
    hwl::PvConfig cfg;
    cfg.eval_parallelism = threads_from_env();
    hf = hwl::hilbert_pv(f, cfg);
    config = {{"singularity_correction", cfg.singularity_correction}, {"jump_averaging", cfg.jump_averaging}};
  } else {
    hf = hwl::hilbert_spectral(f, hwl::SpectralConfig{o.pad});
    config = {{"pad_factor", o.pad}};
  }
  hwl::write_signal_csv(hf, std::filesystem::path(o.out));
  const json sidecar = {{"method", o.method},
                        {"config", config},
                        {"input", o.in},
                        {"input_digest", hwl::digest_of(f)},
                        {"output_digest", hwl::digest_of(hf)},
                        {"tool_version", hwl::kToolVersion}};
  emit_json(sidecar.dump(2) + "\n", o.out + ".json");
  return 0;
}

int run_decay(const Options& o) {
  auto f = hwl::read_signal_csv(std::filesystem::path(o.in));
  const hwl::Interval window = parse_interval(o.window, "--window");
  hwl::Side side;
  try {
    side = hwl::side_from_string(o.side);
  } catch (const hwl::InvalidParameter& e) {
    throw UsageError(e.what());
  }
  const hwl::DecayFit fit = hwl::fit_decay(f, window, side);
  bool pass = fit.r_squared >= o.min_r2;
  if (o.expect_exponent) pass = pass && std::abs(fit.exponent - *o.expect_exponent) <= o.exponent_tol;
  emit_json(hwl::report_json_text(fit, {param_digest("decay", {&f}, o.window + "|" + o.side), pass}), o.json_path);
  return 0;
}

int run_moments(const Options& o) {
  auto f = hwl::read_signal_csv(std::filesystem::path(o.in));
  if (o.max_order < 0) throw UsageError("--max-order must be nonnegative");
  const hwl::MomentTolerance tol = o.fixed_tolerance ? hwl::MomentTolerance::fixed(*o.fixed_tolerance) : hwl::MomentTolerance{};
  const hwl::MomentReport r = hwl::moments(f, o.max_order, tol);
  const bool pass = r.vanishing_count >= o.min_vanishing;
  emit_json(hwl::report_json_text(r, {param_digest("moments", {&f}, std::to_string(o.max_order)), pass}), o.json_path);
  return 0;
}

int run_sobolev(const Options& o) {
  auto f = hwl::read_signal_csv(std::filesystem::path(o.in));
  std::vector<double> gammas;
  for (const auto& g : split(o.gammas, ',')) gammas.push_back(number(g, "--gamma"));
  hwl::SobolevEstimate e;
  std::vector<hwl::SampledSignal*> inputs{&f};
  std::optional<hwl::SampledSignal> coarse;
  if (!o.coarse_in.empty()) {
    coarse = hwl::read_signal_csv(std::filesystem::path(o.coarse_in));
    inputs.push_back(&*coarse);
    e = hwl::smoothness_profile(f, *coarse, gammas);
  } else {
    e = hwl::smoothness_profile(f, gammas);
  }
  const bool pass = e.smoothness_order >= o.min_order;
  emit_json(hwl::report_json_text(e, {param_digest("sobolev", inputs, o.gammas), pass}), o.json_path);
  return 0;
}

int run_bedrosian(const Options& o) {
  const hwl::Window w = parse_window(o.window.empty() ? "sinc2" : o.window);
  const hwl::Grid grid = parse_grid(o.grid);
  if (o.pad < 1) throw UsageError("--pad must be at least 1");
  hwl::BedrosianReport r{w.name(), w.sigma, o.omega0, {grid.x_min(), grid.x_max()}, grid.step(), 0.0};
  r.residual = hwl::bedrosian_residual(w, o.omega0, grid, hwl::SpectralConfig{o.pad});
  const double limit = o.limit > 0.0 ? o.limit : 1e-4;
  const std::string params = r.window + "|" + hwl::detail::format_double(r.sigma) + "|" + hwl::detail::format_double(o.omega0) + "|" + o.grid;
  emit_json(hwl::report_json_text(r, {param_digest("bedrosian", {}, params), r.residual < limit}), o.json_path);
  return 0;
}

int run_certificate(const Options& o) {
  auto psi = hwl::read_signal_csv(std::filesystem::path(o.in));
  auto hpsi = hwl::read_signal_csv(std::filesystem::path(o.hilbert_in));
  if (o.n < 0) throw UsageError("--n must be nonnegative");
  if (!(psi.grid() == hpsi.grid())) throw hwl::Error("--in and --hilbert are sampled on different grids");
  hwl::PvConfig cfg;
  cfg.eval_parallelism = threads_from_env();
  const hwl::BoundCertificate c =
      hwl::theorem_certificate(psi, hpsi, o.n, [&](const hwl::SampledSignal& s) { return hwl::hilbert_pv(s, cfg); });
  emit_json(hwl::report_json_text(c, {param_digest("certificate", {&psi, &hpsi}, std::to_string(o.n)), c.stable}), o.json_path);
  return 0;
}

int run_tail_limit(const Options& o) {
  auto f = hwl::read_signal_csv(std::filesystem::path(o.in));
  auto hf = hwl::read_signal_csv(std::filesystem::path(o.hilbert_in));
  const hwl::TailLimit t = hwl::tail_limit(f, hf, o.x_probe);
  const bool pass = std::abs(t.probe_value - t.predicted) <= o.atol + o.rtol * std::abs(t.predicted);
  emit_json(hwl::report_json_text(t, {param_digest("tail-limit", {&f, &hf}, hwl::detail::format_double(o.x_probe)), pass}),
            o.json_path);
  return 0;
}

int run_partition(const Options& o) {
  const hwl::WaveletSpec spec = parse_wavelet(o.scaling.empty() ? "bspline-scaling,3" : o.scaling);
  if (!spec.is_scaling_function()) throw UsageError("--scaling must name haar-scaling or bspline-scaling,d");
  if (o.K < 0) throw UsageError("--K must be nonnegative");
  const hwl::Grid grid = parse_grid(o.grid);
  hwl::SampledSignal dev = [&] {
    try {
      return hwl::partition_deviation(spec, o.K, o.transformed, grid, hwl::SpectralConfig{o.pad});
    } catch (const hwl::InvalidParameter& e) {
      throw UsageError(e.what());
    }
  }();
  hwl::Interval central;
  if (o.central.empty()) {
    const auto [lo, hi] = hwl::central_half(grid);
    central = {grid.x(lo), grid.x(hi)};
  } else {
    central = parse_interval(o.central, "--central");
  }
  hwl::PartitionReport r{spec.name(), o.K, o.transformed, central, 0.0, std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < dev.size(); ++i) {
    if (dev.x(i) < central.lo || dev.x(i) > central.hi) continue;
    r.max_abs_deviation = std::max(r.max_abs_deviation, std::abs(dev[i]));
    r.min_abs_deviation = std::min(r.min_abs_deviation, std::abs(dev[i]));
  }
  if (!std::isfinite(r.min_abs_deviation)) throw UsageError("--central contains no grid point");
  // Untransformed sums should reproduce 1; transformed sums should stay away from it.
  const double limit = o.limit > 0.0 ? o.limit : (o.transformed ? 0.9 : 1e-9);
  const bool pass = o.transformed ? r.min_abs_deviation > limit : r.max_abs_deviation < limit;
  const std::string params = r.scaling + "|" + std::to_string(o.K) + "|" + (o.transformed ? "1" : "0") + "|" + o.grid;
  emit_json(hwl::report_json_text(r, {param_digest("partition", {}, params), pass}), o.json_path);
  return 0;
}

int run_figure(const Options& o) {
  hwl::PvConfig cfg;
  cfg.eval_parallelism = threads_from_env();
  hwl::render_figure(hwl::make_figure(o.figure_id, cfg), std::filesystem::path(o.out));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hilbert transforms of wavelets: generate, transform, analyze, plot"};
  app.require_subcommand(1);
  app.set_version_flag("--version", hwl::kToolVersion);
  Options o;
  int (*action)(const Options&) = nullptr;

  auto* gen = app.add_subcommand("gen", "sample a test function onto a grid and write CSV");
  gen->add_option("--wavelet", o.wavelet, "NAME[,params]")->required();
  gen->add_option("--grid", o.grid, "min:max:step")->required();
  gen->add_option("--out", o.out, "output CSV")->required();
  gen->callback([&] { action = run_gen; });

  auto* hil = app.add_subcommand("hilbert", "Hilbert transform of a CSV signal");
  hil->add_option("--method", o.method, "pv or spectral")->capture_default_str();
  hil->add_option("--pad", o.pad, "zero-padding factor for the spectral method")->capture_default_str();
  hil->add_option("--in", o.in, "input CSV")->required();
  hil->add_option("--out", o.out, "output CSV (a .json sidecar is written next to it)")->required();
  hil->callback([&] { action = run_hilbert; });

  auto* ana = app.add_subcommand("analyze", "run one analysis and write a JSON report");
  ana->require_subcommand(1);
  auto json_opt = [&](CLI::App* s) { s->add_option("--json", o.json_path, "report path (stdout if omitted)"); };

  auto* decay = ana->add_subcommand("decay", "power-law fit of |f| over a window");
  decay->add_option("--in", o.in)->required();
  decay->add_option("--window", o.window, "a:b with 0 < a < b")->required();
  decay->add_option("--side", o.side, "left, right or two_sided")->capture_default_str();
  decay->add_option("--min-r2", o.min_r2)->capture_default_str();
  decay->add_option("--expect-exponent", o.expect_exponent);
  decay->add_option("--exponent-tol", o.exponent_tol)->capture_default_str();
  json_opt(decay);
  decay->callback([&] { action = run_decay; });

  auto* mom = ana->add_subcommand("moments", "moments of orders 0..max-order");
  mom->add_option("--in", o.in)->required();
  mom->add_option("--max-order", o.max_order)->capture_default_str();
  mom->add_option("--tolerance", o.fixed_tolerance, "fixed tolerance instead of the truncation-aware one");
  mom->add_option("--min-vanishing", o.min_vanishing)->capture_default_str();
  json_opt(mom);
  mom->callback([&] { action = run_moments; });

  auto* sob = ana->add_subcommand("sobolev", "Sobolev norms and their grid stability");
  sob->add_option("--in", o.in)->required();
  sob->add_option("--gamma", o.gammas, "comma-separated exponents")->capture_default_str();
  sob->add_option("--coarse", o.coarse_in, "independently sampled coarse signal (default: decimated input)");
  sob->add_option("--min-order", o.min_order)->capture_default_str();
  json_opt(sob);
  sob->callback([&] { action = run_sobolev; });

  auto* bed = ana->add_subcommand("bedrosian", "residual of H[w cos] = w sin");
  bed->add_option("--window", o.window, "sinc2 or gauss[,sigma]");
  bed->add_option("--omega0", o.omega0)->capture_default_str();
  bed->add_option("--grid", o.grid, "min:max:step")->required();
  bed->add_option("--pad", o.pad)->capture_default_str();
  bed->add_option("--limit", o.limit, "pass threshold (default 1e-4)");
  json_opt(bed);
  bed->callback([&] { action = run_bedrosian; });

  auto* cert = ana->add_subcommand("certificate", "empirical constant of the decay bound");
  cert->add_option("--in", o.in, "psi CSV")->required();
  cert->add_option("--hilbert", o.hilbert_in, "H psi CSV on the same grid")->required();
  cert->add_option("--n", o.n, "vanishing moments (0: first-order bound)")->capture_default_str();
  json_opt(cert);
  cert->callback([&] { action = run_certificate; });

  auto* tail = ana->add_subcommand("tail-limit", "x Hf(x) against (1/pi) int f");
  tail->add_option("--in", o.in)->required();
  tail->add_option("--hilbert", o.hilbert_in)->required();
  tail->add_option("--x", o.x_probe)->capture_default_str();
  tail->add_option("--rtol", o.rtol)->capture_default_str();
  tail->add_option("--atol", o.atol)->capture_default_str();
  json_opt(tail);
  tail->callback([&] { action = run_tail_limit; });

  auto* part = ana->add_subcommand("partition", "shifted sums of a scaling function or its transform");
  part->add_option("--scaling", o.scaling, "haar-scaling or bspline-scaling,d (default bspline-scaling,3)");
  part->add_option("--K", o.K)->capture_default_str();
  part->add_flag("--transformed", o.transformed);
  part->add_option("--grid", o.grid, "min:max:step, step dividing 1")->required();
  part->add_option("--central", o.central, "a:b region for the summary (default central half)");
  part->add_option("--pad", o.pad)->capture_default_str();
  part->add_option("--limit", o.limit, "pass threshold (default 1e-9, or 0.9 with --transformed)");
  json_opt(part);
  part->callback([&] { action = run_partition; });

  auto* fig = app.add_subcommand("figure", "render figure 1, 2 or 3 as SVG");
  fig->add_option("--id", o.figure_id)->required()->check(CLI::Range(1, 3));
  fig->add_option("--out", o.out)->required();
  fig->callback([&] { action = run_figure; });

  try {
    app.parse(normalize_args(argc, argv));
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    return action(o);
  } catch (const UsageError& e) {
    std::cerr << "hwl: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "hwl: " << e.what() << "\n";
    return kExitData;
  }
}
