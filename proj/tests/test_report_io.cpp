#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "catch_amalgamated.hpp"

#include "hwl/report_io.hpp"

using namespace hwl;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "hwl_test_report_io";
  std::filesystem::create_directories(dir);
  return dir / name;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

int parse_error_row(const std::string& text) {
  std::istringstream in(text);
  try {
    read_signal_csv(in);
  } catch (const ParseError& e) {
    return static_cast<int>(e.row());
  }
  return -1;
}

}  // namespace

TEST_CASE("property: CSV round trip is bit-exact") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> mag(-300.0, 300.0);
  std::uniform_int_distribution<int> sign(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial) * 37;
    std::vector<double> v(n);
    for (double& x : v) x = (sign(rng) ? 1.0 : -1.0) * std::pow(10.0, mag(rng) / 10.0) * std::uniform_real_distribution<double>(1, 2)(rng);
    v[0] = 0.0;
    v[n - 1] = -0.0;
    const SampledSignal f(Grid(-64.0, 1.0 / 256, n), v);
    std::stringstream ss;
    write_signal_csv(f, ss);
    const SampledSignal g = read_signal_csv(ss);
    REQUIRE(g.size() == n);
    CHECK(g.grid().x_min() == f.grid().x_min());
    for (std::size_t i = 0; i < n; ++i) REQUIRE(same_bits(g[i], f[i]));
  }
}

TEST_CASE("CSV file round trip") {
  const SampledSignal f = sample(make_spline_wavelet(3), Grid::from_range(-8, 8, 1.0 / 256));
  const auto path = temp_path("psi.csv");
  write_signal_csv(f, path);
  const SampledSignal g = read_signal_csv(path);
  CHECK(g.grid() == f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) REQUIRE(same_bits(g[i], f[i]));
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,value");
}

TEST_CASE("CSV errors carry row numbers") {
  CHECK(parse_error_row("") == 1);
  CHECK(parse_error_row("t,value\n0,1\n1,1\n") == 1);
  CHECK(parse_error_row("x,value\n0,1\n") == 0);
  CHECK(parse_error_row("x,value\n0,1\n1,nan\n2,1\n") == 3);
  CHECK(parse_error_row("x,value\n0,1\n1,inf\n") == 3);
  CHECK(parse_error_row("x,value\n0,1\n1,abc\n") == 3);
  CHECK(parse_error_row("x,value\n0,1\n1,2,3\n") == 3);
  CHECK(parse_error_row("x,value\n0,1\n1,1\n2.5,1\n3,1\n") == 4);
  // shuffled x column
  CHECK(parse_error_row("x,value\n0,1\n2,1\n1,1\n3,1\n") > 1);
  CHECK(parse_error_row("x,value\n3,1\n2,1\n1,1\n") == 2);
  CHECK_THROWS_AS(read_signal_csv(temp_path("does-not-exist.csv")), ParseError);
}

TEST_CASE("CSV accepts CRLF and tolerates 1e-9 relative jitter") {
  std::istringstream in("x,value\r\n0,1\r\n0.5000000000001,2\r\n1,3\r\n");
  const SampledSignal f = read_signal_csv(in);
  CHECK(f.size() == 3);
  CHECK(f.grid().step() == 0.5);
}

TEST_CASE("digests are stable and sensitive") {
  const SampledSignal f(Grid(0.0, 1.0, 3), {1.0, 2.0, 3.0});
  const SampledSignal g(Grid(0.0, 1.0, 3), {1.0, 2.0, 3.0000000000000004});
  CHECK(digest_of(f) == digest_of(f));
  CHECK(digest_of(f) != digest_of(g));
  CHECK(digest_of(f).rfind("fnv1a64:", 0) == 0);
  CHECK(digest_of(f).size() == 8 + 16);
  CHECK(Digest().add("a").str() == "fnv1a64:af63dc4c8601ec8c");  // published FNV-1a 64 test vector
}

TEST_CASE("every report kind round trips through JSON") {
  DecayFit fit;
  fit.exponent = 2.0049903468415;
  fit.log_constant = -1.1;
  fit.r_squared = 0.9999;
  fit.window = {4, 64};
  fit.side = Side::right;
  fit.points_used = 123;
  fit.excluded = 4;

  MomentReport m{{1.0, 1e-17, -40.5}, {0.1, 0.2, 0.3}, {1e-6, 2.0, 3.0}, 2};

  BoundCertificate c;
  c.n = 4;
  c.norms = {{"psi_mixed", 3.5}, {"x^5_psi_mixed", 12.0}, {"x^4_psi_l1", 1.25}};
  c.norm_sum = 16.75;
  c.empirical_constant = 0.125;
  c.doubled_span_constant = 0.125;
  c.stable = true;
  c.span = {-32, 32};
  c.doubled_span = {-64, 64};

  SobolevEstimate s{{0.0, 4.0}, {1.0, 9566.0}, {1.0, 6700.0}, {0.0, 0.3}, {true, false}, 2};
  TailLimit t{100.0, 0.3199, 0.3183};
  BedrosianReport b{"sinc2", 1.0, 3.0, {-128, 128}, 1.0 / 128, 7.7e-9};
  PartitionReport p{"bspline-scaling,3", 50, true, {-4, 4}, 0.999, 0.949};

  for (const Report& r : std::vector<Report>{fit, m, c, s, t, b, p}) {
    const ReportMeta meta{"fnv1a64:0123456789abcdef", true};
    const nlohmann::json j = report_to_json(r, meta);
    const ParsedReport back = report_from_json(j);
    CHECK(back.report.index() == r.index());
    CHECK(back.tool_version == kToolVersion);
    CHECK(back.meta.input_digest == meta.input_digest);
    CHECK(back.meta.pass == std::optional<bool>(true));
    CHECK(report_to_json(back.report, meta) == j);
  }

  const auto j = report_to_json(fit);
  CHECK(j["kind"] == "decay_fit");
  CHECK(j["fit_window"] == nlohmann::json::array({4.0, 64.0}));
  CHECK(j["side"] == "right");
  CHECK_FALSE(j.contains("pass"));
  CHECK(std::get<DecayFit>(report_from_json(j).report).exponent == fit.exponent);

  const auto jc = report_to_json(c);
  CHECK(jc["theorem"] == "T2(4)");
  CHECK(jc.contains("empirical_constant"));
  CHECK(jc.contains("doubled_span_constant"));
}

TEST_CASE("schema errors") {
  CHECK_THROWS_AS(report_from_json(nlohmann::json{{"kind", "nope"}}), SchemaError);
  CHECK_THROWS_AS(report_from_json(nlohmann::json::array()), SchemaError);
  CHECK_THROWS_AS(report_from_json(nlohmann::json{{"exponent", 1.0}}), SchemaError);
  CHECK_THROWS_AS(report_from_json(nlohmann::json{{"kind", "decay_fit"}, {"exponent", 1.0}}), SchemaError);
  nlohmann::json bad_side = report_to_json(DecayFit{});
  bad_side["side"] = "up";
  CHECK_THROWS_AS(report_from_json(bad_side), SchemaError);
  nlohmann::json bad_window = report_to_json(DecayFit{});
  bad_window["fit_window"] = {1.0};
  CHECK_THROWS_AS(report_from_json(bad_window), SchemaError);

  const auto path = temp_path("broken.json");
  std::ofstream(path) << "{ not json";
  CHECK_THROWS_AS(read_report_json(path), SchemaError);
}

TEST_CASE("report files are byte-for-byte deterministic") {
  const Grid g = Grid::from_range(-64, 64, 1.0 / 256);
  auto make = [&] {
    const SampledSignal h = hilbert_pv(sample(make_haar_wavelet_spec(), g));
    return std::make_pair(fit_decay(h, {4, 64}), digest_of(h));
  };
  const auto [fa, da] = make();
  const auto [fb, db] = make();
  const auto pa = temp_path("a.json"), pb = temp_path("b.json");
  write_report_json(fa, pa, {da, true});
  write_report_json(fb, pb, {db, true});
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  CHECK(slurp(pa) == slurp(pb));
  const ParsedReport back = read_report_json(pa);
  CHECK(std::get<DecayFit>(back.report).exponent == fa.exponent);
  CHECK_THROWS_AS(write_report_json(fa, temp_path("missing-dir") / "x" / "y.json"), Error);
}
