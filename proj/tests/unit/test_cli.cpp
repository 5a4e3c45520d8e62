#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "fixtures.hpp"
#include "zetapair/zeros.hpp"
#include "zetapair_cli.hpp"

namespace fs = std::filesystem;
using zetapair::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream o, e;
  const int c = run(args, o, e);
  return {c, o.str(), e.str()};
}

const fs::path& scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "zetapair_cli_test";
    fs::remove_all(d);
    fs::create_directories(d / "cache");
    setenv("ZETAPAIR_CACHE_DIR", (d / "cache").c_str(), 1);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

std::size_t data_lines(const std::string& text) {
  std::size_t n = 0;
  for (const auto& l : lines(text)) n += !l.empty() && l[0] != '#';
  return n;
}

std::string zero_file(double T) {
  const auto p = scratch() / ("zeros-" + std::to_string(static_cast<long>(T)) + ".txt");
  if (!fs::exists(p)) {
    std::ofstream out(p);
    zetapair::save_zeros(fixture::zeros_to(T), out);
  }
  return p.string();
}

}  // namespace

TEST_CASE("cli: grid, range and test-function parsing") {
  using namespace zetapair::cli;
  CHECK(parse_grid("0:0.5:0.1").size() == 6);
  CHECK(parse_grid("1,2.5,4") == std::vector<double>{1.0, 2.5, 4.0});
  CHECK_THROWS(parse_grid("0:1"));
  CHECK_THROWS(parse_grid("1:0:0.1"));
  CHECK_THROWS(parse_grid("a,b"));
  CHECK(parse_range("0:30") == std::pair<double, double>{0.0, 30.0});
  CHECK_THROWS(parse_range("3:1"));
  CHECK(parse_test_function("bump:0.9").band_limit() == 0.9);
  CHECK(parse_test_function("bump:3:raw").mass().real() == doctest::Approx(std::exp(-1.0)));
  CHECK(parse_test_function("fejer:2").band_limit() == 2.0);
  CHECK_FALSE(parse_test_function("montgomery").band_limited());
  CHECK_THROWS(parse_test_function("gauss:1"));
  CHECK(fmt(0.1) == "0.1");
  CHECK(fmt(-0.651081442724123) == "-0.651081442724");
  CHECK(fmt(1e-20) == "1e-20");
}

TEST_CASE("cli: zeros-compute and zeros-verify") {
  const auto f30 = (scratch() / "z30.txt").string();
  auto r = call({"zeros-compute", "--from", "0", "--to", "30", "--out", f30});
  REQUIRE(r.code == 0);
  CHECK(data_lines(slurp(f30)) == 3);
  CHECK(nlohmann::json::parse(r.out)["count"] == 3);

  const auto f100 = (scratch() / "z100.txt").string();
  REQUIRE(call({"zeros-compute", "--from", "0", "--to", "100", "--out", f100}).code == 0);
  r = call({"zeros-verify", "--in", f100, "--T", "100"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["verified_count"] == 29);

  const auto bad = (scratch() / "bad.txt").string();
  std::ofstream(bad) << "21.022040\n14.134725\n";
  r = call({"zeros-verify", "--in", bad});
  CHECK(r.code == zetapair::cli::kExitParse);
  CHECK(nlohmann::json::parse(r.err)["error"] == "parse");
}

TEST_CASE("cli: usage errors and preconditions") {
  CHECK(call({}).code == zetapair::cli::kExitPrecondition);
  CHECK(call({"no-such-command"}).code == zetapair::cli::kExitPrecondition);
  CHECK(call({"zeros-compute"}).code == zetapair::cli::kExitPrecondition);
  CHECK(call({"paircorr", "--zeros", (scratch() / "missing.txt").string(), "--alpha", "0"}).code ==
        zetapair::cli::kExitPrecondition);
  CHECK(call({"predict", "--kernel", "K", "--T", "3", "--u", "0"}).code == zetapair::cli::kExitPrecondition);
}

TEST_CASE("cli: predict K at u = 0") {
  const auto r = call({"predict", "--kernel", "K", "--T", "1000", "--u", "0"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 3);
  CHECK(ls[0].rfind("# {", 0) == 0);
  CHECK(ls[1] == "u,value");
  const double s = std::log(1000.0 / (2.0 * M_PI)) / (2.0 * M_PI);
  CHECK(std::stod(ls[2].substr(2)) == doctest::Approx(-s * s).epsilon(1e-11));
}

TEST_CASE("cli: histogram of 10000 zeros") {
  const auto zf = zero_file(9878.0);
  const auto r = call({"histogram", "--zeros", zf, "--bin", "0.1", "--range", "0:30", "--count", "10000"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 302);
  CHECK(ls[1] == "bin_lo,bin_hi,center,count");
  CHECK(data_lines(r.out) == 301);
}

TEST_CASE("cli: compare rows, thread independence and replay") {
  const auto zf = zero_file(1000.0);
  const std::vector<std::string> base{"compare", "--zeros", zf, "--alpha-grid", "0:0.5:0.1", "--tables", "1000000"};
  auto with = [&](std::vector<std::string> extra) {
    auto a = base;
    a.insert(a.end(), extra.begin(), extra.end());
    return a;
  };
  const auto f1 = (scratch() / "cmp1.csv").string(), f2 = (scratch() / "cmp2.csv").string();
  REQUIRE(call(with({"--threads", "1", "--out", f1})).code == 0);
  REQUIRE(call(with({"--threads", "2", "--out", f2})).code == 0);
  const auto text = slurp(f1);
  CHECK(text == slurp(f2));
  const auto ls = lines(text);
  REQUIRE(ls.size() == 8);
  CHECK(ls[1] == "alpha,lhs_re,lhs_im,rhs_re,rhs_im,abs_diff,lhs_bound,rhs_bound");
  // the abs_diff column is |lhs - rhs|
  for (std::size_t i = 2; i < ls.size(); ++i) {
    std::vector<double> v;
    std::istringstream row(ls[i]);
    for (std::string c; std::getline(row, c, ',');) v.push_back(std::stod(c));
    REQUIRE(v.size() == 8);
    CHECK(v[5] == doctest::Approx(std::hypot(v[1] - v[3], v[2] - v[4])).epsilon(1e-9));
  }

  const auto f3 = (scratch() / "cmp3.csv").string();
  REQUIRE(call({"replay", "--in", f1, "--out", f3, "--threads", "3"}).code == 0);
  CHECK(slurp(f3) == text);
}

TEST_CASE("cli: paircorr and windowed across thread counts") {
  const auto zf = zero_file(1000.0);
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"paircorr", "--zeros", zf, "--alpha", "0,0.3,0.9"},
           {"paircorr", "--zeros", zf, "--alpha", "0.2:0.8:0.2", "--statistic", "F"},
           {"windowed", "--zeros", zf, "--r1", "bump:20", "--r2", "bump:12", "--T", "500", "--H", "20", "--alpha1",
            "0.3", "--alpha2", "-0.3", "--no-prediction"}}) {
    auto a1 = args, a2 = args;
    a1.insert(a1.end(), {"--threads", "1"});
    a2.insert(a2.end(), {"--threads", "2"});
    const auto r1 = call(a1), r2 = call(a2);
    INFO(args[0] << " " << r1.err);
    REQUIRE(r1.code == 0);
    CHECK(r1.out == r2.out);
  }
}

TEST_CASE("cli: verify exit codes") {
  auto r = call({"verify", "--suite", "digamma"});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS") != std::string::npos);
  const auto js = (scratch() / "verify.json").string();
  r = call({"verify", "--suite", "floor-printed", "--json", js});
  CHECK(r.code == zetapair::cli::kExitAccuracy);
  const auto j = nlohmann::json::parse(slurp(js));
  REQUIRE(j.size() == 1);
  CHECK(j[0]["passed"] == false);
  CHECK(call({"verify", "--suite", "nonsense"}).code == zetapair::cli::kExitPrecondition);
}
