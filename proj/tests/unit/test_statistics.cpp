#include <doctest.h>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "zetapair/error.hpp"
#include "zetapair/statistics.hpp"

using namespace zetapair;

namespace {

// the first n ordinates as a verified list from the origin
ZeroList first(std::size_t n, const ZeroList& all) {
  ZeroList z = all;
  z.ordinates.resize(n);
  z.height_covered = 0.5 * (all.ordinates[n - 1] + all.ordinates[n]);
  return z;
}

}  // namespace

TEST_CASE("pair sum: repulsion among the first 100 zeros") {
  const auto& all = fixture::zeros_to(1000.0);
  const auto z = first(100, all);
  const double T = z.height_covered;
  // narrow bump moved onto (0, 0.05): its transform is wide, the time side concentrated
  const auto omega = make_smooth_bump(400.0).scaled(1.0 / 400.0);
  const auto r = pair_sum(z, omega, 0.0, T);
  CHECK(std::abs(r.value - oracle::pair_sum(z.ordinates, omega, 0.0, T, std::log(T))) < 1e-12);
  double gap = 1e9;
  for (std::size_t i = 1; i < 100; ++i) gap = std::min(gap, z.ordinates[i] - z.ordinates[i - 1]);
  CHECK(gap > 0.05);
  CHECK(std::abs(r.value) < 1e-6);
}

TEST_CASE("pair sum: conjugation and brute force") {
  const auto& all = fixture::zeros_to(1000.0);
  const auto z = first(500, all);
  const double T = z.height_covered;
  const auto omega = make_smooth_bump(0.9);
  const auto p = pair_sum(z, omega, 0.4, T);
  const auto m = pair_sum(z, omega, -0.4, T);
  CHECK(std::abs(p.value - std::conj(m.value)) < 1e-12);
  for (const double alpha : {0.0, 0.4, 0.9}) {
    const auto r = pair_sum(z, omega, alpha, T);
    const cplx ref = oracle::pair_sum(z.ordinates, omega, alpha, T, std::log(T));
    CHECK(std::abs(r.value - ref) <= 1e-10 + r.neglected_bound);
  }
  CHECK(pair_sum(z, omega, 0.4, T, 0.0, 1).value == pair_sum(z, omega, 0.4, T, 0.0, 3).value);

  auto unverified = z;
  unverified.turing_verified = false;
  CHECK_THROWS_AS(pair_sum(unverified, omega, 0.0, T), Error);
  CHECK_THROWS_AS(pair_sum(z, omega, 0.0, T + 100.0), Error);
}

TEST_CASE("Montgomery F") {
  const auto& z = fixture::zeros_to(100.0);
  const double F0 = montgomery_F(z, 0.0, 100.0);
  CHECK(F0 == doctest::Approx(oracle::montgomery_F(z.ordinates, 0.0, 100.0)).epsilon(1e-13));
  CHECK(F0 > 0.0);
  CHECK(montgomery_F(z, 0.5, 100.0) == doctest::Approx(montgomery_F(z, -0.5, 100.0)).epsilon(1e-12));
  const auto& big = fixture::zeros_to(1000.0);
  CHECK(montgomery_F(big, 0.7, 1000.0) == doctest::Approx(oracle::montgomery_F(big.ordinates, 0.7, 1000.0)).epsilon(1e-11));
}

TEST_CASE("windowed statistic: positivity and swap symmetry") {
  const auto& z = fixture::zeros_to(1000.0);
  const auto r = make_smooth_bump(20.0), sigma = make_smooth_bump(8.0);
  const auto v = windowed_pair_statistic(z, r, r, sigma, 500.0, 20.0, 0.0, 0.0);
  CHECK(v.value.real() > 0.0);
  CHECK(std::abs(v.value.imag()) <= v.error_bound + 1e-12);
  const auto r2 = make_smooth_bump(12.0);
  const auto a = windowed_pair_statistic(z, r, r2, sigma, 500.0, 20.0, 0.3, -0.1);
  const auto b = windowed_pair_statistic(z, r2, r, sigma, 500.0, 20.0, -0.1, 0.3);
  CHECK(std::abs(a.value - b.value) < 1e-12 + 1e-12 * std::abs(a.value));
  CHECK(windowed_pair_statistic(z, r, r2, sigma, 500.0, 20.0, 0.3, -0.1, {0.0, 1}).value ==
        windowed_pair_statistic(z, r, r2, sigma, 500.0, 20.0, 0.3, -0.1, {0.0, 2}).value);
}

TEST_CASE("windowed statistic: O(N^2) equivalence on the first 500 zeros") {
  const auto& all = fixture::zeros_to(1000.0);
  const auto z = first(500, all);
  const auto r1 = make_smooth_bump(20.0), r2 = make_smooth_bump(12.0), sigma = make_smooth_bump(8.0);
  const double T = 400.0, H = 10.0;
  for (const auto& [a1, a2] : std::vector<std::pair<double, double>>{{0.0, 0.0}, {0.3, -0.3}, {0.2, 0.5}}) {
    INFO("alphas " << a1 << " " << a2);
    const auto v = windowed_pair_statistic(z, r1, r2, sigma, T, H, a1, a2);
    const cplx ref = oracle::windowed(z.ordinates, r1, r2, sigma, T, H, a1, a2, std::log(T));
    CHECK(std::abs(v.value - ref) <= v.error_bound + 1e-10);
  }
  CHECK_THROWS_AS(windowed_pair_statistic(z, r1, r2, sigma, 780.0, 10.0, 0.0, 0.0), Error);
}

TEST_CASE("difference histogram") {
  const auto& all = fixture::zeros_to(100.0);
  const auto z3 = first(3, all);
  const auto h = diff_histogram(z3, 0.1, 0.0, 12.0);
  REQUIRE(h.counts.size() == 120);
  std::vector<double> centers;
  for (std::size_t k = 0; k < h.counts.size(); ++k)
    if (h.counts[k] != 0) centers.push_back(h.bin_center(k));
  REQUIRE(centers.size() == 3);
  CHECK(std::abs(centers[0] - 3.99) < 0.1);
  CHECK(std::abs(centers[1] - 6.89) < 0.1);
  CHECK(std::abs(centers[2] - 10.88) < 0.1);

  const auto& z = fixture::zeros_to(1000.0);
  const std::size_t n = z.ordinates.size();
  const auto full = diff_histogram(z, 0.5, 0.0, 1000.0);
  CHECK(full.total() == n * (n - 1) / 2);
  const auto part = diff_histogram(z, 0.1, 0.0, 30.0);
  CHECK(part.counts == oracle::histogram(z.ordinates, 0.1, 0.0, 30.0));
  CHECK_THROWS_AS(diff_histogram(z, 0.1, 0.0, 30.05), Error);
  CHECK_THROWS_AS(diff_histogram(z, 0.0, 0.0, 1.0), Error);
}

TEST_CASE("mean gap") {
  CHECK(mean_gap(1e4) == doctest::Approx(kTwoPi / std::log(1e4 / kTwoPi)));
  CHECK(mean_gap(1.0) == doctest::Approx(kTwoPi));
}

TEST_CASE("windowed statistic against its prediction at the 10000th zero") {
  const auto& all = fixture::zeros_to(14100.0);
  REQUIRE(all.ordinates.size() > 10000);
  const double T = all.ordinates[9999], H = std::pow(T, 0.7);
  const auto r = make_smooth_bump(3.0), sigma = make_smooth_bump(8.0);
  const auto lhs = windowed_pair_statistic(all, r, r, sigma, T, H, 0.3, -0.3);
  const auto rhs = windowed_prediction(r, r, T, 0.3, -0.3, fixture::context());
  // desk-scale agreement only; the error term is a power of log T
  CHECK(std::abs(lhs.value - rhs.value) <= 0.15 * std::abs(rhs.value));
  CHECK(std::abs(lhs.value.imag()) < 1e-6 * std::abs(lhs.value));
}
