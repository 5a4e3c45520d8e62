#include <doctest.h>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "zetapair/error.hpp"
#include "zetapair/predictions.hpp"

using namespace zetapair;

TEST_CASE("context validation") {
  KernelContext ctx;
  CHECK_THROWS_AS(validate(ctx), Error);
  ctx = fixture::context();
  CHECK_NOTHROW(validate(ctx));
  ctx.small_u_threshold = 0.06;
  CHECK_THROWS_AS(validate(ctx), Error);
}

TEST_CASE("Q kernel: evenness, domain, definition") {
  const auto ctx = fixture::context();
  CHECK(std::abs(q_kernel(1e3, 0.37, ctx) - q_kernel(1e3, -0.37, ctx)) < 1e-12);
  CHECK_THROWS_AS(q_kernel(kTwoPi, 1.0, ctx), Error);
  CHECK_THROWS_AS(q_kernel(1.0, 1.0, ctx), Error);
  for (const double u : {0.5, 2.0, 14.13}) {
    const auto parts = kernel_parts(u, ctx);
    CHECK(std::abs(q_kernel(1e3, u, ctx) - oracle::q_at(parts, std::log(1e3 / kTwoPi))) < 1e-12);
  }
}

TEST_CASE("Q kernel: continuity at u = 0") {
  const auto ctx = fixture::context();
  const double t = 1e3;
  // Richardson extrapolation of an even function from u, u/2, u/4
  const double q1 = q_kernel(t, 0.02, ctx), q2 = q_kernel(t, 0.01, ctx), q3 = q_kernel(t, 0.005, ctx);
  const double r1 = (4.0 * q2 - q1) / 3.0, r2 = (4.0 * q3 - q2) / 3.0;
  const double limit = (16.0 * r2 - r1) / 15.0;
  CHECK(std::abs(q_kernel(t, 1e-4, ctx) - limit) < 1e-6);
  CHECK(std::abs(q_kernel(t, 0.0, ctx) - limit) < 1e-6);
  // Cauchy sequence under halving, across the switch to the grouped form
  double prev = q_kernel(t, 1e-2, ctx);
  double step = 1.0;
  for (double u = 5e-3; u >= 1e-6; u *= 0.5) {
    const double q = q_kernel(t, u, ctx);
    const double d = std::abs(q - prev);
    CHECK(d <= step + 1e-9);
    step = std::max(d, 1e-9);
    prev = q;
  }
}

TEST_CASE("Q kernel: trough at the first zero") {
  const auto ctx = fixture::context();
  double best = 1e300, at = 0.0;
  for (double u = 13.9; u <= 14.4; u += 0.005) {
    const double q = q_kernel(1e3, u, ctx);
    if (q < best) best = q, at = u;
  }
  CHECK(std::abs(at - 14.1347) < 0.05);
  CHECK(at > 13.91);
  CHECK(at < 14.39);
}

TEST_CASE("Q tilde and K") {
  const auto ctx = fixture::context();
  CHECK(std::abs(q_tilde_kernel(1e3, 0.37, ctx) - q_tilde_kernel(1e3, -0.37, ctx)) < 1e-12);
  // Q - Q~ = Re[(t/2pi)^{-iu} (|zeta(1+iu)|^2 A(iu) - 1/u^2)] / 2pi^2
  const auto p5 = kernel_parts(5.0, ctx);
  const double lam5 = std::log(1e3 / kTwoPi);
  const double d = q_kernel(1e3, 5.0, ctx) - q_tilde_kernel(1e3, 5.0, ctx);
  const double expect = (std::polar(1.0, -5.0 * lam5) * (std::norm(p5.zeta) * p5.a - 1.0 / 25.0)).real() /
                        (2.0 * kPi * kPi);
  CHECK(std::abs(d - expect) < 1e-12);
  CHECK(std::abs(d) > 1e-3);

  const double t = 1e3, s = std::log(t / kTwoPi) / kTwoPi;
  CHECK(gue_kernel(t, 0.0) == doctest::Approx(-s * s).epsilon(1e-15));
  for (int k = 1; k <= 3; ++k) CHECK(std::abs(gue_kernel(t, k / s)) < 1e-15);
  for (const double tt : {1e1, 1e2, 1e3, 1e4, 1e6})
    for (double u = -20.0; u <= 20.0; u += 0.173) REQUIRE(std::abs(gue_kernel(tt, u) - gue_kernel_sinc_form(tt, u)) < 1e-12);
  CHECK(gue_kernel(t, 0.7) == gue_kernel(t, -0.7));
}

TEST_CASE("Q tilde - K as a zeta series") {
  const auto ctx = fixture::context();
  for (const double u : {0.5, 2.0, 7.0}) {
    INFO("u = " << u);
    const double lhs = q_tilde_kernel(1e3, u, ctx) - gue_kernel(1e3, u);
    double series = zeta_logderiv_prime(cplx(1.0, u)).value.real() + 1.0 / (u * u);
    for (int k = 2; k <= 60; ++k)
      series += double(mobius_coefficient_c(k)) * zeta_logderiv_prime(cplx(k, k * u)).value.real();
    CHECK(std::abs(lhs - series / (2.0 * kPi * kPi)) < 1e-8);
  }
}

TEST_CASE("t-averages: closed form against quadrature") {
  const auto ctx = fixture::context();
  for (const double T : {1e2, 1e3, 1e4})
    for (const double u : {0.5, 2.0, 14.13}) {
      INFO("T = " << T << " u = " << u);
      const auto parts = kernel_parts(u, ctx);
      CHECK(std::abs(q_kernel_tavg(T, u, ctx) - oracle::q_tavg(parts, T, false)) < 1e-8);
    }
  CHECK(q_kernel_tavg(1e3, 2.0, ctx) == q_kernel_tavg(1e3, -2.0, ctx));
  // (1/T) int (lam/2pi)^2 dt
  const double T = 1e3;
  const double quad = oracle::integrate(
      [&](double lam) { return lam * lam / (4.0 * kPi * kPi) * kTwoPi * std::exp(lam); }, -60.0, std::log(T / kTwoPi));
  CHECK(std::abs(density_squared_tavg(T) - quad / T) < 1e-12);
}

TEST_CASE("t-averages: sub-case with A = 1 and |zeta|^2 = 1/u^2") {
  // then Q~ and Q agree, and the oscillatory average is the K average
  const auto ctx = fixture::context();
  auto parts = kernel_parts(1.5, ctx);
  parts.a = 1.0;
  parts.a_minus_one = 0.0;
  parts.p = 0.0;
  parts.zeta = cplx(0.0, -1.0 / parts.u);
  const double T = 1e4;
  const double expect = q_tilde_tavg_from_parts(parts, T);
  CHECK(std::abs(q_tavg_from_parts(parts, T) - expect) < 1e-13);
  const double base = (parts.regular.real() - parts.b.real()) / (2.0 * kPi * kPi);
  CHECK(std::abs(expect - base - gue_tavg(T, 1.5)) < 1e-13);
}

TEST_CASE("pair prediction: nested quadrature") {
  auto ctx = fixture::context(100000);
  ctx.tail_tol = 1e-3;
  const auto omega = make_smooth_bump(3.0);
  const double T = 1e3;
  const auto v = pair_prediction(omega, 0.0, T, ctx);
  double radius = omega.truncation_radius();
  while (omega.tail_sup(radius) > 1e-12) radius += 1.0;
  const double ref = oracle::pair_prediction(omega, T, ctx, radius);
  CHECK(std::abs(v.value.real() - ref) < 1e-6);
  CHECK(std::abs(v.value.imag()) < 1e-12);
  // carries the prime tail of the 1e5 tables
  CHECK(v.error_bound < 1e-5);
}

TEST_CASE("pair prediction: symmetry and kernel choice") {
  auto ctx = fixture::context(100000);
  ctx.tail_tol = 1e-3;
  const auto omega = make_smooth_bump(0.9);
  const double T = 1e3;
  const std::vector<double> al{-0.5, 0.0, 0.5};
  const auto q = pair_prediction_grid(omega, al, T, ctx);
  CHECK(std::abs(q[0].value - q[2].value) < 1e-12);
  CHECK(std::abs(pair_prediction(omega, 0.5, T, ctx).value - q[2].value) < 1e-14);
  PredictionOptions k;
  k.kernel = KernelKind::K;
  const auto gue = pair_prediction(omega, 0.0, T, ctx, k);
  // not even o(1): the gap at alpha = 0 stays away from zero
  CHECK(std::abs(q[1].value - gue.value) > 0.01);
}

TEST_CASE("Delta decomposition") {
  auto ctx = fixture::context(100000);
  ctx.tail_tol = 1e-3;
  const auto omega = make_smooth_bump(0.9);
  const auto d1 = prediction_delta(omega, 0.5, 1e3, DeltaKind::D1, ctx);
  const auto d2 = prediction_delta(omega, 0.5, 1e3, DeltaKind::D2, ctx);
  const auto d3 = prediction_delta(omega, 0.5, 1e3, DeltaKind::D3, ctx);
  CHECK(std::abs(d1.value - d2.value - d3.value) < 1e-10);
  const double a2 = std::abs(prediction_delta(omega, 0.5, 1e2, DeltaKind::D2, ctx).value);
  const double c2 = std::abs(prediction_delta(omega, 0.5, 1e4, DeltaKind::D2, ctx).value);
  CHECK(a2 > std::abs(d2.value));
  CHECK(std::abs(d2.value) > c2);
  CHECK(c2 < 0.05);
  CHECK(std::abs(prediction_delta(omega, 0.0, 1e3, DeltaKind::D3, ctx).value) > 0.01);
}

TEST_CASE("prediction density: bump near 7.066") {
  const auto ctx = fixture::context();
  std::vector<double> us;
  for (double u = 6.6; u <= 7.6; u += 0.02) us.push_back(u);
  const auto d = prediction_density_curve(9877.78, us, ctx);
  std::vector<double> maxima;
  for (std::size_t i = 1; i + 1 < us.size(); ++i)
    if (d[i] > d[i - 1] && d[i] > d[i + 1]) maxima.push_back(us[i]);
  REQUIRE(maxima.size() >= 1);
  bool near = false;
  for (const double m : maxima) near = near || std::abs(m - 7.066) <= 0.1;
  CHECK(near);
}

TEST_CASE("windowed prediction: swap symmetry") {
  auto ctx = fixture::context(100000);
  ctx.tail_tol = 1e-3;
  const auto r1 = make_smooth_bump(3.0), r2 = make_smooth_bump(2.0);
  const auto a = windowed_prediction(r1, r2, 1e3, 0.3, -0.1, ctx);
  const auto b = windowed_prediction(r2, r1, 1e3, -0.1, 0.3, ctx);
  CHECK(std::abs(a.value - b.value) <= a.error_bound + b.error_bound + 1e-10);
  CHECK_THROWS_AS(windowed_prediction(montgomery_weight(), r1, 1e3, 0.0, 0.0, ctx), Error);
}
