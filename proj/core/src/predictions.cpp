#include "zetapair/predictions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "zetapair/error.hpp"
#include "zetapair/quadrature.hpp"

namespace zetapair {
namespace {

constexpr double kInvTwoPiSq = 1.0 / (2.0 * kPi * kPi);

double log_scale(double t, const char* who) {
  if (!(t > kTwoPi)) throw Error(ErrorKind::Domain, std::string(who) + ": need t > 2 pi");
  return std::log(t / kTwoPi);
}

// (1/T) int_0^T (t/2pi)^{-iu} dt - 1 = (e^{-iu Lambda} - (1 - iu)) / (1 - iu)
cplx tavg_phase_minus_one(double u, double big_lambda) {
  const cplx one_minus_iu(1.0, -u);
  return (cexpm1(cplx(0.0, -u * big_lambda)) + cplx(0.0, u)) / one_minus_iu;
}

double mean_square_log(double big_lambda) { return big_lambda * big_lambda - 2.0 * big_lambda + 2.0; }

const ArithmeticTables& tables_of(const KernelContext& ctx) {
  if (!ctx.tables) throw Error(ErrorKind::Config, "KernelContext: tables not set");
  return *ctx.tables;
}

// u = 0 values of R + P and R, with R = regular part of (zeta'/zeta)' and P = |zeta|^2 - 1/u^2.
double regular_at_zero() {
  const double g0 = stieltjes_constant(0), g1 = stieltjes_constant(1);
  return -2.0 * g1 - g0 * g0;
}
double p_at_zero() {
  const double g0 = stieltjes_constant(0), g1 = stieltjes_constant(1);
  return 2.0 * g1 + g0 * g0;
}

double cut_radius(const TestFunction& omega, double level) {
  double hi = std::max(1.0, omega.truncation_radius());
  while (omega.tail_sup(hi) > level && hi < 1e7) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (omega.tail_sup(mid) > level ? lo : hi) = mid;
  }
  return hi;
}

// Trapezoid nodes u_k = k h on [0, radius]; the rule over the real line is
// spectrally accurate since the integrands are analytic in |Im u| < 1/2.
struct Nodes {
  std::vector<double> u;
  std::vector<double> w;
  double h = 0.0;
  double radius = 0.0;
  double discretization = 0.0;  // exp(-2 pi a / h + a W) with strip half-width a
};

constexpr double kStrip = 0.4;

// `growth` is the exponential rate W of the integrand off the real axis.
Nodes trapezoid_nodes(double radius, double growth) {
  Nodes n;
  n.h = std::min(0.1, kTwoPi * kStrip / (37.0 + kStrip * growth));
  const auto count = static_cast<std::size_t>(std::ceil(radius / n.h)) + 1;
  n.radius = n.h * static_cast<double>(count - 1);
  n.u.resize(count);
  n.w.assign(count, n.h);
  for (std::size_t k = 0; k < count; ++k) n.u[k] = n.h * static_cast<double>(k);
  n.w[0] = 0.5 * n.h;
  n.discretization = std::exp(-kTwoPi * kStrip / n.h + kStrip * growth);
  return n;
}

Nodes outer_nodes(const TestFunction& omega, double max_phase, double level, double log_height) {
  const double xi = omega.require_band_limit();
  return trapezoid_nodes(cut_radius(omega, level), log_height + max_phase + kTwoPi * xi);
}

std::vector<KernelParts> parts_on(std::span<const double> us, const KernelContext& ctx) {
  std::vector<KernelParts> parts(us.size());
  constexpr std::size_t kBlock = 20;
  const std::size_t chunks = (us.size() + kBlock - 1) / kBlock;
  parallel_chunks(chunks, ctx.threads, [&](std::size_t c) {
    const std::size_t end = std::min(us.size(), (c + 1) * kBlock);
    for (std::size_t i = c * kBlock; i < end; ++i) parts[i] = kernel_parts(us[i], ctx);
  });
  return parts;
}

// sum_j w_j bracket_j [omega(u_j) e^{i a u_j} + omega(-u_j) e^{-i a u_j}]
Bounded<cplx> integrate_even_bracket(const TestFunction& omega, double phase, const Nodes& nodes,
                                     const std::vector<double>& bracket, const std::vector<double>& bracket_err) {
  CompensatedComplexSum sum;
  double err = 0.0;
  double bmax = 0.0, mass = 0.0;
  for (std::size_t j = 0; j < nodes.u.size(); ++j) {
    const double u = nodes.u[j];
    const cplx e = std::polar(1.0, phase * u);
    const cplx f = omega.eval(u) * e + omega.eval(-u) * std::conj(e);
    sum += nodes.w[j] * bracket[j] * f;
    err += nodes.w[j] * bracket_err[j] * std::abs(f);
    mass += nodes.w[j] * std::abs(bracket[j] * f);
    bmax = std::max(bmax, std::abs(bracket[j]));
  }
  // omega beyond the cut, with the bracket bounded by its sampled maximum
  err += 2.0 * omega.tail_sup(nodes.radius) * bmax * nodes.radius + omega.interpolation_error() * bmax * 2.0 * nodes.radius;
  err += 2.0 * nodes.discretization * mass;
  return {sum.value(), err};
}

}  // namespace

void validate(const KernelContext& ctx) {
  tables_of(ctx);
  if (!(ctx.small_u_threshold > 0.0 && ctx.small_u_threshold < kPoleSubtractionRadius))
    throw Error(ErrorKind::Config, "KernelContext: small_u_threshold must lie in (0, 0.05)");
  if (!(ctx.tail_tol > 0.0)) throw Error(ErrorKind::Config, "KernelContext: tail_tol must be positive");
}

namespace {

KernelParts assemble_parts(double u, const Bounded<cplx>& b, const Bounded<cplx>& am1, const KernelContext& ctx) {
  KernelParts k;
  k.u = std::abs(u);
  k.b = b.value;
  if (k.u == 0.0) {
    k.regular = regular_at_zero();
    k.p = p_at_zero();
    k.a = 1.0;
    k.a_minus_one = 0.0;
    // log A(iu) = u^2 B(0) + O(u^4)
    k.a_curvature = b.value.real();
    k.error_bound = 2.0 * b.error_bound;
    return k;
  }
  const cplx s(1.0, k.u);
  const auto ld = zeta_logderiv_prime(s, ctx.em_cfg);
  k.logderiv = ld.value;
  k.regular = ld.regular_part;
  const cplx a = zeta_minus_pole(s, ctx.em_cfg);
  k.zeta = a + 1.0 / cplx(0.0, k.u);
  k.p = std::norm(a) - 2.0 * a.imag() / k.u;
  k.a_minus_one = am1.value;
  k.a = 1.0 + am1.value;
  k.error_bound = b.error_bound + std::norm(k.zeta) * am1.error_bound;
  return k;
}

}  // namespace

KernelParts kernel_parts(double u, const KernelContext& ctx) {
  validate(ctx);
  const auto& tb = tables_of(ctx);
  const double au = std::abs(u);
  const auto b = prime_sum_B(cplx(0.0, au), tb, ctx.tail_tol);
  const auto am1 = au == 0.0 ? Bounded<cplx>{} : euler_product_A_minus_one(cplx(0.0, au), tb, ctx.tail_tol);
  return assemble_parts(au, b, am1, ctx);
}

std::vector<KernelParts> kernel_parts_grid(double h, std::size_t count, const KernelContext& ctx) {
  validate(ctx);
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "kernel_parts_grid: need h > 0");
  const auto& tb = tables_of(ctx);
  std::vector<KernelParts> parts(count);
  constexpr std::size_t kBlock = 256;
  const std::size_t chunks = (count + kBlock - 1) / kBlock;
  parallel_chunks(chunks, ctx.threads, [&](std::size_t c) {
    const std::size_t k0 = c * kBlock, k1 = std::min(count, k0 + kBlock);
    const auto sums = prime_sums_on_grid(h * static_cast<double>(k0), h, k1 - k0, tb, ctx.tail_tol);
    for (std::size_t k = k0; k < k1; ++k)
      parts[k] = assemble_parts(h * static_cast<double>(k), sums.b[k - k0], sums.a_minus_one[k - k0], ctx);
  });
  return parts;
}

double q_from_parts(const KernelParts& k, double t, double thr) {
  const double lam = log_scale(t, "q_kernel");
  double re;
  if (k.u == 0.0) {
    re = k.regular.real() - k.b.real() + k.p - 0.5 * lam * lam + k.a_curvature;
  } else if (k.u >= thr) {
    const cplx e = std::polar(1.0, -k.u * lam);
    re = (k.logderiv - k.b + e * std::norm(k.zeta) * k.a).real();
  } else {
    const cplx e = std::polar(1.0, -k.u * lam);
    const double sh = std::sin(0.5 * k.u * lam);
    re = k.regular.real() - k.b.real() + (e * k.p * k.a).real() +
         (-2.0 * sh * sh + (e * k.a_minus_one).real()) / (k.u * k.u);
  }
  return kInvTwoPiSq * re;
}

double q_tilde_from_parts(const KernelParts& k, double t) {
  const double lam = log_scale(t, "q_tilde_kernel");
  if (k.u == 0.0) return kInvTwoPiSq * (k.regular.real() - k.b.real() - 0.5 * lam * lam);
  const double sh = std::sin(0.5 * k.u * lam);
  return kInvTwoPiSq * (k.regular.real() - k.b.real() - 2.0 * sh * sh / (k.u * k.u));
}

double q_kernel(double t, double u, const KernelContext& ctx) {
  log_scale(t, "q_kernel");
  return q_from_parts(kernel_parts(u, ctx), t, ctx.small_u_threshold);
}

double q_tilde_kernel(double t, double u, const KernelContext& ctx) {
  log_scale(t, "q_tilde_kernel");
  return q_tilde_from_parts(kernel_parts(u, ctx), t);
}

double gue_kernel(double t, double u) {
  const double lam = log_scale(t, "gue_kernel");
  if (u == 0.0) return -lam * lam / (4.0 * kPi * kPi);
  const double sh = std::sin(0.5 * lam * u);
  return -sh * sh / (kPi * kPi * u * u);
}

double gue_kernel_sinc_form(double t, double u) {
  const double lam = log_scale(t, "gue_kernel");
  const double scale = lam / kTwoPi;
  const double s = sinc_pi(scale * u);
  return -scale * scale * s * s;
}

double density_squared_tavg(double T) {
  const double big = log_scale(T, "density_squared_tavg");
  return mean_square_log(big) / (4.0 * kPi * kPi);
}

double q_tavg_from_parts(const KernelParts& k, double T) {
  const double big = log_scale(T, "q_kernel_tavg");
  double re;
  if (k.u == 0.0) {
    re = k.regular.real() - k.b.real() + k.p + k.a_curvature - 0.5 * mean_square_log(big);
  } else {
    const cplx em1 = tavg_phase_minus_one(k.u, big);
    const cplx e = 1.0 + em1;
    re = k.regular.real() - k.b.real() + (e * k.p * k.a).real() + (em1.real() + (e * k.a_minus_one).real()) / (k.u * k.u);
  }
  return kInvTwoPiSq * re;
}

double q_tilde_tavg_from_parts(const KernelParts& k, double T) {
  const double big = log_scale(T, "q_kernel_tavg");
  if (k.u == 0.0) return kInvTwoPiSq * (k.regular.real() - k.b.real() - 0.5 * mean_square_log(big));
  const cplx em1 = tavg_phase_minus_one(k.u, big);
  return kInvTwoPiSq * (k.regular.real() - k.b.real() + em1.real() / (k.u * k.u));
}

double gue_tavg(double T, double u) {
  const double big = log_scale(T, "gue_tavg");
  if (u == 0.0) return -mean_square_log(big) / (4.0 * kPi * kPi);
  return kInvTwoPiSq * tavg_phase_minus_one(std::abs(u), big).real() / (u * u);
}

double q_kernel_tavg(double T, double u, const KernelContext& ctx) {
  log_scale(T, "q_kernel_tavg");
  return q_tavg_from_parts(kernel_parts(u, ctx), T);
}

std::vector<Bounded<cplx>> pair_prediction_grid(const TestFunction& omega, std::span<const double> alphas, double T,
                                                const KernelContext& ctx, const PredictionOptions& opt) {
  log_scale(T, "pair_prediction");
  validate(ctx);
  const double L = opt.L > 0.0 ? opt.L : std::log(T);
  double amax = 0.0;
  for (const double a : alphas) amax = std::max(amax, std::abs(a));
  const Nodes nodes = outer_nodes(omega, amax * L, opt.omega_cut, std::log(T / kTwoPi));
  std::vector<double> bracket(nodes.u.size()), err(nodes.u.size());
  const double dens = density_squared_tavg(T);
  if (opt.kernel == KernelKind::K) {
    for (std::size_t j = 0; j < nodes.u.size(); ++j) bracket[j] = dens + gue_tavg(T, nodes.u[j]);
  } else {
    const auto parts = kernel_parts_grid(nodes.h, nodes.u.size(), ctx);
    for (std::size_t j = 0; j < nodes.u.size(); ++j) {
      bracket[j] = dens + (opt.kernel == KernelKind::Q ? q_tavg_from_parts(parts[j], T) : q_tilde_tavg_from_parts(parts[j], T));
      err[j] = kInvTwoPiSq * parts[j].error_bound;
    }
  }
  std::vector<Bounded<cplx>> out;
  out.reserve(alphas.size());
  for (const double a : alphas) out.push_back(integrate_even_bracket(omega, a * L, nodes, bracket, err));
  return out;
}

Bounded<cplx> pair_prediction(const TestFunction& omega, double alpha, double T, const KernelContext& ctx,
                              const PredictionOptions& opt) {
  const double a[1] = {alpha};
  return pair_prediction_grid(omega, a, T, ctx, opt).front();
}

Bounded<cplx> prediction_delta(const TestFunction& omega, double alpha, double T, DeltaKind kind,
                               const KernelContext& ctx, double L) {
  log_scale(T, "prediction_delta");
  validate(ctx);
  if (!(L > 0.0)) L = std::log(T);
  const Nodes nodes = outer_nodes(omega, std::abs(alpha) * L, 1e-12, std::log(T / kTwoPi));
  const auto parts = kernel_parts_grid(nodes.h, nodes.u.size(), ctx);
  std::vector<double> bracket(nodes.u.size()), err(nodes.u.size());
  for (std::size_t j = 0; j < nodes.u.size(); ++j) {
    const double q = q_tavg_from_parts(parts[j], T);
    const double qt = q_tilde_tavg_from_parts(parts[j], T);
    const double k = gue_tavg(T, nodes.u[j]);
    bracket[j] = kind == DeltaKind::D1 ? q - k : (kind == DeltaKind::D2 ? q - qt : qt - k);
    err[j] = kInvTwoPiSq * parts[j].error_bound;
  }
  return integrate_even_bracket(omega, alpha * L, nodes, bracket, err);
}

std::vector<double> prediction_density_curve(double T, std::span<const double> us, const KernelContext& ctx) {
  log_scale(T, "prediction_density_curve");
  validate(ctx);
  const auto parts = parts_on(us, ctx);
  const double dens = density_squared_tavg(T);
  std::vector<double> out(us.size());
  for (std::size_t j = 0; j < us.size(); ++j) out[j] = dens + q_tavg_from_parts(parts[j], T);
  return out;
}

namespace {

// g(v) = int r1^(xi) r2^(-xi - beta) e(v xi) dxi over the common support [a, b]
cplx hat_correlation(const TestFunction& r1, const TestFunction& r2, double beta, double a, double b, double v) {
  const auto panels = static_cast<std::size_t>(std::max(16.0, std::ceil(4.0 * (b - a) * (std::abs(v) + 1.0))));
  return quad::gauss_composite(
      [&](double xi) { return r1.eval_hat(xi) * r2.eval_hat(-xi - beta) * std::polar(1.0, kTwoPi * v * xi); }, a, b,
      panels);
}

}  // namespace

Bounded<cplx> windowed_prediction(const TestFunction& r1, const TestFunction& r2, double T, double alpha1,
                                  double alpha2, const KernelContext& ctx, double L) {
  const double lam = log_scale(T, "windowed_prediction");
  validate(ctx);
  if (!(L > 0.0)) L = std::log(T);
  const double x1 = r1.require_band_limit(), x2 = r2.require_band_limit();
  const double beta = (alpha1 + alpha2) * L;
  const double four_pi_sq = 4.0 * kPi * kPi;

  const cplx diag = (lam / kTwoPi) * (lam / kTwoPi) * r1.eval_hat(-alpha1 * L) * r2.eval_hat(-alpha2 * L);
  const double a = std::max(-x1, -beta - x2), b = std::min(x1, -beta + x2);
  if (!(b > a)) return {four_pi_sq * diag, 0.0};

  // extent of g from a scan out to the sum of the time-side radii
  const double reach = r1.truncation_radius() + r2.truncation_radius();
  constexpr double kScan = 0.25;
  double gmax = 0.0;
  std::vector<double> gabs;
  for (double v = 0.0; v <= reach; v += kScan) {
    const double m = std::max(std::abs(hat_correlation(r1, r2, beta, a, b, v)),
                              std::abs(hat_correlation(r1, r2, beta, a, b, -v)));
    gabs.push_back(m);
    gmax = std::max(gmax, m);
  }
  std::size_t last = 0;
  for (std::size_t i = 0; i < gabs.size(); ++i)
    if (gabs[i] > 1e-13 * gmax) last = i;
  const double vmax = std::min(reach, (last + 2) * kScan);
  double beyond = 0.0;
  for (std::size_t i = last + 1; i < gabs.size(); ++i) beyond = std::max(beyond, gabs[i]);

  // in u = 2 pi v: (1/2pi) int_0^inf Q_T(u) [e^{i a1 L u} g(u/2pi) + conj-side] du
  const Nodes nodes = trapezoid_nodes(kTwoPi * vmax, lam + std::abs(alpha1) * L + std::max(std::abs(a), std::abs(b)));
  const auto parts = kernel_parts_grid(nodes.h, nodes.u.size(), ctx);
  CompensatedComplexSum sum;
  double err = 0.0, qmax = 0.0, mass = 0.0;
  for (std::size_t j = 0; j < nodes.u.size(); ++j) {
    const double u = nodes.u[j], v = u / kTwoPi;
    const double q = q_from_parts(parts[j], T, ctx.small_u_threshold);
    const cplx e = std::polar(1.0, alpha1 * L * u);
    const cplx f = e * hat_correlation(r1, r2, beta, a, b, v) + std::conj(e) * hat_correlation(r1, r2, beta, a, b, -v);
    const double w = nodes.w[j] / kTwoPi;
    sum += w * q * f;
    err += w * kInvTwoPiSq * parts[j].error_bound * std::abs(f);
    mass += w * std::abs(q * f);
    qmax = std::max(qmax, std::abs(q));
  }
  err += 2.0 * beyond * qmax * (reach - vmax) + 2.0 * nodes.discretization * mass;
  return {four_pi_sq * (diag + sum.value()), four_pi_sq * err};
}

}  // namespace zetapair
