#include "zetapair/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "zetapair/error.hpp"
#include "zetapair/quadrature.hpp"
#include "zetapair/special.hpp"

namespace zetapair {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double cut_level(const TestFunction& f, double level) {
  double hi = std::max(1.0, f.truncation_radius());
  while (f.tail_sup(hi) > level && hi < 1e8) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f.tail_sup(mid) > level ? lo : hi) = mid;
  }
  return hi;
}

double time_scale(const TestFunction& f) { return std::max(1e-300, std::abs(f.eval(0.0))); }

CheckReport finish(CheckReport r) {
  r.residual = std::abs(r.lhs - r.rhs);
  r.budget = std::max(r.budget, 1e-300);
  r.passed = std::isfinite(r.residual) && r.residual <= r.budget + kCheckSlack;
  return r;
}

std::vector<double> hat_breakpoints(const TestFunction& f) {
  const double b = f.require_band_limit();
  std::vector<double> pts{-b, 0.0, b};
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// int |xi|^k |f^(xi)| dxi
double hat_moment(const TestFunction& f, int k) {
  const double b = f.require_band_limit();
  return quad::gauss_composite([&](double x) { return std::pow(std::abs(x), k) * std::abs(f.eval_hat(x)); }, -b, b,
                               256);
}

// Sum of f bounds over zeros in shells [U 2^j, U 2^{j+1}] (time variable u = gamma/2pi).
double zero_shell_tail(const TestFunction& f, double height) {
  double total = 0.0;
  double u = height / kTwoPi;
  for (int j = 0; j < 200; ++j) {
    const double term = 2.0 * f.tail_sup(u) * zero_count_bound(kTwoPi * u, 2.0 * kTwoPi * u);
    total += term;
    if (term < 1e-6 * total * kEps && j > 8) break;
    u *= 2.0;
  }
  return total;
}

// int_a^b |Omega(xi)|/2pi dxi, bounded via |Omega(xi)| <= log(xi/2 + 2) + 2.
double omega_mass(double a, double b) { return (b - a) * (std::log(b / 2.0 + 2.0) + 2.0) / kTwoPi; }

}  // namespace

double explicit_formula_required_height(const TestFunction& f) {
  return kTwoPi * cut_level(f, 1e-12 * time_scale(f));
}

CheckReport explicit_formula_check(const TestFunction& f, const ZeroList& zeros, const ArithmeticTables& tables) {
  CheckReport rep;
  rep.name = "explicit-formula";
  const double xi = f.require_band_limit();
  const double n_max = std::exp(xi);
  if (n_max > static_cast<double>(tables.limit)) {
    const auto need = static_cast<std::uint64_t>(std::ceil(n_max));
    throw InsufficientTablesError(tables.limit, need,
                                  "explicit_formula_check: tables must reach e^Xi = " + std::to_string(need));
  }
  const double height = explicit_formula_required_height(f);
  if (zeros.height_start != 0.0 || zeros.index_offset != 0 || zeros.height_covered < height ||
      (zeros.provenance == Provenance::Computed && !zeros.turing_verified)) {
    std::ostringstream os;
    os << "explicit_formula_check: needs a verified zero list from the origin to height " << height;
    throw Error(ErrorKind::Precondition, os.str());
  }

  // zero side
  CompensatedComplexSum zsum;
  double loc_err = 0.0, mag = 0.0;
  constexpr double kDiff = 1e-4;
  for (double g : zeros.ordinates) {
    if (g > zeros.height_covered) break;
    const double u = g / kTwoPi;
    const cplx val = f.eval(u) + f.eval(-u);
    zsum += val;
    mag += std::abs(val);
    const double slope = std::abs(f.eval(u + kDiff) - f.eval(u - kDiff)) / (2.0 * kDiff) +
                         std::abs(f.eval(-u + kDiff) - f.eval(-u - kDiff)) / (2.0 * kDiff);
    loc_err += slope * zeros.abs_error / kTwoPi;
  }
  const std::size_t count = zeros.count_below(zeros.height_covered);
  double budget = zero_shell_tail(f, zeros.height_covered) + loc_err +
                  2.0 * static_cast<double>(count) * f.interpolation_error() + 8.0 * kEps * mag;

  // smooth density of zeros
  const double reach = kTwoPi * cut_level(f, 1e-13 * time_scale(f));
  std::vector<double> pts;
  const double step = std::min(10.0, kPi / std::max(xi, 1e-3));
  for (double x = 0.0; x < reach; x += step) pts.push_back(x);
  pts.push_back(reach);
  quad::AdaptiveOptions opts;
  opts.abs_tol = 1e-13;
  opts.max_intervals = 200000;
  const auto dens = quad::adaptive_complex_breakpoints(
      [&](double x) { return omega_density(x) * (f.eval(x / kTwoPi) + f.eval(-x / kTwoPi)); }, pts, opts);
  budget += dens.error_bound + 2.0 * f.interpolation_error() * omega_mass(0.0, reach);
  {
    double u = reach / kTwoPi;
    for (int j = 0; j < 200; ++j) {
      const double term = 2.0 * f.tail_sup(u) * omega_mass(kTwoPi * u, 2.0 * kTwoPi * u);
      budget += term;
      if (term < 1e-20) break;
      u *= 2.0;
    }
  }
  rep.lhs = zsum.value() - dens.value;

  // prime side
  const auto bp = hat_breakpoints(f);
  const auto arch = quad::adaptive_complex_breakpoints(
      [&](double x) { return f.eval_hat(x) * 2.0 * std::cosh(0.5 * x); }, bp, opts);
  CompensatedComplexSum psum;
  double pmag = 0.0;
  const auto last = static_cast<std::uint64_t>(std::floor(n_max));
  for (std::uint64_t n = 2; n <= last; ++n) {
    const double lam = tables.lambda[n];
    if (lam == 0.0) continue;
    const double ln = std::log(static_cast<double>(n));
    const cplx t = lam / std::sqrt(static_cast<double>(n)) * (f.eval_hat(ln) + f.eval_hat(-ln));
    psum += t;
    pmag += std::abs(t);
  }
  rep.rhs = arch.value - psum.value();
  rep.budget = budget + arch.error_bound + 8.0 * kEps * pmag;
  return finish(rep);
}

CheckReport digamma_integral_check(const TestFunction& J, double a, double b, int sign) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorKind::Domain, "digamma_integral_check: needs a > 0 and b > 0");
  if (sign != 1 && sign != -1) throw Error(ErrorKind::InvalidArgument, "digamma_integral_check: sign must be +1 or -1");
  CheckReport rep;
  rep.name = "digamma-integral";
  const double xi = J.require_band_limit();
  const double s = static_cast<double>(sign);

  quad::AdaptiveOptions opts;
  opts.abs_tol = 1e-14;
  opts.max_intervals = 200000;
  const auto bp = hat_breakpoints(J);
  const auto lhs = quad::adaptive_complex_breakpoints(
      [&](double t) { return digamma(cplx(a, s * b * t)) * J.eval_hat(t); }, bp, opts);
  rep.lhs = lhs.value;

  const double c = -s * b / kTwoPi;
  const cplx j0 = J.eval(0.0);
  const double y0 = std::min(0.01, 0.1 / (kTwoPi * xi * std::abs(c) + 1.0));

  // near 0: J(0) - J(c y) = -sum_k J^{(k)}(0) (c y)^k / k!
  constexpr int kOrder = 12;
  std::vector<cplx> deriv(kOrder + 1);
  for (int k = 1; k <= kOrder; ++k) {
    deriv[k] = quad::adaptive_complex_breakpoints(
                   [&](double x) { return std::pow(cplx(0.0, kTwoPi * x), k) * J.eval_hat(x); }, bp, opts)
                   .value;
  }
  auto near = [&](double y) {
    cplx poly{};
    double fact = 1.0;
    for (int k = 1; k <= kOrder; ++k) {
      fact *= k;
      poly += deriv[k] * std::pow(c, k) * std::pow(y, k - 1) / fact;
    }
    const double kernel = y == 0.0 ? 1.0 : y / -std::expm1(-y);
    return -poly * std::exp(-a * y) * kernel;
  };
  const cplx i0 = quad::gauss_composite(near, 0.0, y0, 4);
  double fact = 1.0;
  for (int k = 2; k <= kOrder + 1; ++k) fact *= k;
  const double series_err = 1.01 * std::pow(kTwoPi, kOrder + 1) * hat_moment(J, kOrder + 1) *
                            std::pow(std::abs(c), kOrder + 1) * std::pow(y0, kOrder + 1) / fact / (kOrder + 1);

  const double jsup = quad::gauss_composite([&](double x) { return std::abs(J.eval_hat(x)); }, -xi, xi, 256);
  const double weight0 = 1.0 / -std::expm1(-y0);
  const double far = y0 + std::max(0.0, std::log(2.0 * jsup * weight0 / (a * 1e-16))) / a;
  std::vector<double> pts;
  const double step = std::max(0.05, std::min(5.0, 0.5 / (std::abs(c) * xi + 1e-300)));
  for (double y = y0; y < far; y += step) pts.push_back(y);
  pts.push_back(far);
  const auto i1 = quad::adaptive_complex_breakpoints(
      [&](double y) { return std::exp(-a * y) / -std::expm1(-y) * (j0 - J.eval(c * y)); }, pts, opts);
  const double tail = 2.0 * jsup * weight0 * std::exp(-a * far) / a;
  const double interp = 2.0 * J.interpolation_error() * weight0 / a;

  rep.rhs = digamma(cplx(a, 0.0)) * j0 + i0 + i1.value;
  rep.budget = lhs.error_bound + series_err + i1.error_bound + tail + interp +
               16.0 * kEps * (std::abs(rep.lhs) + std::abs(digamma(cplx(a, 0.0)) * j0) + jsup);
  return finish(rep);
}

namespace {

// |zeta(1 + iv)|^2 - 1/v^2 from a = zeta(s) - 1/(s-1).
double floor_kernel(double v) {
  if (std::abs(v) < 1e-6) {
    const double g0 = stieltjes_constant(0), g1 = stieltjes_constant(1);
    return g0 * g0 + 2.0 * g1;
  }
  const cplx a = zeta_minus_pole(cplx(1.0, v));
  return std::norm(a) - 2.0 * a.imag() / v;
}

struct FloorParts {
  cplx value;
  double error = 0.0;
};

// int_{x0}^{x1} int_{y0}^{y1} F(log(y/x)) bracket(x, y) dx/x^2 dy/y^2 with a
// tensor rule; the error is the difference to a lower-order rule.
template <typename Fn, typename Br>
FloorParts cell(Fn&& F, Br&& bracket, double x0, double x1, double y0, double y1, const quad::Rule& hi,
                const quad::Rule& lo) {
  auto run = [&](const quad::Rule& r) {
    cplx acc{};
    const double xm = 0.5 * (x0 + x1), xh = 0.5 * (x1 - x0);
    const double ym = 0.5 * (y0 + y1), yh = 0.5 * (y1 - y0);
    for (std::size_t j = 0; j < r.nodes.size(); ++j) {
      const double y = ym + yh * r.nodes[j];
      cplx row{};
      for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        const double x = xm + xh * r.nodes[i];
        row += r.weights[i] * F(std::log(y / x)) * (bracket(x, y) / (x * x));
      }
      acc += r.weights[j] * row / (y * y);
    }
    return acc * (xh * yh);
  };
  const cplx a = run(hi);
  return {a, std::abs(a - run(lo))};
}

}  // namespace

CheckReport floor_identity_check(const TestFunction& f, double x_max, double y_max, FloorVariant variant) {
  if (!f.smooth()) throw Error(ErrorKind::InvalidArgument, "floor_identity_check: needs a smooth band-limited f");
  const double xi = f.require_band_limit();
  if (!(y_max >= std::exp(xi) + 1.0) || !(x_max >= 2.0))
    throw Error(ErrorKind::InvalidArgument, "floor_identity_check: needs y_max >= e^Xi + 1 and x_max >= 2");
  CheckReport rep;
  rep.name = variant == FloorVariant::Derived ? "floor-identity" : "floor-identity-printed";
  const double sgn = variant == FloorVariant::Derived ? -1.0 : 1.0;
  auto F = [&](double t) {
    if (std::abs(t) >= xi) return cplx{};
    return f.eval_hat(t) + sgn * f.eval_hat_d2(t);
  };

  // time side
  double budget = 0.0;
  {
    const double radius = cut_level(f, 1e-12 * time_scale(f));
    const double width = std::min(1.0, 1.0 / xi);
    const auto panels = static_cast<std::size_t>(std::ceil(radius / width));
    auto g = [&](double u) { return (f.eval(u) + f.eval(-u)) * floor_kernel(kTwoPi * u); };
    CompensatedComplexSum coarse, fine;
    for (std::size_t i = 0; i < panels; ++i) {
      const double u0 = i * width, u1 = (i + 1) * width, um = 0.5 * (u0 + u1);
      coarse += quad::gauss_panel(g, u0, u1);
      fine += quad::gauss_panel(g, u0, um);
      fine += quad::gauss_panel(g, um, u1);
    }
    rep.lhs = fine.value();
    const double R = panels * width;
    double kmass = 0.0;  // int |kernel| over [0, R], with |zeta(1+iv)| <= log v + 1 for v >= 2pi
    budget += std::abs(fine.value() - coarse.value());
    kmass = R * std::pow(std::log(kTwoPi * R) + 2.0, 2);
    budget += 2.0 * f.interpolation_error() * kmass;
    double u = R;
    for (int j = 0; j < 200; ++j) {
      const double term = 2.0 * f.tail_sup(u) * u * std::pow(std::log(2.0 * kTwoPi * u) + 2.0, 2);
      budget += term;
      if (term < 1e-20) break;
      u *= 2.0;
    }
  }

  // double integral over unit cells in the band |log(y/x)| < Xi
  const quad::Rule hi = quad::gauss_rule(10), lo = quad::gauss_rule(8);
  const double ex = std::exp(xi);
  CompensatedComplexSum total;
  double qerr = 0.0;
  auto sub = [&](double z) { return static_cast<int>(std::ceil(std::max(1.0, 6.0 / (xi * std::max(z, 1e-3))))); };
  const auto rows = static_cast<long>(std::ceil(y_max)) - 1;
  for (long n = 1; n <= rows; ++n) {
    const double ya = static_cast<double>(n), yb = std::min(static_cast<double>(n + 1), y_max);
    const int ny = sub(ya);
    const double xa = ya / ex, xb = std::min(x_max, yb * ex);
    // x <= 1: bracket x {y} = x (y - n)
    if (xa < 1.0) {
      auto br = [n](double x, double y) { return x * (y - static_cast<double>(n)); };
      // split geometrically towards 0 where the band is thin
      double x0 = xa;
      while (x0 < 1.0) {
        const double x1 = std::min(1.0, x0 * (1.0 + xi / 6.0) + 1e-12);
        for (int j = 0; j < ny; ++j) {
          const double y0 = ya + (yb - ya) * j / ny, y1 = ya + (yb - ya) * (j + 1) / ny;
          const auto c = cell(F, br, x0, x1, y0, y1, hi, lo);
          total += c.value;
          qerr += c.error;
        }
        x0 = x1;
      }
    }
    // x > 1: bracket -n {x}
    for (long m = std::max(1L, static_cast<long>(std::floor(xa))); static_cast<double>(m) < xb; ++m) {
      const double x0 = std::max(static_cast<double>(m), xa), x1 = std::min(static_cast<double>(m + 1), xb);
      if (!(x1 > x0)) continue;
      auto br = [n, m](double x, double) { return -static_cast<double>(n) * (x - static_cast<double>(m)); };
      const int nx = sub(x0);
      for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
          const double xs0 = x0 + (x1 - x0) * i / nx, xs1 = x0 + (x1 - x0) * (i + 1) / nx;
          const double y0 = ya + (yb - ya) * j / ny, y1 = ya + (yb - ya) * (j + 1) / ny;
          const auto c = cell(F, br, xs0, xs1, y0, y1, hi, lo);
          total += c.value;
          qerr += c.error;
        }
    }
  }

  // sup |F| and int |F' + 2F| e^{2t} for the tail estimates
  double fsup = 0.0, dmass = 0.0;
  cplx cmean{};
  {
    constexpr int kN = 4096;
    const double h = 2.0 * xi / kN;
    for (int i = 0; i < kN; ++i) {
      const double t = -xi + (i + 0.5) * h;
      const cplx v = F(t);
      const cplx d = (F(t + 1e-5) - F(t - 1e-5)) / 2e-5;
      fsup = std::max(fsup, std::abs(v));
      dmass += std::abs(d + 2.0 * v) * std::exp(2.0 * t) * h;
      cmean += v * std::exp(t) * h;
    }
  }

  // x beyond x_max: -n/2 int F dx/x^2 exactly, plus the sawtooth bound
  double saw = 0.0;
  cplx mean_corr{};
  for (long n = 1; n <= rows; ++n) {
    const double ya = static_cast<double>(n), yb = std::min(static_cast<double>(n + 1), y_max);
    if (yb * ex <= x_max) continue;
    auto inner = [&](double y) {
      // (1/y) int_{-Xi}^{log(y/x_max)} F(t) e^t dt
      const double top = std::min(xi, std::log(y / x_max));
      if (top <= -xi) return cplx{};
      return quad::gauss_composite([&](double t) { return F(t) * std::exp(t); }, -xi, top, 8) / y;
    };
    mean_corr += -0.5 * static_cast<double>(n) * quad::gauss_composite([&](double y) { return inner(y) / (y * y); }, ya, yb, 1);
    saw += (yb - ya) * static_cast<double>(n) / (ya * ya) * 0.125 * (fsup / (x_max * x_max) + dmass / (ya * ya));
  }
  total += mean_corr;
  // y beyond y_max: the mean of frac(x) gives -C/(2y) per row, C = int F(t) e^t dt
  total += -0.5 * cmean / y_max;
  const double ytail = dmass / (16.0 * y_max * y_max) + std::abs(cmean) / (4.0 * y_max * y_max);

  rep.rhs = f.mass() + total.value();
  rep.budget = budget + qerr + saw + ytail + 1e-10 * std::abs(mean_corr);
  if (variant == FloorVariant::Printed) rep.note = "sign of the second-derivative term as printed";
  return finish(rep);
}

CheckReport diagonal_sum_check(const TestFunction& r, double alpha1, double alpha2, double L, double lambda,
                               const ArithmeticTables& tables) {
  if (!(L > 0.0) || !(lambda > 0.0))
    throw Error(ErrorKind::InvalidArgument, "diagonal_sum_check: needs L > 0 and lambda > 0");
  CheckReport rep;
  rep.name = "diagonal-sum";
  const double xi = r.require_band_limit();
  const double p1 = alpha1 * L, p2 = alpha2 * L;

  // support of the hat products in x = log n
  const double lo1 = std::max(-p1 - xi, p2 - xi), hi1 = std::min(-p1 + xi, p2 + xi);
  const double lo2 = std::max(p1 - xi, -p2 - xi), hi2 = std::min(p1 + xi, -p2 + xi);
  double x_top = 0.0;
  if (hi1 > lo1) x_top = std::max({x_top, std::abs(lo1), std::abs(hi1)});
  if (hi2 > lo2) x_top = std::max({x_top, std::abs(lo2), std::abs(hi2)});
  if (x_top > lambda) {
    std::ostringstream os;
    os << "hat products reach |log n| = " << x_top << " > lambda = " << lambda << "; identity not expected";
    rep.note = os.str();
  }
  const double n_top = std::exp(x_top);
  if (n_top > static_cast<double>(tables.limit)) {
    const auto need = static_cast<std::uint64_t>(std::ceil(n_top));
    throw InsufficientTablesError(tables.limit, need, "diagonal_sum_check: tables must reach " + std::to_string(need));
  }

  CompensatedComplexSum lsum;
  double lmag = 0.0;
  const auto last = static_cast<std::uint64_t>(std::floor(n_top));
  for (std::uint64_t n = 2; n <= last; ++n) {
    const double lam = tables.lambda[n];
    if (lam == 0.0) continue;
    const double ln = std::log(static_cast<double>(n));
    const cplx t = (r.eval_hat(-ln - p1) * r.eval_hat(ln - p2) + r.eval_hat(ln - p1) * r.eval_hat(-ln - p2)) * ln *
                   lam / static_cast<double>(n);
    lsum += t;
    lmag += std::abs(t);
  }
  rep.lhs = lsum.value();

  // G(v) = int r^(xi) r^(-xi - beta) e(v xi) dxi on [a, b]
  const double beta = p1 + p2;
  const double a = std::max(-xi, -beta - xi), b = std::min(xi, -beta + xi);
  double budget = 8.0 * kEps * lmag;
  if (!(b > a)) {
    rep.rhs = 0.0;
    rep.budget = budget;
    return finish(rep);
  }
  auto G = [&](double v) {
    const auto panels = static_cast<std::size_t>(std::max(16.0, std::ceil(4.0 * (b - a) * (std::abs(v) + 1.0))));
    return quad::gauss_composite(
        [&](double x) { return r.eval_hat(x) * r.eval_hat(-x - beta) * std::polar(1.0, kTwoPi * v * x); }, a, b,
        panels);
  };
  const double reach = 2.0 * r.truncation_radius();
  constexpr double kScan = 0.25;
  std::vector<double> gabs;
  double gmax = 0.0;
  for (double v = 0.0; v <= reach; v += kScan) {
    gabs.push_back(std::max(std::abs(G(v)), std::abs(G(-v))));
    gmax = std::max(gmax, gabs.back());
  }
  std::size_t lastk = 0;
  for (std::size_t i = 0; i < gabs.size(); ++i)
    if (gabs[i] > 1e-14 * gmax) lastk = i;
  const double vmax = std::min(reach, (lastk + 2) * kScan);
  double beyond = 0.0;
  for (std::size_t i = lastk + 1; i < gabs.size(); ++i) beyond = std::max(beyond, gabs[i]);

  // (1/2pi) int_0^inf K(u) [e^{i a1 L u} G(u/2pi) + e^{-i a1 L u} G(-u/2pi)] du,
  // K(u) = 2 Re R(u) - 4 sin^2(u lambda/2)/u^2 with R the regular part of (zeta'/zeta)'(1 + iu)
  constexpr double kStrip = 0.4;
  const double growth = lambda + std::abs(p1) + kTwoPi * std::max(std::abs(a), std::abs(b));
  const double h = std::min(0.1, kTwoPi * kStrip / (37.0 + kStrip * growth));
  const auto count = static_cast<std::size_t>(std::ceil(kTwoPi * vmax / h)) + 1;
  const double g0 = stieltjes_constant(0), g1 = stieltjes_constant(1);
  CompensatedComplexSum isum;
  double mass = 0.0, kmax = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const double u = h * static_cast<double>(k);
    double K;
    if (k == 0) {
      K = 2.0 * (-2.0 * g1 - g0 * g0) - lambda * lambda;
    } else {
      const auto ld = zeta_logderiv_prime(cplx(1.0, u));
      const double sn = std::sin(0.5 * u * lambda);
      K = 2.0 * ld.regular_part.real() - 4.0 * sn * sn / (u * u);
    }
    const cplx e = std::polar(1.0, p1 * u);
    const cplx val = K * (e * G(u / kTwoPi) + std::conj(e) * G(-u / kTwoPi));
    const double w = (k == 0 ? 0.5 * h : h) / kTwoPi;
    isum += w * val;
    mass += w * std::abs(val);
    kmax = std::max(kmax, std::abs(K));
  }
  const double disc = std::exp(-kTwoPi * kStrip / h + kStrip * growth);
  budget += 2.0 * disc * mass + 1e-11 * mass + 2.0 * beyond * kmax * (reach - vmax) + 8.0 * kEps * mass;
  rep.rhs = lambda * G(0.0) + isum.value();
  rep.budget = budget;
  return finish(rep);
}

}  // namespace zetapair
