#include "zetapair/special.hpp"

#include <array>
#include <cmath>

#include "zetapair/error.hpp"

namespace zetapair {
namespace {

// B_2, B_4, ..., B_28
constexpr std::array<double, 14> kBernoulli = {
    1.0 / 6.0,          -1.0 / 30.0,          1.0 / 42.0,          -1.0 / 30.0,
    5.0 / 66.0,         -691.0 / 2730.0,      7.0 / 6.0,           -3617.0 / 510.0,
    43867.0 / 798.0,    -174611.0 / 330.0,    854513.0 / 138.0,    -236364091.0 / 2730.0,
    8553103.0 / 6.0,    -23749461029.0 / 870.0};
constexpr int kMaxBernoulliTerms = 13;

// Stieltjes constants gamma_0 .. gamma_11 (mpmath, 30 digits).
constexpr std::array<double, 12> kStieltjes = {
    0.5772156649015328606065,     -0.07281584548367672486059,   -0.00969036319287231848453,
    0.00205383442030334586616,    0.002325370065467300057468,   0.0007933238173010627017533,
    -0.0002387693454301996098724, -0.0005272895670577510460741, -0.0003521233538030395096021,
    -0.00003439477441808804817791, 0.0002053328149090647946837,  0.0002701844395439035266729};

Jet operator*(const Jet& a, const Jet& b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}
Jet operator*(cplx c, const Jet& a) { return {c * a.v, c * a.d1, c * a.d2}; }
Jet& operator+=(Jet& a, const Jet& b) {
  a.v += b.v;
  a.d1 += b.d1;
  a.d2 += b.d2;
  return a;
}

// n^{-s} as a jet in s.
Jet power_jet(double log_n, cplx s) {
  const cplx v = std::exp(-s * log_n);
  return {v, -log_n * v, log_n * log_n * v};
}

double jet_norm(const Jet& j) { return std::max({std::abs(j.v), std::abs(j.d1), std::abs(j.d2)}); }

struct EmTail {
  Jet sum;          // corrections k = 1..M
  double bound;     // remainder estimate
};

// Bernoulli corrections sum_{k<=M} B_2k/(2k)! (s)_{2k-1} N^{-s-2k+1} and the
// remainder estimate from the first omitted term.
EmTail em_corrections(cplx s, int n, int m) {
  const double ln = std::log(static_cast<double>(n));
  const Jet ns = power_jet(ln, s);
  Jet poch{s, 1.0, 0.0};  // (s)_1
  double fact = 2.0;      // (2k)!
  double npow = 1.0 / n;  // N^{1-2k}
  Jet acc{};
  double bound = 0.0;
  for (int k = 1; k <= m + 1; ++k) {
    const Jet term = (kBernoulli[k - 1] / fact * npow) * (poch * ns);
    if (k <= m) {
      acc += term;
    } else {
      bound = 2.0 * jet_norm(term) * std::abs(s + static_cast<double>(2 * m + 1)) /
              (s.real() + 2 * m + 1);
    }
    poch = poch * Jet{s + static_cast<double>(2 * k - 1), 1.0, 0.0};
    poch = poch * Jet{s + static_cast<double>(2 * k), 1.0, 0.0};
    fact *= (2.0 * k + 1) * (2.0 * k + 2);
    npow /= static_cast<double>(n) * n;
  }
  return {acc, bound};
}

double remainder_bound(cplx s, int n, int m) { return em_corrections(s, n, m).bound; }

// Cutoff meeting the target, searched upward from a density-based guess.
int admissible_cutoff(cplx s, int m, double target) {
  const double t = std::abs(s.imag());
  int n = static_cast<int>(std::max(8.0, t / kTwoPi * 1.2 + 8.0));
  for (int iter = 0; iter < 200; ++iter) {
    if (remainder_bound(s, n, m) <= target) return n;
    n = static_cast<int>(n * 1.25) + 1;
  }
  throw Error(ErrorKind::Config, "Euler–Maclaurin: no admissible cutoff for the requested target");
}

int resolve_cutoff(cplx s, const EulerMaclaurinConfig& cfg) {
  if (cfg.bernoulli_terms < 1 || cfg.bernoulli_terms > kMaxBernoulliTerms)
    throw Error(ErrorKind::Config, "Euler–Maclaurin: bernoulli_terms must be in [1, 13]");
  if (!(cfg.target_abs_error > 0.0)) throw Error(ErrorKind::Config, "Euler–Maclaurin: target must be positive");
  if (cfg.cutoff == 0) return admissible_cutoff(s, cfg.bernoulli_terms, cfg.target_abs_error);
  if (cfg.cutoff < 1) throw Error(ErrorKind::Config, "Euler–Maclaurin: cutoff must be positive");
  if (!(remainder_bound(s, cfg.cutoff, cfg.bernoulli_terms) <= cfg.target_abs_error))
    throw Error(ErrorKind::Config, "Euler–Maclaurin: configuration not admissible at this point");
  return cfg.cutoff;
}

// sum_{n<N} n^{-s} + N^{-s}/2 + corrections, i.e. zeta(s) without N^{1-s}/(s-1).
Jet em_body(cplx s, int n, int m) {
  CompensatedComplexSum v, d1, d2;
  for (int k = 1; k < n; ++k) {
    const Jet j = power_jet(std::log(static_cast<double>(k)), s);
    v += j.v;
    d1 += j.d1;
    d2 += j.d2;
  }
  const Jet half = 0.5 * power_jet(std::log(static_cast<double>(n)), s);
  const Jet corr = em_corrections(s, n, m).sum;
  return {v.value() + half.v + corr.v, d1.value() + half.d1 + corr.d1, d2.value() + half.d2 + corr.d2};
}

void check_domain(cplx s) {
  if (s == cplx(1.0, 0.0)) throw Error(ErrorKind::Pole, "zeta: pole at s = 1");
  if (!(s.real() > 0.0)) throw Error(ErrorKind::Domain, "zeta: need Re s > 0");
}

}  // namespace

EulerMaclaurinConfig default_em_config(cplx s) {
  EulerMaclaurinConfig cfg;
  cfg.cutoff = static_cast<int>(10.0 * (1.0 + std::abs(s.imag())));
  return cfg;
}

Jet zeta_jet(cplx s, const EulerMaclaurinConfig& cfg) {
  check_domain(s);
  const int n = resolve_cutoff(s, cfg);
  Jet body = em_body(s, n, cfg.bernoulli_terms);
  // N^{1-s}/(s-1) = N^{-w}/w with w = s - 1.
  const double ln = std::log(static_cast<double>(n));
  const cplx w = s - 1.0;
  const cplx p = std::exp(-w * ln);
  const cplx v = p / w;
  // d/ds: p' = -ln p, so (p/w)' = -p(ln/w + 1/w^2), (p/w)'' = p(ln^2/w + 2 ln/w^2 + 2/w^3)
  const cplx d1 = -p * (ln / w + 1.0 / (w * w));
  const cplx d2 = p * (ln * ln / w + 2.0 * ln / (w * w) + 2.0 / (w * w * w));
  body += Jet{v, d1, d2};
  return body;
}

cplx zeta_derivatives(cplx s, int order, const EulerMaclaurinConfig& cfg) {
  if (order < 0 || order > 2) throw Error(ErrorKind::InvalidArgument, "zeta_derivatives: order must be 0, 1 or 2");
  const Jet j = zeta_jet(s, cfg);
  return order == 0 ? j.v : (order == 1 ? j.d1 : j.d2);
}

cplx zeta_minus_pole(cplx s, const EulerMaclaurinConfig& cfg) {
  check_domain(s);
  const int n = resolve_cutoff(s, cfg);
  const Jet body = em_body(s, n, cfg.bernoulli_terms);
  const double ln = std::log(static_cast<double>(n));
  const cplx w = s - 1.0;
  // N^{-w}/w - 1/w = cexpm1(-w ln N)/w
  cplx pole_free;
  const cplx x = -w * ln;
  if (std::abs(x) < 0.5) {
    // -ln sum_k x^k/(k+1)!
    cplx term = 1.0;
    cplx acc = 0.0;
    for (int k = 0; k < 30; ++k) {
      term /= static_cast<double>(k + 1);
      acc += term;
      term *= x;
    }
    pole_free = -ln * acc;
  } else {
    pole_free = cexpm1(x) / w;
  }
  return body.v + pole_free;
}

namespace detail {

cplx logderiv_prime_regular_laurent(cplx s) {
  // g(w) = w zeta(1 + w) = 1 + sum_n c_n w^{n+1}, c_n = (-1)^n gamma_n / n!
  const cplx w = s - 1.0;
  cplx g = 1.0, g1 = 0.0, g2 = 0.0;
  cplx wp = 1.0;  // w^n
  double fact = 1.0;
  for (std::size_t n = 0; n < kStieltjes.size(); ++n) {
    if (n > 0) fact *= static_cast<double>(n);
    const double c = ((n % 2) ? -1.0 : 1.0) * kStieltjes[n] / fact;
    const double k = static_cast<double>(n);
    g += c * wp * w;
    g1 += c * (k + 1.0) * wp;
    if (n + 1 < kStieltjes.size()) {
      const double c2 = ((n % 2) ? 1.0 : -1.0) * kStieltjes[n + 1] / (fact * (k + 1.0));
      g2 += c2 * (k + 2.0) * (k + 1.0) * wp;
    }
    wp *= w;
  }
  const cplx r = g1 / g;
  return g2 / g - r * r;
}

cplx logderiv_prime_direct(cplx s, const EulerMaclaurinConfig& cfg) {
  const Jet j = zeta_jet(s, cfg);
  const cplx r = j.d1 / j.v;
  return j.d2 / j.v - r * r;
}

}  // namespace detail

RegularizedLogDeriv zeta_logderiv_prime(cplx s, const EulerMaclaurinConfig& cfg) {
  check_domain(s);
  const cplx w = s - 1.0;
  const cplx pole = 1.0 / (w * w);
  if (std::abs(w) < kPoleSubtractionRadius) {
    const cplx reg = detail::logderiv_prime_regular_laurent(s);
    return {reg + pole, true, reg};
  }
  const cplx v = detail::logderiv_prime_direct(s, cfg);
  return {v, false, v - pole};
}

double stieltjes_constant(int n) {
  if (n < 0 || n >= static_cast<int>(kStieltjes.size()))
    throw Error(ErrorKind::InvalidArgument, "stieltjes_constant: index out of range");
  return kStieltjes[static_cast<std::size_t>(n)];
}

cplx digamma(cplx z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
    throw Error(ErrorKind::Pole, "digamma: pole at a nonpositive integer");
  if (z.real() < 0.5) {
    // psi(z) = psi(1 - z) - pi cot(pi z)
    return digamma(1.0 - z) - kPi / std::tan(kPi * z);
  }
  cplx shift = 0.0;
  while (std::abs(z) < 15.0) {
    shift -= 1.0 / z;
    z += 1.0;
  }
  const cplx iz2 = 1.0 / (z * z);
  cplx series = 0.0;
  cplx p = iz2;
  for (int k = 1; k <= 10; ++k) {
    series += kBernoulli[k - 1] / (2.0 * k) * p;
    p *= iz2;
  }
  return shift + std::log(z) - 0.5 / z - series;
}

cplx log_gamma(cplx z) {
  if (!(z.real() > 0.0)) throw Error(ErrorKind::Domain, "log_gamma: need Re z > 0");
  cplx shift = 0.0;
  while (std::abs(z) < 15.0) {
    shift -= std::log(z);
    z += 1.0;
  }
  const cplx iz = 1.0 / z;
  const cplx iz2 = iz * iz;
  cplx series = 0.0;
  cplx p = iz;
  for (int k = 1; k <= 10; ++k) {
    series += kBernoulli[k - 1] / (2.0 * k * (2.0 * k - 1.0)) * p;
    p *= iz2;
  }
  return shift + (z - 0.5) * std::log(z) - z + 0.5 * std::log(kTwoPi) + series;
}

double omega_density(double xi) {
  return (digamma(cplx(0.25, 0.5 * xi)).real() - std::log(kPi)) / kTwoPi;
}

double rs_theta(double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::Domain, "rs_theta: need t > 0");
  if (t >= 10.0) {
    const double it = 1.0 / t;
    const double it2 = it * it;
    const double series =
        it * (1.0 / 48.0 +
              it2 * (7.0 / 5760.0 + it2 * (31.0 / 80640.0 + it2 * (127.0 / 430080.0 + it2 * 511.0 / 1216512.0))));
    return 0.5 * t * std::log(t / kTwoPi) - 0.5 * t - kPi / 8.0 + series;
  }
  return log_gamma(cplx(0.25, 0.5 * t)).imag() - 0.5 * t * std::log(kPi);
}

double smooth_count(double T) { return rs_theta(T) / kPi + 1.0; }

}  // namespace zetapair
