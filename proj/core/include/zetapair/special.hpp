#pragma once

#include "zetapair/numeric.hpp"

namespace zetapair {

struct EulerMaclaurinConfig {
  // Number of direct terms; 0 selects the smallest admissible cutoff.
  int cutoff = 0;
  int bernoulli_terms = 12;
  double target_abs_error = 1e-12;
};

// Default configuration for the point s: cutoff about 10 (1 + |Im s|).
EulerMaclaurinConfig default_em_config(cplx s);

// Value and first two derivatives in s.
struct Jet {
  cplx v;
  cplx d1;
  cplx d2;
};

// zeta, zeta', zeta'' at s by Euler–Maclaurin. Throws Pole at s = 1 and
// Config when the remainder bound at s exceeds cfg.target_abs_error.
Jet zeta_jet(cplx s, const EulerMaclaurinConfig& cfg = {});
cplx zeta_derivatives(cplx s, int order, const EulerMaclaurinConfig& cfg = {});

// zeta(s) - 1/(s - 1), computed without cancellation near s = 1.
cplx zeta_minus_pole(cplx s, const EulerMaclaurinConfig& cfg = {});

struct RegularizedLogDeriv {
  cplx value;
  bool pole_subtracted = false;
  // value - 1/(s-1)^2
  cplx regular_part;
};

inline constexpr double kPoleSubtractionRadius = 0.05;

// (zeta'/zeta)'(s). Inside |s - 1| < 0.05 the Laurent expansion in Stieltjes
// constants is used and pole_subtracted is set.
RegularizedLogDeriv zeta_logderiv_prime(cplx s, const EulerMaclaurinConfig& cfg = {});

namespace detail {
// The two evaluation paths, exposed for overlap testing.
cplx logderiv_prime_regular_laurent(cplx s);
cplx logderiv_prime_direct(cplx s, const EulerMaclaurinConfig& cfg);
}  // namespace detail

// Stieltjes constant gamma_n, 0 <= n <= 11.
double stieltjes_constant(int n);

// Gamma'/Gamma. Throws Pole at nonpositive integers.
cplx digamma(cplx z);

// log Gamma(z) for Re z > 0, continuous along horizontal lines from the real axis.
cplx log_gamma(cplx z);

// Omega(xi) / 2 pi = (Re digamma(1/4 + i xi/2) - log pi) / 2 pi.
double omega_density(double xi);

// Riemann–Siegel theta. Throws Domain for t <= 0.
double rs_theta(double t);

// theta(T)/pi + 1.
double smooth_count(double T);

}  // namespace zetapair
