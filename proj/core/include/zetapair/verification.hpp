#pragma once

#include <string>

#include "zetapair/arithmetic.hpp"
#include "zetapair/numeric.hpp"
#include "zetapair/testfn.hpp"
#include "zetapair/zeros.hpp"

namespace zetapair {

struct CheckReport {
  std::string name;
  cplx lhs;
  cplx rhs;
  double residual = 0.0;  // |lhs - rhs|
  double budget = 0.0;    // truncation and quadrature bounds, > 0
  bool passed = false;    // residual <= budget + slack
  std::string note;       // hypotheses that failed, if any
};

inline constexpr double kCheckSlack = 1e-12;

// Weil explicit formula with g = f^ (time support [-Xi, Xi]) and g^(xi) = f(-xi):
//   sum_gamma f(-gamma/2pi) - int Omega(xi)/2pi f(-xi/2pi) dxi
//     = int [g(x) + g(-x)] e^{x/2} dx - sum_n Lambda(n)/sqrt(n) [g(log n) + g(-log n)].
// Throws InsufficientTables when e^Xi exceeds the tables and Precondition when
// the zeros do not reach the decay range of f.
CheckReport explicit_formula_check(const TestFunction& f, const ZeroList& zeros, const ArithmeticTables& tables);

// Zero height needed by explicit_formula_check for f.
double explicit_formula_required_height(const TestFunction& f);

// int digamma(a + sign i b t) J^(t) dt
//   = digamma(a) J(0) + int_0^inf e^{-ay}/(1 - e^{-y}) [J(0) - J(-sign b y/2pi)] dy,
// with J the time side of a band-limited test function. sign is +1 or -1.
CheckReport digamma_integral_check(const TestFunction& J, double a, double b, int sign);

enum class FloorVariant {
  Derived,  // (f^ - f^'') in the double integral
  Printed,  // (f^ + f^'')
};

// int f(u) (-1/(4 pi^2 u^2) + |zeta(1 + 2 pi i u)|^2) du
//   = f^(0) + int_1^inf int_0^inf F(log(y/x)) [1_{[0,1]}(x) x y - floor(y) frac(x)] dx/x^2 dy/y^2,
// F = f^ -+ f^'' per the variant. Needs f^'' (bump family).
CheckReport floor_identity_check(const TestFunction& f, double x_max, double y_max,
                                 FloorVariant variant = FloorVariant::Derived);

// sum_n [r^(-log n - a1 L) r^(log n - a2 L) + r^(log n - a1 L) r^(-log n - a2 L)] log n Lambda(n)/n
//   = int int r(v1) r(v2) e(a1 L v1 + a2 L v2) [lambda delta(v1 - v2) + 2 Re (zeta'/zeta)'(1 + 2 pi i v)
//       + 2 cos(2 pi v lambda)/(2 pi v)^2] dv1 dv2,  v = v1 - v2.
// When the support condition behind the identity fails, `note` says so and
// the check still runs.
CheckReport diagonal_sum_check(const TestFunction& r, double alpha1, double alpha2, double L, double lambda,
                               const ArithmeticTables& tables);

}  // namespace zetapair
