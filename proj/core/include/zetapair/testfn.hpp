#pragma once

#include <memory>
#include <string>

#include "zetapair/numeric.hpp"

namespace zetapair {

enum class Parity { Even, None };

namespace detail {
struct TestFunctionImpl;
}

// A function f given through its Fourier transform f^(xi) = int e(-x xi) f(x) dx.
// Immutable; copies share the precomputed time-side table.
class TestFunction {
 public:
  // time side f(u); zero past the bump table, where |f| <= tail_sup
  cplx eval(double u) const;
  double eval_real(double u) const { return eval(u).real(); }
  // transform side f^(xi) and its second derivative
  cplx eval_hat(double xi) const;
  cplx eval_hat_d2(double xi) const;

  // Xi with f^ = 0 outside [-Xi, Xi]; infinity when not band-limited.
  double band_limit() const;
  bool band_limited() const;
  // band_limit(), or a BandLimit error when it is infinite.
  double require_band_limit() const;

  Parity parity() const;
  bool is_real() const;
  // false when f^ is only continuous (Fejér) or has a kink (Montgomery w)
  bool smooth() const;
  // f^(0)
  cplx mass() const;
  // Smallest U with sup_{|u| >= U} |f(u)| <= 1e-8.
  double truncation_radius() const;
  // Upper bound for |f(u)| on |u| >= U (U >= 0).
  double tail_sup(double U) const;
  // Certified error of the tabulated time side.
  double interpolation_error() const;
  // Normalization factor relating the time side to its family prototype.
  double normalization() const;

  // c f, and f(u) e(xi0 u) whose transform is f^(xi - xi0).
  TestFunction scaled(cplx c) const;
  TestFunction modulated(double xi0) const;

  std::string family() const;
  std::string describe() const;

 private:
  friend TestFunction make_fejer(double);
  friend TestFunction make_smooth_bump(double, bool);
  friend TestFunction montgomery_weight();
  std::shared_ptr<const detail::TestFunctionImpl> impl_;
  cplx factor_{1.0, 0.0};
  double shift_ = 0.0;
};

// f^(xi) = (1/scale)(1 - |xi|/scale)_+, f(u) = (sin(pi scale u)/(pi scale u))^2.
TestFunction make_fejer(double scale);

// f^(xi) = exp(1 - 1/(1 - (xi/Xi)^2)) on |xi| < Xi (hat(0) = 1) when
// normalize_mass, otherwise exp(-1/(1 - (xi/Xi)^2)).
TestFunction make_smooth_bump(double band_limit, bool normalize_mass = true);

// w(u) = 4/(4 + u^2), w^(xi) = 2 pi exp(-4 pi |xi|). Not band-limited.
TestFunction montgomery_weight();

}  // namespace zetapair
