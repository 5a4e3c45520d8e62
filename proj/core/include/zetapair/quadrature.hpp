#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "zetapair/numeric.hpp"

namespace zetapair::quad {

inline constexpr std::size_t kGaussPoints = 20;

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
// Gauss–Legendre rule with the given number of points on [-1, 1].
Rule gauss_rule(std::size_t points);

// Nodes on [-1, 1] and weights of the 20-point Gauss–Legendre rule.
const std::array<double, kGaussPoints>& gauss_nodes();
const std::array<double, kGaussPoints>& gauss_weights();

// Single 20-point Gauss–Legendre panel. F may return double or cplx.
template <typename F>
auto gauss_panel(F&& f, double a, double b) {
  using R = decltype(f(a));
  const auto& x = gauss_nodes();
  const auto& w = gauss_weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  R acc{};
  for (std::size_t k = 0; k < kGaussPoints; ++k) acc += w[k] * f(mid + half * x[k]);
  return acc * half;
}

// Composite rule over `panels` equal panels of [a, b].
template <typename F>
auto gauss_composite(F&& f, double a, double b, std::size_t panels) {
  using R = decltype(f(a));
  const double h = (b - a) / static_cast<double>(panels);
  if constexpr (std::is_same_v<R, cplx>) {
    CompensatedComplexSum sum;
    for (std::size_t i = 0; i < panels; ++i) sum += gauss_panel(f, a + i * h, a + (i + 1) * h);
    return sum.value();
  } else {
    CompensatedSum sum;
    for (std::size_t i = 0; i < panels; ++i) sum += gauss_panel(f, a + i * h, a + (i + 1) * h);
    return sum.value();
  }
}

struct AdaptiveOptions {
  double abs_tol = 1e-12;
  double rel_tol = 0.0;
  std::size_t max_intervals = 4000;
};

// Globally adaptive Gauss–Kronrod (7/15) quadrature. The error estimate is
// the sum of |K15 - G7| over the final partition.
Bounded<double> adaptive(const std::function<double(double)>& f, double a, double b,
                         const AdaptiveOptions& opts = {});
Bounded<cplx> adaptive_complex(const std::function<cplx(double)>& f, double a, double b,
                               const AdaptiveOptions& opts = {});

// Same, with the interval pre-split at the given ascending breakpoints.
Bounded<double> adaptive_breakpoints(const std::function<double(double)>& f,
                                     std::span<const double> breakpoints,
                                     const AdaptiveOptions& opts = {});
Bounded<cplx> adaptive_complex_breakpoints(const std::function<cplx(double)>& f,
                                           std::span<const double> breakpoints,
                                           const AdaptiveOptions& opts = {});

}  // namespace zetapair::quad
