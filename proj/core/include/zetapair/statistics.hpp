#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "zetapair/numeric.hpp"
#include "zetapair/testfn.hpp"
#include "zetapair/zeros.hpp"

namespace zetapair {

struct PairSumResult {
  cplx value;
  std::uint64_t pairs_used = 0;   // ordered pairs inside the truncation radius
  double truncation_radius = 0.0;
  double neglected_bound = 0.0;   // bound on the dropped part of the (1/T)-normalized sum
};

// (1/T) sum over ordered pairs 0 < g != g' <= T of omega(g - g') e(alpha (L/2pi)(g - g')).
// L = 0 selects log T. Requires a Turing-verified list from the origin covering T.
PairSumResult pair_sum(const ZeroList& zeros, const TestFunction& omega, double alpha, double T, double L = 0.0,
                       unsigned threads = 0);

// (2pi/(T log T)) sum_{0 < g, g' <= T} T^{i alpha (g - g')} w(g - g'), w(u) = 4/(4 + u^2).
double montgomery_F(const ZeroList& zeros, double alpha, double T, unsigned threads = 0);

struct WindowedOptions {
  double L = 0.0;          // 0 selects log T
  unsigned threads = 0;
};

// (1/H) int sigma((t - T)/H) sum_{g != g'} r1((g - t)/2pi) r2((g' - t)/2pi)
//     e(a1 (L/2pi)(g - t) + a2 (L/2pi)(g' - t)) dt.
// Throws Precondition (with the required window) when the list does not cover it.
Bounded<cplx> windowed_pair_statistic(const ZeroList& zeros, const TestFunction& r1, const TestFunction& r2,
                                      const TestFunction& sigma, double T, double H, double alpha1, double alpha2,
                                      const WindowedOptions& opt = {});

// Zero window [lo, hi] needed by windowed_pair_statistic.
struct Window {
  double lo = 0.0;
  double hi = 0.0;
};
Window windowed_coverage(const TestFunction& r1, const TestFunction& r2, const TestFunction& sigma, double T,
                         double H);

struct Histogram {
  double bin_width = 0.0;
  double origin = 0.0;              // left edge of bin 0
  std::vector<std::uint64_t> counts;  // bin k is (origin + k w, origin + (k+1) w]
  double lo = 0.0;
  double hi = 0.0;

  double bin_center(std::size_t k) const { return origin + (static_cast<double>(k) + 0.5) * bin_width; }
  std::uint64_t total() const;
};

// Positive differences g - g' (g > g') falling in (lo, hi].
Histogram diff_histogram(const ZeroList& zeros, double bin_width, double lo, double hi);

// Expected spacing 2pi / log(t/2pi).
double mean_gap(double t);

}  // namespace zetapair
