#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace zetapair {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kEulerGamma = std::numbers::egamma;

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedComplexSum {
 public:
  void add(cplx x) {
    re_.add(x.real());
    im_.add(x.imag());
  }
  CompensatedComplexSum& operator+=(cplx x) {
    add(x);
    return *this;
  }
  cplx value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

// exp(z) - 1 without cancellation for small |z|.
cplx cexpm1(cplx z);
// log(1 + z) without cancellation for small |z|.
cplx clog1p(cplx z);

// sin(pi x) / (pi x), equal to 1 at x = 0.
double sinc_pi(double x);

// Value together with an absolute error bound.
template <typename T>
struct Bounded {
  T value{};
  double error_bound = 0.0;
};

// Runs `task(chunk)` for chunk = 0..chunks-1 on up to `threads` workers.
// Chunk boundaries are fixed by the caller, so any reduction done in chunk
// order afterwards is independent of the thread count.
void parallel_chunks(std::size_t chunks, unsigned threads,
                     const std::function<void(std::size_t)>& task);

// Number of worker threads to use when the caller passes 0.
unsigned default_threads();

}  // namespace zetapair
