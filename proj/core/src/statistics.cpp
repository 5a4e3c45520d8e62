#include "zetapair/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "zetapair/error.hpp"
#include "zetapair/quadrature.hpp"

namespace zetapair {
namespace {

constexpr std::size_t kPairChunk = 256;
constexpr std::size_t kPanelChunk = 16;

std::size_t verified_count(const ZeroList& zeros, double T, const char* who) {
  if (!zeros.turing_verified || zeros.height_start != 0.0 || zeros.index_offset != 0 || zeros.height_covered < T) {
    std::ostringstream os;
    os << who << ": need a Turing-verified zero list from the origin covering T = " << T;
    throw Error(ErrorKind::Precondition, os.str());
  }
  const auto& g = zeros.ordinates;
  return static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), T) - g.begin());
}

// Bound on sum over zeros with |g - t| > 2 pi R of |r((g - t)/2pi)|, t > 0,
// counting the mirrored negative ordinates.
double far_mass(const TestFunction& r, double R, double t) {
  if (R <= 0.0) R = 1.0;
  double total = 0.0;
  for (int k = 0; k < 64; ++k) {
    const double u0 = R * std::ldexp(1.0, k), u1 = 2.0 * u0;
    const double sup = r.tail_sup(u0);
    if (sup == 0.0) break;
    const double up = zero_count_bound(t + kTwoPi * u0, t + kTwoPi * u1);
    const double lo_a = std::max(0.0, t - kTwoPi * u1), lo_b = std::max(0.0, t - kTwoPi * u0);
    double down = lo_b > lo_a ? zero_count_bound(lo_a, lo_b) : 0.0;
    // negative ordinates -g lie at distance t + g
    if (t - kTwoPi * u1 < 0.0) down += zero_count_bound(std::max(0.0, kTwoPi * u0 - t), kTwoPi * u1 - t);
    total += sup * (up + down);
    if (sup * u1 * std::log(t + kTwoPi * u1 + 10.0) < 1e-300) break;
  }
  return total;
}

// Ordered pairs (i, j), i != j, among g[0..n) with |g_j - g_i| > U.
std::uint64_t pairs_beyond(const std::vector<double>& g, std::size_t n, double U) {
  std::uint64_t c = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (j < i) j = i;
    while (j < n && g[j] - g[i] <= U) ++j;
    c += n - j;
  }
  return 2 * c;
}

}  // namespace

double mean_gap(double t) {
  if (!(t > kTwoPi * std::exp(1.0))) return 2.0 * kPi;
  return kTwoPi / std::log(t / kTwoPi);
}

PairSumResult pair_sum(const ZeroList& zeros, const TestFunction& omega, double alpha, double T, double L,
                       unsigned threads) {
  if (!(T > 0.0)) throw Error(ErrorKind::InvalidArgument, "pair_sum: T must be positive");
  const std::size_t n = verified_count(zeros, T, "pair_sum");
  if (!(L > 0.0)) L = std::log(T);
  const auto& g = zeros.ordinates;
  const double R = omega.truncation_radius();
  const double phase = alpha * L;

  const std::size_t chunks = (n + kPairChunk - 1) / kPairChunk;
  std::vector<cplx> partial(chunks);
  std::vector<std::uint64_t> used(chunks);
  parallel_chunks(chunks, threads, [&](std::size_t c) {
    const std::size_t i0 = c * kPairChunk, i1 = std::min(n, i0 + kPairChunk);
    CompensatedComplexSum sum;
    std::uint64_t cnt = 0;
    std::size_t lo = static_cast<std::size_t>(std::lower_bound(g.begin(), g.begin() + n, g[i0] - R) - g.begin());
    std::size_t hi = lo;
    for (std::size_t i = i0; i < i1; ++i) {
      while (g[i] - g[lo] > R) ++lo;
      while (hi < n && g[hi] - g[i] <= R) ++hi;
      for (std::size_t j = lo; j < hi; ++j) {
        if (j == i) continue;
        const double d = g[i] - g[j];
        sum += omega.eval(d) * std::polar(1.0, phase * d);
        ++cnt;
      }
    }
    partial[c] = sum.value();
    used[c] = cnt;
  });
  PairSumResult res;
  CompensatedComplexSum total;
  for (std::size_t c = 0; c < chunks; ++c) {
    total += partial[c];
    res.pairs_used += used[c];
  }
  res.value = total.value() / T;
  res.truncation_radius = R;

  // dyadic shells beyond R, each weighted by the tail sup at its inner edge
  double neglected = omega.interpolation_error() * static_cast<double>(res.pairs_used);
  if (n > 1) {
    const double span = g[n - 1] - g[0];
    double U = std::max(R, 1e-300);
    std::uint64_t inner = pairs_beyond(g, n, U);
    while (inner > 0) {
      const double U2 = std::max(2.0 * U, U + 1.0);
      const std::uint64_t outer = U2 >= span ? 0 : pairs_beyond(g, n, U2);
      neglected += omega.tail_sup(U) * static_cast<double>(inner - outer);
      inner = outer;
      U = U2;
    }
  }
  res.neglected_bound = neglected / T;
  return res;
}

double montgomery_F(const ZeroList& zeros, double alpha, double T, unsigned threads) {
  if (!(T > 1.0)) throw Error(ErrorKind::InvalidArgument, "montgomery_F: T must exceed 1");
  const std::size_t n = verified_count(zeros, T, "montgomery_F");
  const auto& g = zeros.ordinates;
  const double phase = alpha * std::log(T);
  const std::size_t chunks = (n + kPairChunk - 1) / kPairChunk;
  std::vector<double> partial(chunks);
  parallel_chunks(chunks, threads, [&](std::size_t c) {
    const std::size_t i0 = c * kPairChunk, i1 = std::min(n, i0 + kPairChunk);
    CompensatedSum sum;
    for (std::size_t i = i0; i < i1; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = g[j] - g[i];
        sum += std::cos(phase * d) * 4.0 / (4.0 + d * d);
      }
    }
    partial[c] = sum.value();
  });
  CompensatedSum total;
  for (const double p : partial) total += p;
  const double s = static_cast<double>(n) + 2.0 * total.value();
  return kTwoPi / (T * std::log(T)) * s;
}

Window windowed_coverage(const TestFunction& r1, const TestFunction& r2, const TestFunction& sigma, double T,
                         double H) {
  const double reach = kTwoPi * std::max(r1.truncation_radius(), r2.truncation_radius());
  const double half = H * sigma.truncation_radius();
  return {T - half - reach, T + half + reach};
}

Bounded<cplx> windowed_pair_statistic(const ZeroList& zeros, const TestFunction& r1, const TestFunction& r2,
                                      const TestFunction& sigma, double T, double H, double alpha1, double alpha2,
                                      const WindowedOptions& opt) {
  if (!(T > kTwoPi) || !(H > 0.0) || H > T)
    throw Error(ErrorKind::InvalidArgument, "windowed_pair_statistic: need T > 2 pi and 0 < H <= T");
  const double L = opt.L > 0.0 ? opt.L : std::log(T);
  const Window win = windowed_coverage(r1, r2, sigma, T, H);
  const bool from_origin = zeros.height_start == 0.0 && zeros.index_offset == 0;
  if (!zeros.turing_verified || zeros.height_covered < win.hi ||
      (win.lo < 0.0 ? !from_origin : zeros.height_start > win.lo)) {
    std::ostringstream os;
    os << "windowed_pair_statistic: zeros must be verified over [" << std::max(0.0, win.lo) << ", " << win.hi
       << "]";
    throw Error(ErrorKind::Precondition, os.str());
  }

  // zeros in the window, with mirrored negative ordinates when it reaches below 0
  std::vector<double> g;
  for (auto it = zeros.ordinates.rbegin(); it != zeros.ordinates.rend(); ++it)
    if (-*it >= win.lo) g.push_back(-*it);
  for (const double x : zeros.ordinates)
    if (x >= win.lo && x <= win.hi) g.push_back(x);
  std::vector<cplx> e1(g.size()), e2(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    e1[k] = std::polar(1.0, alpha1 * L * g[k]);
    e2[k] = std::polar(1.0, alpha2 * L * g[k]);
  }

  const double rad1 = r1.truncation_radius(), rad2 = r2.truncation_radius();
  const double reach = kTwoPi * std::max(rad1, rad2);
  const double half = H * sigma.truncation_radius();
  const double h = std::min(mean_gap(T), H / 50.0);
  const auto panels = static_cast<std::size_t>(std::ceil(2.0 * half / h));
  const double width = 2.0 * half / static_cast<double>(panels);
  const double t0 = T - half;
  const double beta = (alpha1 + alpha2) * L;

  struct Partial {
    cplx sum;
    double sigma_l1 = 0.0;
    double amax = 0.0, bmax = 0.0;
    std::size_t nmax = 0;
  };
  const std::size_t chunks = (panels + kPanelChunk - 1) / kPanelChunk;
  std::vector<Partial> parts(chunks);
  const auto& gx = quad::gauss_nodes();
  const auto& gw = quad::gauss_weights();
  parallel_chunks(chunks, opt.threads, [&](std::size_t c) {
    Partial out;
    CompensatedComplexSum sum;
    const std::size_t p1 = std::min(panels, (c + 1) * kPanelChunk);
    for (std::size_t p = c * kPanelChunk; p < p1; ++p) {
      const double mid = t0 + (static_cast<double>(p) + 0.5) * width;
      for (std::size_t k = 0; k < quad::kGaussPoints; ++k) {
        const double t = mid + 0.5 * width * gx[k];
        const double wt = 0.5 * width * gw[k];
        const cplx s = sigma.eval((t - T) / H) / H;
        const auto lo = std::lower_bound(g.begin(), g.end(), t - reach) - g.begin();
        const auto hi = std::upper_bound(g.begin(), g.end(), t + reach) - g.begin();
        cplx sa = 0.0, sb = 0.0, sab = 0.0;
        for (auto j = lo; j < hi; ++j) {
          const double x = (g[j] - t) / kTwoPi;
          const cplx a = std::abs(x) <= rad1 ? r1.eval(x) * e1[j] : cplx(0.0);
          const cplx b = std::abs(x) <= rad2 ? r2.eval(x) * e2[j] : cplx(0.0);
          sa += a;
          sb += b;
          sab += a * b;
        }
        const cplx val = s * std::polar(1.0, -beta * t) * (sa * sb - sab);
        sum += wt * val;
        out.sigma_l1 += wt * std::abs(s);
        out.amax = std::max(out.amax, std::abs(sa));
        out.bmax = std::max(out.bmax, std::abs(sb));
        out.nmax = std::max(out.nmax, static_cast<std::size_t>(hi - lo));
      }
    }
    out.sum = sum.value();
    parts[c] = out;
  });

  CompensatedComplexSum total;
  double sigma_l1 = 0.0, amax = 0.0, bmax = 0.0;
  std::size_t nmax = 0;
  for (const auto& p : parts) {
    total += p.sum;
    sigma_l1 += p.sigma_l1;
    amax = std::max(amax, p.amax);
    bmax = std::max(bmax, p.bmax);
    nmax = std::max(nmax, p.nmax);
  }
  // truncation of r1, r2 in gamma and of sigma in t
  const double top = T + half;
  const double f1 = far_mass(r1, rad1, top) + r1.interpolation_error() * static_cast<double>(nmax);
  const double f2 = far_mass(r2, rad2, top) + r2.interpolation_error() * static_cast<double>(nmax);
  const double sup1 = amax + f1, sup2 = bmax + f2;
  double err = sigma_l1 * (f1 * sup2 + f2 * sup1 + f1 * f2 + std::min(f1 * sup2, f2 * sup1));
  double sigma_tail = 0.0;
  for (int k = 0; k < 64; ++k) {
    const double u0 = sigma.truncation_radius() * std::ldexp(1.0, k);
    const double sup = sigma.tail_sup(u0);
    sigma_tail += 2.0 * sup * u0;
    if (sup * u0 < 1e-300) break;
  }
  err += sigma_tail * (sup1 * sup2 + sup1 * sup2);
  return {total.value(), err};
}

std::uint64_t Histogram::total() const {
  std::uint64_t s = 0;
  for (const auto c : counts) s += c;
  return s;
}

Histogram diff_histogram(const ZeroList& zeros, double bin_width, double lo, double hi) {
  if (!(bin_width > 0.0) || !std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo) || lo < 0.0)
    throw Error(ErrorKind::InvalidArgument, "diff_histogram: need bin_width > 0 and finite 0 <= lo < hi");
  const double nb = (hi - lo) / bin_width;
  const auto bins = static_cast<std::size_t>(std::llround(nb));
  if (bins == 0 || std::abs(nb - static_cast<double>(bins)) > 1e-9 * nb)
    throw Error(ErrorKind::InvalidArgument, "diff_histogram: range must be a whole number of bins");
  Histogram h;
  h.bin_width = bin_width;
  h.origin = lo;
  h.lo = lo;
  h.hi = hi;
  h.counts.assign(bins, 0);
  const auto& g = zeros.ordinates;
  const std::size_t n = g.size();
  std::size_t start = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (start <= i) start = i + 1;
    while (start < n && g[start] - g[i] <= lo) ++start;
    for (std::size_t j = start; j < n; ++j) {
      const double d = g[j] - g[i];
      if (d > hi) break;
      auto k = static_cast<std::size_t>(std::ceil((d - lo) / bin_width));
      k = k == 0 ? 0 : k - 1;
      if (k >= bins) k = bins - 1;
      ++h.counts[k];
    }
  }
  return h;
}

}  // namespace zetapair
