#include "zetapair/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace zetapair::quad {

Rule gauss_rule(std::size_t points) {
  const int n = static_cast<int>(points);
  Rule r;
  r.nodes.resize(points);
  r.weights.resize(points);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = x;
    r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

namespace {

struct GaussRule {
  std::array<double, kGaussPoints> nodes{};
  std::array<double, kGaussPoints> weights{};

  GaussRule() {
    const auto r = gauss_rule(kGaussPoints);
    std::copy(r.nodes.begin(), r.nodes.end(), nodes.begin());
    std::copy(r.weights.begin(), r.weights.end(), weights.begin());
  }
};

const GaussRule& rule() {
  static const GaussRule r;
  return r;
}

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename R>
struct Segment {
  double a;
  double b;
  R value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <typename R, typename F>
Segment<R> kronrod(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const R fc = f(c);
  R k = fc * kWgk[7];
  R g = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const R f1 = f(c - dx);
    const R f2 = f(c + dx);
    k += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) g += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, k * h, std::abs((k - g) * h)};
}

template <typename R, typename F>
Bounded<R> adaptive_impl(const F& f, std::span<const double> pts, const AdaptiveOptions& opts) {
  std::priority_queue<Segment<R>> heap;
  R total{};
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] == pts[i]) continue;
    auto s = kronrod<R>(f, pts[i], pts[i + 1]);
    total += s.value;
    err += s.error;
    heap.push(s);
  }
  while (!heap.empty() && heap.size() < opts.max_intervals) {
    const double target = std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
    if (err <= target) break;
    auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      heap.push(worst);
      break;
    }
    auto left = kronrod<R>(f, worst.a, mid);
    auto right = kronrod<R>(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum from the partition to shed the drift of incremental updates.
  R sum{};
  double e = 0.0;
  std::vector<Segment<R>> segs;
  segs.reserve(heap.size());
  while (!heap.empty()) {
    segs.push_back(heap.top());
    heap.pop();
  }
  std::sort(segs.begin(), segs.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
  for (const auto& s : segs) {
    sum += s.value;
    e += s.error;
  }
  return {sum, e};
}

}  // namespace

const std::array<double, kGaussPoints>& gauss_nodes() { return rule().nodes; }
const std::array<double, kGaussPoints>& gauss_weights() { return rule().weights; }

Bounded<double> adaptive(const std::function<double(double)>& f, double a, double b,
                         const AdaptiveOptions& opts) {
  const std::array<double, 2> pts{a, b};
  return adaptive_impl<double>(f, pts, opts);
}

Bounded<cplx> adaptive_complex(const std::function<cplx(double)>& f, double a, double b,
                               const AdaptiveOptions& opts) {
  const std::array<double, 2> pts{a, b};
  return adaptive_impl<cplx>(f, pts, opts);
}

Bounded<double> adaptive_breakpoints(const std::function<double(double)>& f,
                                     std::span<const double> breakpoints,
                                     const AdaptiveOptions& opts) {
  return adaptive_impl<double>(f, breakpoints, opts);
}

Bounded<cplx> adaptive_complex_breakpoints(const std::function<cplx(double)>& f,
                                           std::span<const double> breakpoints, const AdaptiveOptions& opts) {
  return adaptive_impl<cplx>(f, breakpoints, opts);
}

}  // namespace zetapair::quad
