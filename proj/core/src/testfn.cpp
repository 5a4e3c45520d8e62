#include "zetapair/testfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "zetapair/error.hpp"
#include "zetapair/quadrature.hpp"

namespace zetapair {
namespace detail {

enum class Family { Fejer, Bump, Montgomery };

constexpr int kChebDegree = 24;
constexpr int kBumpNodes = 2048;
constexpr double kTruncationLevel = 1e-8;

struct ChebPanel {
  double a;
  double b;
  std::vector<double> c;
};

struct TestFunctionImpl {
  Family family;
  double xi = 0.0;  // band limit or scale
  bool normalized = true;
  double hat0 = 1.0;

  // bump time side
  std::vector<ChebPanel> panels;
  double table_end = 0.0;
  double panel_width = 1.0;
  std::vector<double> sample_u;
  std::vector<double> suffix_sup;  // sup |f| over samples at or beyond sample_u[k]
  double interp_error = 0.0;
  double radius = 0.0;
  // int |hat''|, giving |f(u)| <= d2_l1 / (2 pi u)^2
  double d2_l1 = 0.0;

  double hat(double x) const {
    switch (family) {
      case Family::Fejer: {
        const double a = std::abs(x) / xi;
        return a < 1.0 ? (1.0 - a) / xi : 0.0;
      }
      case Family::Bump: {
        const double r = x / xi;
        const double q = 1.0 - r * r;
        if (!(q > 0.0)) return 0.0;
        return std::exp((normalized ? 1.0 : 0.0) - 1.0 / q);
      }
      case Family::Montgomery:
        return kTwoPi * std::exp(-4.0 * kPi * std::abs(x));
    }
    return 0.0;
  }

  double hat_d2(double x) const {
    if (family != Family::Bump)
      throw Error(ErrorKind::InvalidArgument, "eval_hat_d2: transform is not smooth for this family");
    const double r = x / xi;
    const double q = 1.0 - r * r;
    if (!(q > 0.0)) return 0.0;
    const double h = hat(x);
    const double q2 = q * q;
    return h * (4.0 * r * r / (q2 * q2) - 2.0 / q2 - 8.0 * r * r / (q2 * q)) / (xi * xi);
  }

  // 2 int_0^Xi hat(xi) cos(2 pi u xi) d xi. The bump is flat to all orders at
  // the band edges, so the trapezoid rule in r = xi/Xi converges spectrally.
  std::vector<double> bump_samples;  // exp(1 - 1/(1 - r^2)) at r = k/kBumpNodes
  double bump_direct(double u) const {
    const double d = 1.0 / kBumpNodes;
    const double w = kTwoPi * u * xi * d;
    const cplx rot = std::polar(1.0, w);
    cplx z = 1.0;
    double s = 0.5 * bump_samples[0];
    for (int k = 1; k < kBumpNodes; ++k) {
      if (k % 64 == 0) {
        z = std::polar(1.0, w * k);
      } else {
        z *= rot;
      }
      s += bump_samples[k] * z.real();
    }
    return 2.0 * s * d * hat0 * xi;
  }

  double time(double u) const {
    switch (family) {
      case Family::Fejer: {
        const double s = sinc_pi(xi * u);
        return s * s;
      }
      case Family::Montgomery:
        return 4.0 / (4.0 + u * u);
      case Family::Bump: {
        const double a = std::abs(u);
        // past the table |f| sits below tail(), which callers already charge
        if (a >= table_end) return 0.0;
        const auto k = std::min(panels.size() - 1, static_cast<std::size_t>(a / panel_width));
        const auto& p = panels[k];
        const double x = (2.0 * a - p.a - p.b) / (p.b - p.a);
        // Clenshaw
        double b1 = 0.0, b2 = 0.0;
        for (int j = kChebDegree - 1; j >= 1; --j) {
          const double t = 2.0 * x * b1 - b2 + p.c[j];
          b2 = b1;
          b1 = t;
        }
        return x * b1 - b2 + 0.5 * p.c[0];
      }
    }
    return 0.0;
  }

  double tail(double U) const {
    U = std::abs(U);
    switch (family) {
      case Family::Fejer: {
        const double d = kPi * xi * U;
        return d <= 1.0 ? 1.0 : 1.0 / (d * d);
      }
      case Family::Montgomery:
        return 4.0 / (4.0 + U * U);
      case Family::Bump: {
        if (U >= table_end) {
          const double w = kTwoPi * U;
          return std::min(1e-15 * hat0 * xi + interp_error, d2_l1 / (w * w));
        }
        const auto it = std::lower_bound(sample_u.begin(), sample_u.end(), U);
        // include the sample just before U so the envelope between samples is covered
        auto k = static_cast<std::size_t>(it - sample_u.begin());
        if (k > 0) --k;
        return suffix_sup[k] * 1.05 + interp_error;
      }
    }
    return 0.0;
  }

  void build_bump_table() {
    bump_samples.resize(kBumpNodes);
    for (int k = 0; k < kBumpNodes; ++k) {
      const double r = static_cast<double>(k) / kBumpNodes;
      bump_samples[k] = std::exp(1.0 - 1.0 / (1.0 - r * r));
    }
    // extent: envelope of |f| below 1e-15 relative to f(0)
    const double f0 = bump_direct(0.0);
    const double step = 1.0 / (4.0 * xi);
    double u = 0.0;
    double recent = f0;
    int quiet = 0;
    while (quiet < 8 && u < 1e4) {
      u += step;
      recent = std::abs(bump_direct(u));
      quiet = recent < 1e-15 * f0 ? quiet + 1 : 0;
    }
    panel_width = 1.0 / (2.0 * xi);
    const auto count = static_cast<std::size_t>(std::ceil(u / panel_width)) + 1;
    table_end = count * panel_width;
    panels.resize(count);
    std::vector<double> fx(kChebDegree);
    for (std::size_t k = 0; k < count; ++k) {
      auto& p = panels[k];
      p.a = k * panel_width;
      p.b = (k + 1) * panel_width;
      p.c.assign(kChebDegree, 0.0);
      for (int j = 0; j < kChebDegree; ++j) {
        const double x = std::cos(kPi * (j + 0.5) / kChebDegree);
        fx[j] = bump_direct(0.5 * (p.a + p.b) + 0.5 * (p.b - p.a) * x);
      }
      for (int m = 0; m < kChebDegree; ++m) {
        double acc = 0.0;
        for (int j = 0; j < kChebDegree; ++j) acc += fx[j] * std::cos(kPi * m * (j + 0.5) / kChebDegree);
        p.c[m] = 2.0 * acc / kChebDegree;
      }
    }
    // certify against direct quadrature at off-node points, and record the envelope
    const double fine = panel_width / 8.0;
    double err = 0.0;
    for (double v = 0.0; v < table_end; v += fine) {
      const double probe = v + 0.37 * fine;
      const double direct = bump_direct(probe);
      err = std::max(err, std::abs(time(probe) - direct));
      sample_u.push_back(v);
      suffix_sup.push_back(std::max(std::abs(time(v)), std::abs(direct)));
    }
    for (std::size_t k = suffix_sup.size() - 1; k-- > 0;) suffix_sup[k] = std::max(suffix_sup[k], suffix_sup[k + 1]);
    interp_error = 2.0 * err + 1e-15 * f0;
    d2_l1 = 2.0 * quad::gauss_composite([&](double x) { return std::abs(hat_d2(x)); }, 0.0, xi, 256);
  }

  void compute_radius() {
    switch (family) {
      case Family::Fejer:
        radius = 1.0 / (kPi * xi * std::sqrt(kTruncationLevel));
        return;
      case Family::Montgomery:
        radius = std::sqrt(4.0 / kTruncationLevel - 4.0);
        return;
      case Family::Bump: {
        radius = 0.0;
        for (std::size_t k = 0; k < sample_u.size(); ++k) {
          if (suffix_sup[k] * 1.05 + interp_error > kTruncationLevel) radius = sample_u[k] + panel_width / 8.0;
        }
        return;
      }
    }
  }
};

}  // namespace detail

using detail::Family;

cplx TestFunction::eval(double u) const {
  const double base = impl_->time(u);
  if (shift_ == 0.0) return factor_ * base;
  return factor_ * base * std::polar(1.0, kTwoPi * shift_ * u);
}

cplx TestFunction::eval_hat(double xi) const { return factor_ * impl_->hat(xi - shift_); }

cplx TestFunction::eval_hat_d2(double xi) const { return factor_ * impl_->hat_d2(xi - shift_); }

double TestFunction::band_limit() const {
  if (impl_->family == Family::Montgomery) return std::numeric_limits<double>::infinity();
  return impl_->xi + std::abs(shift_);
}

bool TestFunction::band_limited() const { return impl_->family != Family::Montgomery; }

double TestFunction::require_band_limit() const {
  if (!band_limited()) throw Error(ErrorKind::BandLimit, "test function is not band-limited: " + describe());
  return band_limit();
}

Parity TestFunction::parity() const { return shift_ == 0.0 ? Parity::Even : Parity::None; }

bool TestFunction::is_real() const { return shift_ == 0.0 && factor_.imag() == 0.0; }

bool TestFunction::smooth() const { return impl_->family == Family::Bump; }

cplx TestFunction::mass() const { return eval_hat(0.0); }

double TestFunction::truncation_radius() const {
  const double c = std::abs(factor_);
  if (c == 0.0) return 0.0;
  if (c == 1.0) return impl_->radius;
  // rescale the level: find U with |c| tail(U) <= 1e-8
  double lo = 0.0, hi = std::max(1.0, impl_->radius);
  while (c * impl_->tail(hi) > detail::kTruncationLevel && hi < 1e9) hi *= 2.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (c * impl_->tail(mid) > detail::kTruncationLevel ? lo : hi) = mid;
  }
  return hi;
}

double TestFunction::tail_sup(double U) const { return std::abs(factor_) * impl_->tail(U); }

double TestFunction::interpolation_error() const { return std::abs(factor_) * impl_->interp_error; }

double TestFunction::normalization() const {
  switch (impl_->family) {
    case Family::Fejer:
      return 1.0 / impl_->xi;
    case Family::Bump:
      return impl_->normalized ? 1.0 : std::exp(-1.0);
    case Family::Montgomery:
      return 1.0;
  }
  return 1.0;
}

TestFunction TestFunction::scaled(cplx c) const {
  TestFunction f = *this;
  f.factor_ *= c;
  return f;
}

TestFunction TestFunction::modulated(double xi0) const {
  TestFunction f = *this;
  f.shift_ += xi0;
  return f;
}

std::string TestFunction::family() const {
  switch (impl_->family) {
    case Family::Fejer:
      return "fejer";
    case Family::Bump:
      return "bump";
    case Family::Montgomery:
      return "montgomery-w";
  }
  return "unknown";
}

std::string TestFunction::describe() const {
  std::ostringstream os;
  os.precision(12);
  os << family();
  if (impl_->family == Family::Fejer) os << "(scale=" << impl_->xi << ")";
  if (impl_->family == Family::Bump)
    os << "(band_limit=" << impl_->xi << ",normalized=" << (impl_->normalized ? "true" : "false") << ")";
  if (factor_ != cplx(1.0, 0.0)) os << "*(" << factor_.real() << (factor_.imag() < 0 ? "" : "+") << factor_.imag() << "i)";
  if (shift_ != 0.0) os << "@shift=" << shift_;
  return os.str();
}

TestFunction make_fejer(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw Error(ErrorKind::InvalidArgument, "make_fejer: scale must be positive");
  auto impl = std::make_shared<detail::TestFunctionImpl>();
  impl->family = Family::Fejer;
  impl->xi = scale;
  impl->hat0 = 1.0 / scale;
  impl->compute_radius();
  TestFunction f;
  f.impl_ = impl;
  return f;
}

TestFunction make_smooth_bump(double band_limit, bool normalize_mass) {
  if (!(band_limit > 0.0) || !std::isfinite(band_limit))
    throw Error(ErrorKind::InvalidArgument, "make_smooth_bump: band_limit must be positive");
  auto impl = std::make_shared<detail::TestFunctionImpl>();
  impl->family = Family::Bump;
  impl->xi = band_limit;
  impl->normalized = normalize_mass;
  impl->hat0 = impl->hat(0.0);
  impl->build_bump_table();
  impl->compute_radius();
  TestFunction f;
  f.impl_ = impl;
  return f;
}

TestFunction montgomery_weight() {
  auto impl = std::make_shared<detail::TestFunctionImpl>();
  impl->family = Family::Montgomery;
  impl->hat0 = kTwoPi;
  impl->compute_radius();
  TestFunction f;
  f.impl_ = impl;
  return f;
}

}  // namespace zetapair
