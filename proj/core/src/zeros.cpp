#include "zetapair/zeros.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "zetapair/error.hpp"
#include "zetapair/numeric.hpp"
#include "zetapair/quadrature.hpp"
#include "zetapair/special.hpp"

namespace zetapair {
namespace {

// Riemann–Siegel correction terms C_k as Taylor series in x = p - 1/2.
constexpr double kC0[] = {
    0.3826834323650897717285, 0.0, 1.748961872310081797441,
    0.0, 2.118025207685496373185, 0.0,
    -0.8707216670511480739189, 0.0, -3.473311224346516707306,
    0.0, -1.662694730899932449643, 0.0,
    1.216731288919232134477, 0.0, 1.301430416100797577301,
    0.0, 0.03051102182736167242109, 0.0,
    -0.3755803051545095242798, 0.0, -0.1085784416564065974355,
    0.0, 0.05183290299954962337576, 0.0,
    0.0299994806199022759204, 0.0, -0.00227593967061256422602,
    0.0, -0.00438264741658033830594, 0.0,
    -0.0004064230183729846993072, 0.0, 0.0004006097785422113927891,
    0.0, 0.00008971057991388841297834, 0.0,
    -0.0000230256500272391071161, 0.0, -0.00000938000660190679248472,
    0.0, 6.32351494760910750425e-7, 0.0,
    6.551022819231501666212e-7,
};
constexpr double kC1[] = {
    0.0, -0.05365020525675069405998, 0.0,
    0.110278187410814824399, 0.0, 1.23172001543152263132,
    0.0, 1.263496486279945788418, 0.0,
    -1.695108997559503018449, 0.0, -2.999871196765010088955,
    0.0, -0.1081994495989920864269, 0.0,
    1.940766294621271268794, 0.0, 0.7838423561500686532884,
    0.0, -0.505482966790036591879, 0.0,
    -0.3845072349605797405134, 0.0, 0.03747264646531532067594,
    0.0, 0.09092026610973176317258, 0.0,
    0.0104492375500645092182, 0.0, -0.01258297965158341649748,
    0.0, -0.003399503721151274085059, 0.0,
    0.00104109505377148912683, 0.0, 0.0005010949051118486860356,
    0.0, -0.00003956359669003181559547, 0.0,
    -0.00004762459245357189638654, 0.0, -0.000001853935533808513227343,
    0.0, 0.000003193691808006897204047,
};
constexpr double kC2[] = {
    0.005188542830293168493785, 0.0, 0.001237863355225389841338,
    0.0, -0.1813750572516699741149, 0.0,
    0.1429149274853212654117, 0.0, 1.33033917666875653251,
    0.0, 0.3522472353403733677533, 0.0,
    -2.421001595891950723782, 0.0, -1.676078702253810885333,
    0.0, 1.368941672332837218423, 0.0,
    1.553901943022298322146, 0.0, -0.1722164273472998051958,
    0.0, -0.635906805504543098897, 0.0,
    -0.09911649873041208105424, 0.0, 0.1403348006738700895074,
    0.0, 0.04782352019827292236439, 0.0,
    -0.01735604064147978079796, 0.0, -0.01022501253402859184448,
    0.0, 0.0009274149159794887899427, 0.0,
    0.001357219437237338534525, 0.0, 0.00006413690120293880089962,
    0.0, -0.0001230080569819662988334, 0.0,
    -0.00001831350740478920255477, 0.0, 0.000007821628604322627308501,
};
constexpr double kC3[] = {
    0.0, -0.00267943218143891380854, 0.0,
    0.02995372109103514963731, 0.0, -0.04257017254182869798502,
    0.0, -0.2899796577980388750689, 0.0,
    0.4888831999235445972537, 0.0, 1.230855876395746081193,
    0.0, -0.829756070852740870418, 0.0,
    -2.24976353666656686652, 0.0, 0.07845139961005471379365,
    0.0, 1.746749280086889400392, 0.0,
    0.4596808097974993510924, 0.0, -0.6619353471039774946434,
    0.0, -0.3159044103617363457898, 0.0,
    0.1284479254520749598851, 0.0, 0.1007338271662615230097,
    0.0, -0.009530183848825267759505, 0.0,
    -0.0192644216875140888984, 0.0, -0.001246463715876929171248,
    0.0, 0.002424396964110308573972, 0.0,
    0.0004376476977418570182756, 0.0, -0.0002071403268700179127591,
    0.0, -0.00006274344504186515560526, 0.0,
    0.00001157534381459566934838,
};
constexpr double kC4[] = {
    0.0004648338936176338185363, 0.0, -0.004022642946136188303912,
    0.0, 0.003847177051796126883591, 0.0,
    0.06581175135809486002088, 0.0, -0.196041243436944491177,
    0.0, -0.208540536863588532444, 0.0,
    0.9507754185141750945848, 0.0, 0.5341535312914873976052,
    0.0, -1.676349441176340079591, 0.0,
    -1.076747157875128992788, 0.0, 1.235339301656596985288,
    0.0, 1.025782534005727577183, 0.0,
    -0.4012409579398854437873, 0.0, -0.5036663995108303447959,
    0.0, 0.03573487795502744985807, 0.0,
    0.1443176308678541662429, 0.0, 0.01509152741790346941713,
    0.0, -0.02609887477919436131762, 0.0,
    -0.006126628379519261749049, 0.0, 0.003077503129870841184768,
    0.0, 0.001156247893408875231612, 0.0,
    -0.0002277596675847212747281, 0.0, -0.0001418963711818144443268,
    0.0, 0.000007464860307955919453122,
};

template <std::size_t N>
double horner(const double (&c)[N], double x) {
  double acc = 0.0;
  for (std::size_t k = N; k-- > 0;) acc = acc * x + c[k];
  return acc;
}

// Trudgian: |int_{t1}^{t2} S(t) dt| <= 2.067 + 0.059 log t2 for t2 > t1 > 168 pi.
constexpr double kTuringStart = 168.0 * kPi;
double turing_constant(double t2) { return 2.067 + 0.059 * std::log(t2); }

double mean_gap(double t) { return kTwoPi / std::log(std::max(t, 20.0) / kTwoPi); }
double turing_reach(double t) { return 48.0 * mean_gap(t); }
constexpr double kWindowGaps[] = {12.0, 24.0, 48.0};

double z_value(double t, const ZeroSearchConfig& cfg) {
  return t < cfg.em_below ? hardy_z_em(t) : hardy_z(t);
}

double grid_step(double t, int points_per_gap) {
  const double density = std::max(std::log(t / kTwoPi) / kTwoPi, 0.1);
  return std::min(1.0, 1.0 / (points_per_gap * density));
}

// Illinois refinement of a sign change of Z on [a, b].
double refine(double a, double b, double fa, double fb, const ZeroSearchConfig& cfg) {
  int side = 0;
  for (int iter = 0; iter < 200 && b - a > cfg.abs_error; ++iter) {
    const double width = b - a;
    double c = (a * fb - b * fa) / (fb - fa);
    if (!(c > a && c < b)) c = 0.5 * (a + b);
    const double fc = z_value(c, cfg);
    if (fc == 0.0) return c;
    if ((fc > 0) == (fa > 0)) {
      a = c;
      fa = fc;
      if (side == -1) fb *= 0.5;
      side = -1;
    } else {
      b = c;
      fb = fc;
      if (side == 1) fa *= 0.5;
      side = 1;
    }
    if (b - a > 0.5 * width) {
      // slow progress: force a bisection step
      const double m = 0.5 * (a + b);
      const double fm = z_value(m, cfg);
      if (fm == 0.0) return m;
      if ((fm > 0) == (fa > 0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
        fb = fm;
      }
      side = 0;
    }
  }
  return 0.5 * (a + b);
}

bool positive(double z) { return z >= 0.0; }

// Zeros of Z in (a, b] located from a density grid with dip subdivision.
std::vector<double> scan_chunk(double a, double b, int ppg, const ZeroSearchConfig& cfg) {
  std::vector<double> ts{a};
  while (ts.back() < b) ts.push_back(std::min(b, ts.back() + grid_step(ts.back(), ppg)));
  std::vector<double> zs(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) zs[k] = z_value(ts[k], cfg);

  std::vector<char> suspect(ts.size(), 0);
  for (std::size_t k = 1; k + 1 < ts.size(); ++k) {
    const bool same = positive(zs[k - 1]) == positive(zs[k]) && positive(zs[k]) == positive(zs[k + 1]);
    if (same && std::abs(zs[k]) < std::abs(zs[k - 1]) && std::abs(zs[k]) < std::abs(zs[k + 1])) {
      suspect[k - 1] = 1;
      suspect[k] = 1;
    }
  }
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    if (positive(zs[k]) != positive(zs[k + 1])) {
      out.push_back(refine(ts[k], ts[k + 1], zs[k], zs[k + 1], cfg));
    } else if (suspect[k]) {
      constexpr int kSub = 16;
      double ta = ts[k];
      double za = zs[k];
      for (int j = 1; j <= kSub; ++j) {
        const double tb = j == kSub ? ts[k + 1] : ts[k] + (ts[k + 1] - ts[k]) * j / kSub;
        const double zb = j == kSub ? zs[k + 1] : z_value(tb, cfg);
        if (positive(za) != positive(zb)) out.push_back(refine(ta, tb, za, zb, cfg));
        ta = tb;
        za = zb;
      }
    }
  }
  return out;
}

// Chunk boundaries are multiples of cfg.chunk_width, so overlapping scans
// share their grids.
std::vector<double> scan(double a, double b, int ppg, const ZeroSearchConfig& cfg) {
  std::vector<double> edges{a};
  for (double e = (std::floor(a / cfg.chunk_width) + 1.0) * cfg.chunk_width; e < b; e += cfg.chunk_width)
    edges.push_back(e);
  edges.push_back(b);
  const std::size_t chunks = edges.size() - 1;
  std::vector<std::vector<double>> parts(chunks);
  parallel_chunks(chunks, cfg.threads, [&](std::size_t i) { parts[i] = scan_chunk(edges[i], edges[i + 1], ppg, cfg); });
  std::vector<double> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

double integral_smooth(double a, double b) {
  const auto panels = static_cast<std::size_t>(std::ceil((b - a) / 2.0)) + 1;
  return quad::gauss_composite([](double t) { return smooth_count(t); }, a, b, panels);
}

// int_a^b #{g in zs : lo < g <= t} dt
double integral_count_from(const std::vector<double>& zs, double lo, double a, double b) {
  double acc = 0.0;
  for (const double g : zs) {
    if (g <= lo || g > b) continue;
    acc += b - std::max(g, a);
  }
  return acc;
}

// int_a^b #{g in zs : t < g <= hi} dt
double integral_count_to(const std::vector<double>& zs, double hi, double a, double b) {
  double acc = 0.0;
  for (const double g : zs) {
    if (g <= a || g > hi) continue;
    acc += std::min(g, b) - a;
  }
  return acc;
}

// Turing upper bound for N(T) from the zeros found in (T, T' + h].
double upper_bound(double T, double h, const std::vector<double>& zs) {
  const double tp = std::max(T, kTuringStart);
  const double above = static_cast<double>(std::count_if(zs.begin(), zs.end(), [&](double g) { return g > T && g <= tp; }));
  const double smooth = integral_smooth(tp, tp + h);
  const double found = integral_count_from(zs, tp, tp, tp + h);
  return (turing_constant(tp + h) + smooth - found) / h - above;
}

// Turing lower bound for N(T) from zeros found in [T - h, T]; needs T - h > 168 pi.
double lower_bound(double T, double h, const std::vector<double>& zs) {
  const double smooth = integral_smooth(T - h, T);
  const double found = integral_count_to(zs, T, T - h, T);
  return (smooth + found - turing_constant(T)) / h;
}

constexpr double kBoundSlack = 1e-6;

std::size_t count_in(const std::vector<double>& zs, double lo, double hi) {
  return static_cast<std::size_t>(std::count_if(zs.begin(), zs.end(), [&](double g) { return g > lo && g <= hi; }));
}

// Smallest window for which floor(upper bound on N(T)) equals `count`.
bool certify_upper(double T, std::size_t count, const std::vector<double>& zs, TuringReport* rep) {
  const double tp = std::max(T, kTuringStart);
  for (const double gaps : kWindowGaps) {
    const double h = gaps * mean_gap(tp);
    const double u = upper_bound(T, h, zs);
    if (rep) *rep = {count, u, tp, h};
    if (std::floor(u + kBoundSlack) == static_cast<double>(count)) return true;
  }
  return false;
}

// Exact N(T) for T past the Turing start from zeros near T, or -1.
long exact_count(double T, const std::vector<double>& zs) {
  for (const double gaps : kWindowGaps) {
    const double h = gaps * mean_gap(T);
    if (T - h <= kTuringStart) break;
    const double lo = std::ceil(lower_bound(T, h, zs) - kBoundSlack);
    const double hi = std::floor(upper_bound(T, h, zs) + kBoundSlack);
    if (lo == hi) return static_cast<long>(lo);
  }
  return -1;
}

int decimals_of(std::string_view s) {
  const auto dot = s.find('.');
  if (dot == std::string_view::npos) return 0;
  std::size_t end = s.find_first_of("eE", dot);
  if (end == std::string_view::npos) end = s.size();
  return static_cast<int>(end - dot - 1);
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(std::string_view s, double& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::string format12(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

// shortest text that reads back to the same double
std::string format_exact(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace

std::size_t ZeroList::count_below(double t) const {
  return static_cast<std::size_t>(std::upper_bound(ordinates.begin(), ordinates.end(), t) - ordinates.begin());
}

double hardy_z(double t) {
  if (!(t >= 2.0)) throw Error(ErrorKind::Domain, "hardy_z: need t >= 2");
  const double a = std::sqrt(t / kTwoPi);
  const auto n = static_cast<long>(std::floor(a));
  const double x = a - static_cast<double>(n) - 0.5;
  const double th = rs_theta(t);
  CompensatedSum main;
  for (long k = 1; k <= n; ++k) {
    const double lk = std::log(static_cast<double>(k));
    main += std::cos(th - t * lk) / std::sqrt(static_cast<double>(k));
  }
  const double ia = 1.0 / a;
  const double r = horner(kC0, x) +
                   ia * (horner(kC1, x) + ia * (horner(kC2, x) + ia * (horner(kC3, x) + ia * horner(kC4, x))));
  const double sign = (n % 2 == 1) ? 1.0 : -1.0;  // (-1)^{n-1}
  return 2.0 * main.value() + sign * r / std::sqrt(a);
}

double hardy_z_em(double t, double* imag_part) {
  const cplx z = std::exp(cplx(0.0, rs_theta(t))) * zeta_derivatives(cplx(0.5, t), 0);
  if (imag_part) *imag_part = z.imag();
  return z.real();
}

ZeroList find_zeros(double t_lo, double t_hi, const ZeroSearchConfig& cfg) {
  if (!std::isfinite(t_lo) || !std::isfinite(t_hi) || !(t_lo < t_hi))
    throw Error(ErrorKind::InvalidArgument, "find_zeros: need t_lo < t_hi");
  if (!(cfg.abs_error > 0.0) || cfg.points_per_gap < 1 || !(cfg.chunk_width > 0.0))
    throw Error(ErrorKind::Config, "find_zeros: invalid search configuration");
  t_lo = std::max(t_lo, 2.0);
  if (!(t_lo < t_hi)) throw Error(ErrorKind::InvalidArgument, "find_zeros: interval lies below t = 2");

  const bool from_origin = t_lo <= kTuringStart + turing_reach(kTuringStart);
  const double t_top = std::max(t_hi, kTuringStart);
  const double scan_hi = t_top + turing_reach(t_top);
  const double scan_lo = from_origin ? 2.0 : t_lo - turing_reach(t_lo);

  double bad_lo = t_lo, bad_hi = t_hi;
  for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
    const int ppg = cfg.points_per_gap << attempt;
    const auto zs = scan(scan_lo, scan_hi, ppg, cfg);
    std::size_t below = 0;
    bool ok = false;
    if (from_origin) {
      below = count_in(zs, 0.0, t_lo);
      ok = certify_upper(t_hi, count_in(zs, 0.0, t_hi), zs, nullptr);
      bad_lo = std::max(t_hi, kTuringStart);
    } else {
      const long k1 = exact_count(t_lo, zs);
      const long k2 = exact_count(t_hi, zs);
      ok = k1 >= 0 && k2 >= 0 && static_cast<std::size_t>(k2 - k1) == count_in(zs, t_lo, t_hi);
      below = k1 >= 0 ? static_cast<std::size_t>(k1) : 0;
      bad_lo = k1 < 0 ? t_lo - turing_reach(t_lo) : t_lo;
    }
    bad_hi = std::min(scan_hi, std::max(t_hi, kTuringStart) + turing_reach(t_top));
    if (!ok) continue;
    ZeroList out;
    for (const double g : zs)
      if (g > t_lo && g <= t_hi) out.ordinates.push_back(g);
    out.height_start = from_origin ? 0.0 : t_lo;
    out.index_offset = from_origin ? 0 : below;
    if (from_origin) {
      // ordinates in (2, t_lo] are not part of the requested range
      out.height_start = t_lo <= 2.0 ? 0.0 : t_lo;
      out.index_offset = t_lo <= 2.0 ? 0 : below;
    }
    out.height_covered = t_hi;
    out.abs_error = cfg.abs_error;
    out.provenance = Provenance::Computed;
    out.source = "computed";
    out.turing_verified = true;
    return out;
  }
  throw IncompleteListError(bad_lo, bad_hi, "find_zeros: Turing check failed; zeros may be missing");
}

TuringReport turing_count_check(ZeroList& zeros, double T, const ZeroSearchConfig& cfg) {
  if (zeros.height_start != 0.0)
    throw Error(ErrorKind::Precondition, "turing_count_check: list must start at the origin");
  if (!(T > 0.0) || T > zeros.height_covered)
    throw Error(ErrorKind::Precondition, "turing_count_check: list does not cover T");
  for (std::size_t k = 1; k < zeros.ordinates.size(); ++k)
    if (!(zeros.ordinates[k] > zeros.ordinates[k - 1]))
      throw Error(ErrorKind::Precondition, "turing_count_check: ordinates not strictly ascending");
  // every stored ordinate must sit on a sign change of Z
  const double e = 1.5 * std::max(zeros.abs_error, cfg.abs_error);
  for (const double g : zeros.ordinates) {
    if (g - e < 2.0) throw IncompleteListError(g - e, g + e, "turing_count_check: ordinate below t = 2");
    if (positive(z_value(g - e, cfg)) == positive(z_value(g + e, cfg)))
      throw IncompleteListError(g - e, g + e, "turing_count_check: ordinate does not bracket a sign change");
  }
  const double tp = std::max(T, kTuringStart);
  const double reach = tp + turing_reach(tp);
  std::vector<double> zs = zeros.ordinates;
  if (reach > zeros.height_covered) {
    const auto extra = scan(zeros.height_covered, reach, cfg.points_per_gap, cfg);
    zs.insert(zs.end(), extra.begin(), extra.end());
  }
  const std::size_t count = zeros.count_below(T);
  TuringReport rep;
  if (!certify_upper(T, count, zs, &rep))
    throw IncompleteListError(rep.window_start, rep.window_start + rep.window,
                              "turing_count_check: zero count exceeds the list below T");
  zeros.turing_verified = true;
  zeros.height_covered = T;
  return rep;
}

ZeroList load_zeros(std::istream& in, const std::string& source_id) {
  ZeroList out;
  out.provenance = Provenance::Loaded;
  out.source = source_id;
  std::string line;
  std::size_t lineno = 0;
  double header_height = -1.0;
  double header_error = 0.0;
  double digits_error = 0.0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto s = trim(line);
    if (s.empty()) continue;
    if (s.front() == '#') {
      auto body = trim(s.substr(1));
      auto read_key = [&](std::string_view key, double& dst) {
        if (body.substr(0, key.size()) == key) {
          auto v = trim(body.substr(key.size()));
          if (!v.empty() && (v.front() == ':' || v.front() == '=')) v = trim(v.substr(1));
          double x;
          if (parse_double(v, x)) dst = x;
        }
      };
      read_key("height_covered", header_height);
      read_key("abs_error", header_error);
      continue;
    }
    double x;
    if (!parse_double(s, x) || !std::isfinite(x) || !(x > 0.0))
      throw ParseError(lineno, "load_zeros: unparsable ordinate at line " + std::to_string(lineno));
    if (!out.ordinates.empty() && !(x > out.ordinates.back()))
      throw ParseError(lineno, "load_zeros: ordinates not strictly ascending at line " + std::to_string(lineno));
    digits_error = std::max(digits_error, 0.5 * std::pow(10.0, -decimals_of(s)));
    out.ordinates.push_back(x);
  }
  out.abs_error = std::max(header_error, digits_error);
  const double last = out.ordinates.empty() ? 0.0 : out.ordinates.back();
  out.height_covered = header_height >= last ? header_height : last;
  out.turing_verified = false;
  return out;
}

void save_zeros(const ZeroList& zeros, std::ostream& out) {
  out << "# zetapair zeros\n";
  out << "# height_covered: " << format12(zeros.height_covered) << "\n";
  out << "# abs_error: " << format12(zeros.abs_error) << "\n";
  out << "# turing_verified: " << (zeros.turing_verified ? 1 : 0) << "\n";
  for (const double g : zeros.ordinates) out << format_exact(g) << "\n";
}

double s_of_t(double T, const ZeroList& zeros) {
  if (!zeros.turing_verified) throw Error(ErrorKind::Precondition, "s_of_t: zero list is not verified");
  if (T > zeros.height_covered || T < zeros.height_start)
    throw Error(ErrorKind::Precondition, "s_of_t: T outside the verified range");
  return static_cast<double>(zeros.index_offset + zeros.count_below(T)) - smooth_count(T);
}

double zero_count_bound(double a, double b) {
  const auto s_bound = [](double t) {
    t = std::max(t, 3.0);
    return 0.137 * std::log(t) + 0.443 * std::log(std::log(t)) + 4.35;
  };
  const double smooth = [&] {
    if (b <= 14.0) return 0.0;
    const double lo = std::max(a, 14.0);
    // theta/pi grows at rate log(t/2pi)/2pi
    return (b - lo) * std::max(0.0, std::log(b / kTwoPi)) / kTwoPi;
  }();
  return smooth + s_bound(b) + s_bound(std::max(a, 3.0)) + 1.0;
}

}  // namespace zetapair
