#include "zetapair/arithmetic.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>

#include "zetapair/error.hpp"
#include "zetapair/quadrature.hpp"

namespace zetapair {
namespace {

constexpr char kCacheMagic[8] = {'Z', 'P', 'T', 'A', 'B', 'L', 'E', 'S'};
constexpr std::uint32_t kCacheVersion = 1;
constexpr std::uint64_t kMaxRequiredLimit = 1'000'000'000'000ULL;
// theta(x) < 1.01624 x for all x > 0 (Rosser–Schoenfeld).
constexpr double kThetaUpper = 1.01624;

static_assert(std::endian::native == std::endian::little, "cache format assumes little endian");

// E1(z) for Re z > 0, |z| >= 1, by the continued fraction (modified Lentz).
cplx expint_e1(cplx z) {
  constexpr double kTiny = 1e-300;
  cplx b = z + 1.0;
  cplx c = 1.0 / kTiny;
  cplx d = 1.0 / b;
  cplx h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const cplx del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-z);
}

// int_n^inf log x / (x^{1+s} - 1)^2 dx via 1/(y - 1)^2 = sum_k k y^{-k-1}.
cplx b_tail_integral(cplx s, double n) {
  const double ln = std::log(n);
  cplx acc = 0.0;
  for (int k = 1; k <= 4; ++k) {
    const cplx c = static_cast<double>(k) + (k + 1.0) * s;
    acc += static_cast<double>(k) * std::exp(-c * ln) * (ln / c + 1.0 / (c * c));
  }
  return acc;
}

// int_n^inf (1 - x^{-s})^2 / ((x - 1)^2 log x) dx, termwise in exponential integrals.
cplx a_tail_integral(cplx s, double n) {
  const double ln = std::log(n);
  cplx acc = 0.0;
  for (int k = 1; k <= 4; ++k) {
    const double kk = k;
    acc += kk * (expint_e1(kk * ln) - 2.0 * expint_e1((kk + s) * ln) + expint_e1((kk + 2.0 * s) * ln));
  }
  return acc;
}

// Smallest doubling of `have` for which bound(n) <= tol.
std::uint64_t required_limit(std::uint64_t have, double tol, const std::function<double(double)>& bound) {
  std::uint64_t n = std::max<std::uint64_t>(have, 1024);
  while (n < kMaxRequiredLimit && !(bound(static_cast<double>(n)) <= tol)) n *= 2;
  return n;
}

void check_tail(const ArithmeticTables& t, double tol, const char* what,
                const std::function<double(double)>& bound) {
  const double b = bound(static_cast<double>(t.limit));
  if (b <= tol) return;
  const auto need = required_limit(t.limit, tol, bound);
  throw InsufficientTablesError(t.limit, need,
                                std::string(what) + ": tail bound " + std::to_string(b) +
                                    " exceeds tolerance; tables to " + std::to_string(need) +
                                    " required");
}

double theta_error(const ArithmeticTables& t) {
  return t.theta - static_cast<double>(t.limit);
}

// ---- B(s) ----

double b_tail_bound(cplx s, double n) {
  const double sigma = s.real();
  if (n >= detail::kSchoenfeldStart) {
    const double c3 = std::pow(1.0 - std::pow(n, -1.0 - sigma), -3.0);
    const double beta = 1.5 + 2.0 * sigma;
    return c3 / (8.0 * kPi) *
           (detail::log_power_tail(n, beta, 2) + 2.0 * std::abs(1.0 + s) * detail::log_power_tail(n, beta, 3));
  }
  const double c2 = std::pow(1.0 - std::pow(n, -1.0 - sigma), -2.0);
  const double beta = 1.0 + 2.0 * sigma;
  return kThetaUpper * c2 * (detail::log_power_tail(n, beta, 1) + std::log(n) * std::pow(n, -beta - 1.0));
}

// ---- log A(s) ----

double a_tail_bound(cplx s, double n) {
  const double a = std::abs(s.real());
  const double c4 = std::pow(1.0 - 1.0 / n, -4.0);
  double b = kThetaUpper * 16.0 * c4 * 1.05 * std::pow(n, 4.0 * a - 3.0) / (3.0 - 4.0 * a);
  if (n >= detail::kSchoenfeldStart) {
    b += c4 * (4.0 * std::abs(s) + 12.0) / (8.0 * kPi) * detail::log_power_tail(n, 1.5 - 2.0 * a, 1);
  } else {
    b += kThetaUpper * 4.0 * c4 * (detail::log_power_tail(n, 1.0 - 2.0 * a, 0) + std::pow(n, 2.0 * a - 2.0));
  }
  return b;
}

Bounded<cplx> log_euler_product_A(cplx s, const ArithmeticTables& t, double tail_tol) {
  if (!(std::abs(s.real()) < 0.5)) throw Error(ErrorKind::Domain, "euler_product_A: need |Re s| < 1/2");
  // A's tolerance is multiplicative, which is the absolute tolerance on log A.
  check_tail(t, tail_tol, "euler_product_A", [&](double n) { return a_tail_bound(s, n); });
  CompensatedComplexSum sum;
  for (const auto p32 : t.primes) {
    const double p = p32;
    const cplx d = -cexpm1(-s * std::log(p));
    sum += clog1p(-(d * d) / ((p - 1.0) * (p - 1.0)));
  }
  const double n = static_cast<double>(t.limit);
  auto g = [&](double x) {
    const cplx d = -cexpm1(-s * std::log(x));
    return d * d / ((x - 1.0) * (x - 1.0) * std::log(x));
  };
  if (n >= detail::kSchoenfeldStart) {
    const cplx tail = a_tail_integral(s, n) - theta_error(t) * g(n);
    sum += -tail;
  }
  return {sum.value(), a_tail_bound(s, n)};
}

}  // namespace

namespace detail {

double log_power_tail(double n, double beta, int k) {
  // n^{-beta} sum_j k!/(k-j)! log^{k-j} n / beta^{j+1}
  const double ln = std::log(n);
  double term = 1.0;
  double acc = 0.0;
  double falling = 1.0;
  for (int j = 0; j <= k; ++j) {
    term = falling * std::pow(ln, k - j) / std::pow(beta, j + 1);
    acc += term;
    falling *= (k - j);
  }
  return std::pow(n, -beta) * acc;
}

}  // namespace detail

ArithmeticTables build_tables(std::uint64_t limit) {
  if (limit < 2) throw Error(ErrorKind::InvalidArgument, "build_tables: limit must be at least 2");
  if (limit > 0xFFFFFFFFULL) throw Error(ErrorKind::InvalidArgument, "build_tables: limit too large");
  ArithmeticTables t;
  t.limit = limit;
  const std::size_t n = limit;
  t.lambda.assign(n + 1, 0.0);
  t.mobius.assign(n + 1, 0);
  t.totient.assign(n + 1, 0);
  std::vector<std::uint32_t> spf(n + 1, 0);
  t.mobius[1] = 1;
  t.totient[1] = 1;
  for (std::size_t i = 2; i <= n; ++i) {
    if (spf[i] == 0) {
      spf[i] = static_cast<std::uint32_t>(i);
      t.primes.push_back(static_cast<std::uint32_t>(i));
      t.mobius[i] = -1;
      t.totient[i] = static_cast<std::uint32_t>(i - 1);
      t.lambda[i] = std::log(static_cast<double>(i));
    }
    for (const auto p : t.primes) {
      const std::size_t m = i * p;
      if (p > spf[i] || m > n) break;
      spf[m] = p;
      if (p == spf[i]) {
        t.mobius[m] = 0;
        t.totient[m] = t.totient[i] * p;
        // i p is a prime power exactly when i is a power of p.
        if (t.lambda[i] != 0.0) t.lambda[m] = t.lambda[p];
      } else {
        t.mobius[m] = static_cast<std::int8_t>(-t.mobius[i]);
        t.totient[m] = t.totient[i] * (p - 1);
      }
    }
  }
  CompensatedSum theta;
  for (const auto p : t.primes) theta += t.lambda[p];
  t.theta = theta.value();
  return t;
}

void save_tables(const ArithmeticTables& t, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::InvalidArgument, "save_tables: cannot open " + path.string());
  out.write(kCacheMagic, sizeof kCacheMagic);
  out.write(reinterpret_cast<const char*>(&kCacheVersion), sizeof kCacheVersion);
  out.write(reinterpret_cast<const char*>(&t.limit), sizeof t.limit);
  std::vector<char> buf;
  buf.reserve(13 * 65536);
  for (std::uint64_t k = 1; k <= t.limit; ++k) {
    char rec[13];
    std::memcpy(rec, &t.lambda[k], 8);
    std::memcpy(rec + 8, &t.mobius[k], 1);
    std::memcpy(rec + 9, &t.totient[k], 4);
    buf.insert(buf.end(), rec, rec + 13);
    if (buf.size() >= 13 * 65536) {
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      buf.clear();
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(ErrorKind::InvalidArgument, "save_tables: write failed for " + path.string());
}

ArithmeticTables load_tables(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "load_tables: cannot open " + path.string());
  char magic[8];
  std::uint32_t version = 0;
  ArithmeticTables t;
  in.read(magic, 8);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&t.limit), sizeof t.limit);
  if (!in || std::memcmp(magic, kCacheMagic, 8) != 0) throw ParseError(0, "load_tables: bad magic");
  if (version != kCacheVersion) throw ParseError(0, "load_tables: unsupported version");
  if (t.limit < 2 || t.limit > 0xFFFFFFFFULL) throw ParseError(0, "load_tables: bad limit");
  const std::size_t n = t.limit;
  t.lambda.assign(n + 1, 0.0);
  t.mobius.assign(n + 1, 0);
  t.totient.assign(n + 1, 0);
  std::vector<char> buf(13 * 65536);
  std::size_t k = 1;
  while (k <= n) {
    const std::size_t batch = std::min<std::size_t>(65536, n + 1 - k);
    in.read(buf.data(), static_cast<std::streamsize>(13 * batch));
    if (!in) throw ParseError(k, "load_tables: truncated file");
    for (std::size_t j = 0; j < batch; ++j, ++k) {
      const char* rec = buf.data() + 13 * j;
      std::memcpy(&t.lambda[k], rec, 8);
      std::memcpy(&t.mobius[k], rec + 8, 1);
      std::memcpy(&t.totient[k], rec + 9, 4);
    }
  }
  CompensatedSum theta;
  for (std::size_t m = 2; m <= n; ++m) {
    if (t.mobius[m] == -1 && t.lambda[m] != 0.0) {
      t.primes.push_back(static_cast<std::uint32_t>(m));
      theta += t.lambda[m];
    }
  }
  t.theta = theta.value();
  return t;
}

ArithmeticTables cached_tables(std::uint64_t limit, std::optional<std::filesystem::path> dir) {
  if (!dir) {
    if (const char* env = std::getenv("ZETAPAIR_CACHE_DIR"); env && *env) dir = env;
  }
  if (!dir) return build_tables(limit);
  const auto file = *dir / ("tables-" + std::to_string(limit) + ".bin");
  std::error_code ec;
  if (std::filesystem::exists(file, ec)) {
    try {
      auto t = load_tables(file);
      if (t.limit == limit) return t;
    } catch (const Error&) {
      // stale or corrupt cache: rebuild below
    }
  }
  auto t = build_tables(limit);
  std::filesystem::create_directories(*dir, ec);
  try {
    save_tables(t, file);
  } catch (const Error&) {
    // read-only cache directory is not fatal
  }
  return t;
}

Bounded<cplx> prime_sum_B(cplx s, const ArithmeticTables& t, double tail_tol) {
  if (!(s.real() > -0.5)) throw Error(ErrorKind::Domain, "prime_sum_B: need Re s > -1/2");
  check_tail(t, tail_tol, "prime_sum_B", [&](double n) { return b_tail_bound(s, n); });
  CompensatedComplexSum sum;
  for (const auto p32 : t.primes) {
    const double lp = t.lambda[p32];
    const cplx d = cexpm1((1.0 + s) * lp);
    sum += lp * lp / (d * d);
  }
  const double n = static_cast<double>(t.limit);
  if (n >= detail::kSchoenfeldStart) {
    auto g = [&](double x) {
      const double lx = std::log(x);
      const cplx d = cexpm1((1.0 + s) * lx);
      return lx / (d * d);
    };
    sum += b_tail_integral(s, n) - theta_error(t) * g(n);
  }
  return {sum.value(), b_tail_bound(s, n)};
}

Bounded<cplx> euler_product_A(cplx s, const ArithmeticTables& t, double tail_tol) {
  const auto l = log_euler_product_A(s, t, tail_tol);
  const cplx a = std::exp(l.value);
  return {a, std::abs(a) * std::expm1(l.error_bound)};
}

Bounded<cplx> euler_product_A_minus_one(cplx s, const ArithmeticTables& t, double tail_tol) {
  const auto l = log_euler_product_A(s, t, tail_tol);
  return {cexpm1(l.value), std::abs(std::exp(l.value)) * std::expm1(l.error_bound)};
}

PrimeSumsGrid prime_sums_on_grid(double u0, double h, std::size_t count, const ArithmeticTables& t,
                                 double tail_tol) {
  if (!(u0 >= 0.0) || !(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "prime_sums_on_grid: need u0 >= 0, h > 0");
  PrimeSumsGrid out;
  if (count == 0) return out;
  const double umax = u0 + h * static_cast<double>(count - 1);
  const cplx smax(0.0, umax);
  check_tail(t, tail_tol, "prime_sum_B", [&](double n) { return b_tail_bound(smax, n); });
  check_tail(t, tail_tol, "euler_product_A", [&](double n) { return a_tail_bound(smax, n); });

  // Kahan sums kept as plain arrays; terms shrink along the prime loop.
  struct Acc {
    double re = 0.0, im = 0.0, cre = 0.0, cim = 0.0;
    void add(double x, double y) {
      const double yr = x - cre, tr = re + yr;
      cre = (tr - re) - yr;
      re = tr;
      const double yi = y - cim, ti = im + yi;
      cim = (ti - im) - yi;
      im = ti;
    }
  };
  std::vector<Acc> bsum(count), lsum(count);
  constexpr std::size_t kReseed = 64;
  for (const auto p32 : t.primes) {
    const double p = p32;
    const double lp = t.lambda[p32];
    const double lp2 = lp * lp;
    const double inv = 1.0 / ((p - 1.0) * (p - 1.0));
    const double sr = std::cos(h * lp), si = -std::sin(h * lp);
    double zr = 0.0, zi = 0.0;  // p^{-iu}
    for (std::size_t k = 0; k < count; ++k) {
      if (k % kReseed == 0) {
        const double ph = (u0 + h * static_cast<double>(k)) * lp;
        zr = std::cos(ph);
        zi = -std::sin(ph);
      }
      // (p^{1+iu} - 1)^{-2} = q^2, q = z / (p - z)
      const double dr = p - zr, di = -zi;
      const double den = 1.0 / (dr * dr + di * di);
      const double qr = (zr * dr + zi * di) * den, qi = (zi * dr - zr * di) * den;
      bsum[k].add(lp2 * (qr * qr - qi * qi), lp2 * 2.0 * qr * qi);
      // x = (1 - z)^2 / (p - 1)^2, log(1 - x)
      const double mr = 1.0 - zr, mi = -zi;
      const double xr = (mr * mr - mi * mi) * inv, xi = 2.0 * mr * mi * inv;
      if (xr * xr + xi * xi < 1e-8) {
        // -x (1 + x (1/2 + x (1/3 + x/4)))
        double hr = 1.0 / 3.0 + 0.25 * xr, hi = 0.25 * xi;
        double tr = 0.5 + (xr * hr - xi * hi), ti = xr * hi + xi * hr;
        hr = 1.0 + (xr * tr - xi * ti);
        hi = xr * ti + xi * tr;
        lsum[k].add(-(xr * hr - xi * hi), -(xr * hi + xi * hr));
      } else {
        const cplx l = clog1p(cplx(-xr, -xi));
        lsum[k].add(l.real(), l.imag());
      }
      const double nr = zr * sr - zi * si;
      zi = zr * si + zi * sr;
      zr = nr;
    }
  }
  out.b.resize(count);
  out.a_minus_one.resize(count);
  const double n = static_cast<double>(t.limit);
  for (std::size_t k = 0; k < count; ++k) {
    const double u = u0 + h * static_cast<double>(k);
    const cplx s(0.0, u);
    cplx b(bsum[k].re, bsum[k].im), la(lsum[k].re, lsum[k].im);
    if (n >= detail::kSchoenfeldStart) {
      auto gb = [&](double x) {
        const double lx = std::log(x);
        const cplx d = cexpm1((1.0 + s) * lx);
        return lx / (d * d);
      };
      b += b_tail_integral(s, n) - theta_error(t) * gb(n);
      auto ga = [&](double x) {
        const cplx d = -cexpm1(-s * std::log(x));
        return d * d / ((x - 1.0) * (x - 1.0) * std::log(x));
      };
      la -= a_tail_integral(s, n) - theta_error(t) * ga(n);
    }
    const double ab = a_tail_bound(s, n);
    out.b[k] = {b, b_tail_bound(s, n)};
    out.a_minus_one[k] = {cexpm1(la), std::abs(std::exp(la)) * std::expm1(ab)};
  }
  return out;
}

namespace {

void mobius_dfs(const std::vector<cplx>& factor, const std::vector<std::uint32_t>& primes,
                std::size_t start, std::uint64_t n, cplx value, std::uint64_t n_max,
                CompensatedComplexSum& sum) {
  for (std::size_t i = start; i < primes.size(); ++i) {
    const std::uint64_t m = n * primes[i];
    if (m > n_max) break;
    const cplx v = value * factor[i];
    sum += v;
    mobius_dfs(factor, primes, i + 1, m, v, n_max, sum);
  }
}

}  // namespace

cplx euler_product_A_mobius_series(cplx s, const ArithmeticTables& t, std::uint64_t n_max) {
  if (n_max > t.limit) throw Error(ErrorKind::InvalidArgument, "mobius series: n_max exceeds tables");
  std::vector<cplx> factor;
  std::vector<std::uint32_t> primes;
  for (const auto p : t.primes) {
    if (p > n_max) break;
    const cplx d = -cexpm1(-s * t.lambda[p]);
    factor.push_back(-(d * d) / ((p - 1.0) * (p - 1.0)));
    primes.push_back(p);
  }
  CompensatedComplexSum sum;
  sum += cplx(1.0, 0.0);
  mobius_dfs(factor, primes, 0, 1, cplx(1.0, 0.0), n_max, sum);
  return sum.value();
}

std::int64_t mobius_coefficient_c(std::int64_t k) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "mobius_coefficient_c: k must be >= 1");
  std::int64_t c = 1;
  for (std::int64_t p = 2; p * p <= k; ++p) {
    if (k % p != 0) continue;
    while (k % p == 0) k /= p;
    c *= 1 - p;
  }
  if (k > 1) c *= 1 - k;
  return c;
}

cplx lambda_squared_partial(cplx s, const ArithmeticTables& t, std::uint64_t n_max) {
  if (n_max > t.limit) throw Error(ErrorKind::InvalidArgument, "lambda_squared_partial: n_max exceeds tables");
  CompensatedComplexSum sum;
  for (std::uint64_t n = 2; n <= n_max; ++n) {
    const double l = t.lambda[n];
    if (l != 0.0) sum += l * l * std::exp(-s * std::log(static_cast<double>(n)));
  }
  return sum.value();
}

Bounded<cplx> lambda_squared_series(cplx s, const ArithmeticTables& t, double tail_tol) {
  const double sigma = s.real();
  if (!(sigma > 1.0)) throw Error(ErrorKind::Domain, "lambda_squared_series: need Re s > 1");
  auto bound = [&](double n) {
    double b = kThetaUpper / (1.0 - std::pow(n, -sigma)) * detail::log_power_tail(n, 2.0 * sigma - 1.0, 1);
    if (n >= detail::kSchoenfeldStart) {
      const double beta = sigma - 0.5;
      b += (detail::log_power_tail(n, beta, 2) + std::abs(s) * detail::log_power_tail(n, beta, 3)) / (8.0 * kPi);
    } else {
      b += kThetaUpper * (detail::log_power_tail(n, sigma - 1.0, 1) + std::log(n) * std::pow(n, -sigma));
    }
    return b;
  };
  check_tail(t, tail_tol, "lambda_squared_series", bound);
  const double n = static_cast<double>(t.limit);
  CompensatedComplexSum sum;
  sum += lambda_squared_partial(s, t, t.limit);
  // prime powers above the table limit whose prime is inside it: exact
  // geometric tails log^2 p p^{-j0 s} / (1 - p^{-s}).
  for (const auto p32 : t.primes) {
    const double lp = t.lambda[p32];
    int j0 = 1;
    double pj = p32;
    while (pj <= n) {
      pj *= p32;
      ++j0;
    }
    sum += lp * lp * std::exp(-s * (j0 * lp)) / (-cexpm1(-s * lp));
  }
  if (n >= detail::kSchoenfeldStart) {
    auto g = [&](double x) {
      const double lx = std::log(x);
      return lx * std::exp(-s * lx);
    };
    // int_n^inf log x x^{-s} dx
    const cplx c = s - 1.0;
    const double ln = std::log(n);
    sum += std::exp(-c * ln) * (ln / c + 1.0 / (c * c)) - theta_error(t) * g(n);
  }
  return {sum.value(), bound(n)};
}

}  // namespace zetapair
