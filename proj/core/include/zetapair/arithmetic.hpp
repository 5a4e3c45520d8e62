#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "zetapair/numeric.hpp"

namespace zetapair {

// Sieved tables for 1 <= n <= limit. Index 0 of the per-n vectors is unused.
struct ArithmeticTables {
  std::uint64_t limit = 0;
  std::vector<double> lambda;
  std::vector<std::int8_t> mobius;
  std::vector<std::uint32_t> totient;
  std::vector<std::uint32_t> primes;
  // theta(limit) = sum of log p over p <= limit, compensated.
  double theta = 0.0;

  double von_mangoldt(std::uint64_t n) const { return lambda[n]; }
};

// Linear sieve. Throws InvalidArgument for limit < 2.
ArithmeticTables build_tables(std::uint64_t limit);

// Binary cache. Format: 8-byte magic, u32 version, u64 limit, then one
// 13-byte record per n (f64 lambda, i8 mobius, u32 totient), little endian.
void save_tables(const ArithmeticTables& tables, const std::filesystem::path& path);
ArithmeticTables load_tables(const std::filesystem::path& path);

// Loads from $ZETAPAIR_CACHE_DIR (or `dir` if given) when a cache for
// `limit` exists, otherwise sieves and writes the cache.
ArithmeticTables cached_tables(std::uint64_t limit,
                               std::optional<std::filesystem::path> dir = std::nullopt);

// B(s) = sum_p log^2 p / (p^{1+s} - 1)^2 for Re s > -1/2.
Bounded<cplx> prime_sum_B(cplx s, const ArithmeticTables& tables, double tail_tol);

// A(s) = prod_p (1 - (1 - p^{-s})^2 / (p - 1)^2) for |Re s| < 1/2.
Bounded<cplx> euler_product_A(cplx s, const ArithmeticTables& tables, double tail_tol);
// A(s) - 1, accurate for small |s|.
Bounded<cplx> euler_product_A_minus_one(cplx s, const ArithmeticTables& tables, double tail_tol);

// B(iu) and A(iu) - 1 on the grid u_k = u0 + k h, 0 <= k < count, u_k >= 0.
struct PrimeSumsGrid {
  std::vector<Bounded<cplx>> b;
  std::vector<Bounded<cplx>> a_minus_one;
};
PrimeSumsGrid prime_sums_on_grid(double u0, double h, std::size_t count, const ArithmeticTables& tables,
                                 double tail_tol);

// Partial sum over squarefree n <= n_max of mu(n)/phi(n)^2 prod_{p|n}(1 - p^{-s})^2.
cplx euler_product_A_mobius_series(cplx s, const ArithmeticTables& tables, std::uint64_t n_max);

// c_k = sum_{d|k} mu(d) d.
std::int64_t mobius_coefficient_c(std::int64_t k);

// sum_n Lambda(n)^2 n^{-s} for Re s > 1.
Bounded<cplx> lambda_squared_series(cplx s, const ArithmeticTables& tables, double tail_tol);

// Direct truncated sum over n <= n_max (n_max <= tables.limit), no tail.
cplx lambda_squared_partial(cplx s, const ArithmeticTables& tables, std::uint64_t n_max);

namespace detail {
// Integral of x^{-beta-1} log^k x over [n, inf), beta > 0.
double log_power_tail(double n, double beta, int k);
// |theta(x) - x| <= sqrt(x) log^2 x / (8 pi) for x >= 599 (conditional on RH).
inline constexpr double kSchoenfeldStart = 599.0;
}  // namespace detail

}  // namespace zetapair
