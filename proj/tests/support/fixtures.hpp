#pragma once

#include <map>
#include <memory>
#include <mutex>

#include "zetapair/arithmetic.hpp"
#include "zetapair/predictions.hpp"
#include "zetapair/zeros.hpp"

namespace fixture {

// Shared, lazily built inputs; tests only read them.
inline const std::shared_ptr<const zetapair::ArithmeticTables>& tables(std::uint64_t limit) {
  static std::mutex m;
  static std::map<std::uint64_t, std::shared_ptr<const zetapair::ArithmeticTables>> cache;
  std::lock_guard lock(m);
  auto& slot = cache[limit];
  if (!slot) slot = std::make_shared<const zetapair::ArithmeticTables>(zetapair::build_tables(limit));
  return slot;
}

inline zetapair::KernelContext context(std::uint64_t limit = 1000000) {
  zetapair::KernelContext ctx;
  ctx.tables = tables(limit);
  return ctx;
}

inline const zetapair::ZeroList& zeros_to(double T) {
  static std::mutex m;
  static std::map<double, zetapair::ZeroList> cache;
  std::lock_guard lock(m);
  auto it = cache.find(T);
  if (it == cache.end()) it = cache.emplace(T, zetapair::find_zeros(0.0, T)).first;
  return it->second;
}

}  // namespace fixture
