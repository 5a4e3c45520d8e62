#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "zetapair/testfn.hpp"

namespace zetapair::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPrecondition = 2;
inline constexpr int kExitAccuracy = 3;
inline constexpr int kExitParse = 4;

// Runs one command line (without the program name). Data goes to `out`
// unless --out names a file; errors go to `err` as a JSON body.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "a:b:step" (inclusive) or "x,y,z".
std::vector<double> parse_grid(const std::string& spec);
// "lo:hi"
std::pair<double, double> parse_range(const std::string& spec);
// "bump:XI", "bump:XI:raw", "fejer:S", "montgomery"
TestFunction parse_test_function(const std::string& spec);

// 12 significant digits, '.' decimal point, independent of the locale.
std::string fmt(double x);

}  // namespace zetapair::cli
