#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace zetapair {

enum class Provenance { Computed, Loaded };

struct ZeroList {
  std::vector<double> ordinates;  // strictly ascending
  double height_start = 0.0;      // list holds every ordinate in (height_start, height_covered]
  double height_covered = 0.0;
  double abs_error = 0.0;
  Provenance provenance = Provenance::Computed;
  std::string source;
  bool turing_verified = false;
  // Number of ordinates at or below height_start (0 for lists from the origin).
  std::size_t index_offset = 0;

  std::size_t count_below(double t) const;
};

// Hardy Z by Riemann–Siegel with corrections C0..C4. Throws Domain for t < 2.
double hardy_z(double t);

// Z(t) = Re(e^{i theta(t)} zeta(1/2 + it)) by Euler–Maclaurin; `imag_part`
// receives the imaginary part (zero up to evaluation error).
double hardy_z_em(double t, double* imag_part = nullptr);

struct ZeroSearchConfig {
  double abs_error = 1e-9;
  int points_per_gap = 4;
  int max_retries = 3;
  unsigned threads = 0;
  // Below this height sign changes are located with hardy_z_em.
  double em_below = 1000.0;
  double chunk_width = 64.0;
};

// All zeros of Z in [t_lo, t_hi], Turing-verified. t_lo below 2 is raised to 2.
// Throws IncompleteListError when the count cannot be certified.
ZeroList find_zeros(double t_lo, double t_hi, const ZeroSearchConfig& cfg = {});

struct TuringReport {
  std::size_t count = 0;       // verified N(T)
  double upper_bound = 0.0;    // Turing upper bound for N(T) before flooring
  double window_start = 0.0;   // [window_start, window_start + window] used for the integral of S
  double window = 0.0;
};

// Certifies that the list holds every zero up to T and returns N(T).
// Requires a list from the origin (height_start == 0) covering T.
// Sets turing_verified and height_covered = T on success.
TuringReport turing_count_check(ZeroList& zeros, double T, const ZeroSearchConfig& cfg = {});

// Text format: '#' comment lines, one ordinate per line, ascending.
ZeroList load_zeros(std::istream& in, const std::string& source_id = "stream");
void save_zeros(const ZeroList& zeros, std::ostream& out);

// Upper bound on the number of zero ordinates in [a, b], 0 <= a <= b, from
// N(t) = theta(t)/pi + 1 + S(t) and |S(t)| <= 0.137 log t + 0.443 log log t + 4.35.
double zero_count_bound(double a, double b);

// S(T) = N(T) - smooth_count(T). Requires a verified list covering T.
double s_of_t(double T, const ZeroList& zeros);

}  // namespace zetapair
