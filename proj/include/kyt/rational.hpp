#pragma once

// Exact rational arithmetic (GMP) plus the small combinatorial helpers the
// canonical index enumerations rely on.

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace kyt {

using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

// Exact binomial coefficient; returns 0 for k < 0 or k > n.
std::int64_t binomial(int n, int k);

// (n+1)! / ((p+1)! (n-p)!), the count of independent skew constants behind a
// degree-p Killing-Yano family.  Exact for the desk-scale ranges used here.
std::int64_t factorial_ratio_ky(int n, int p);

// (n+p-1)! (n+p)! / ((n-1)! n! p! (p+1)!).
std::int64_t factorial_ratio_kt(int n, int p);

}  // namespace kyt
