#pragma once

// Shared generators for the test suites: seeded random rationals, random
// polynomial gauge scalars, explicit projective-chart metrics.

#include <random>
#include <vector>

#include "kyt/expr.hpp"
#include "kyt/tensor.hpp"

namespace kyt_test {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

inline std::vector<double> random_point(std::mt19937_64& rng, int n, double lo, double hi) {
  std::vector<double> x(n);
  for (auto& v : x) v = uniform(rng, lo, hi);
  return x;
}

inline kyt::Rational random_rational(std::mt19937_64& rng, long num_range, long max_den) {
  long num = static_cast<long>(rng() % (2 * num_range + 1)) - num_range;
  long den = 1 + static_cast<long>(rng() % max_den);
  return kyt::rat(num, den);
}

// Random quadratic polynomial with small rational coefficients; smooth
// everywhere, so any domain box works.
inline kyt::ScalarField random_poly_gauge(std::mt19937_64& rng, int n) {
  using kyt::Rational;
  using kyt::ScalarField;
  ScalarField g = ScalarField::constant(n, kyt::rat(0));
  for (int i = 1; i <= n; ++i) {
    Rational a = random_rational(rng, 2, 4);  // |a| <= 1/2
    g = g + (a / Rational(4)) * ScalarField::coordinate(n, i);
  }
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      Rational b = random_rational(rng, 2, 4);
      g = g + (b / Rational(8)) * (ScalarField::coordinate(n, i) * ScalarField::coordinate(n, j));
    }
  return g;
}

// Projective-chart metric of constant sectional curvature:
// g_ij = ((1 + C|x|^2) d_ij - C x_i x_j) / (1 + C|x|^2)^2.
inline kyt::TensorField projective_chart_metric(int n, const kyt::Rational& curv) {
  using kyt::Rational;
  using kyt::ScalarField;
  ScalarField s = ScalarField::constant(n, kyt::rat(1));
  for (int i = 1; i <= n; ++i) {
    ScalarField xi = ScalarField::coordinate(n, i);
    s = s + curv * (xi * xi);
  }
  kyt::TensorField g(n, 2);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      ScalarField num = ScalarField::constant(n, kyt::rat(0));
      if (i == j) num = s;
      num = num - curv * (ScalarField::coordinate(n, i) * ScalarField::coordinate(n, j));
      g.at(std::vector<int>{i, j}) = num / (s * s);
    }
  return g;
}

}  // namespace kyt_test
