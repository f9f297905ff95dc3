#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "kyt/linalg.hpp"

using namespace kyt;

TEST_CASE("null space: trivial cases") {
  RationalMatrix eye(3, 3);
  for (int i = 0; i < 3; ++i) eye.at(i, i) = 1;
  CHECK(null_space(eye).empty());

  RationalMatrix zero(2, 4);
  CHECK(null_space(zero).size() == 4u);

  RationalMatrix row(1, 2);
  row.at(0, 0) = 1;
  row.at(0, 1) = 1;
  auto basis = null_space(row);
  REQUIRE(basis.size() == 1u);
  CHECK(basis[0][0] == rat(-1));
  CHECK(basis[0][1] == rat(1));
}

TEST_CASE("null-space vectors satisfy M v = 0 exactly and rank-nullity holds") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    int rows = 1 + static_cast<int>(rng() % 6);
    int cols = 1 + static_cast<int>(rng() % 6);
    RationalMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) {
        long num = static_cast<long>(rng() % 7) - 3;
        long den = 1 + static_cast<long>(rng() % 3);
        m.at(r, c) = rat(num, den);
      }

    auto basis = null_space(m);
    CHECK(m.rank() + static_cast<int>(basis.size()) == cols);
    for (const auto& v : basis) {
      for (int r = 0; r < rows; ++r) {
        Rational acc(0);
        for (int c = 0; c < cols; ++c) acc += m.at(r, c) * v[c];
        REQUIRE(acc == 0);
      }
    }
  }
}

TEST_CASE("rref is idempotent on the rank") {
  RationalMatrix m(3, 4);
  m.at(0, 0) = rat(2);
  m.at(0, 2) = rat(1, 3);
  m.at(1, 0) = rat(4);
  m.at(1, 2) = rat(2, 3);
  m.at(2, 1) = rat(-1);
  CHECK(m.rank() == 2);
}

TEST_CASE("lstsq recovers exact coefficients and reports residuals") {
  std::mt19937_64 rng(43);
  const int rows = 30, cols = 4;
  Eigen::MatrixXd a(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      a(r, c) = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  // wildly different column scales to exercise the scaling path
  a.col(2) *= 1e6;
  a.col(3) *= 1e-5;

  Eigen::VectorXd truth(cols);
  truth << 1.5, -2.0, 3.0e-6, 4.0e4;
  Eigen::VectorXd b = a * truth;

  auto fit = lstsq(a, b);
  CHECK(fit.residual_norm <= 1e-9 * b.norm());
  for (int c = 0; c < cols; ++c)
    CHECK(fit.coefficients(c) == doctest::Approx(truth(c)).epsilon(1e-8));

  // inconsistent system reports a nonzero residual
  Eigen::VectorXd b2 = b;
  b2(0) += 10.0;
  auto fit2 = lstsq(a, b2);
  CHECK(fit2.residual_norm > 1.0);
}
