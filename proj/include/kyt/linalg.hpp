#pragma once

// Exact rational dense matrices with row reduction and null-space bases, plus
// floating-point least squares for decomposition fitting.

#include <Eigen/Dense>
#include <vector>

#include "kyt/rational.hpp"

namespace kyt {

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, Rational(0)) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rational& at(int r, int c) { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
  const Rational& at(int r, int c) const { return a_[static_cast<std::size_t>(r) * cols_ + c]; }

  // Reduced row echelon form in place; returns the pivot columns.
  std::vector<int> rref();
  int rank() const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Rational> a_;
};

// Exact basis of ker M.  Each vector has one free coordinate set to 1, the
// others solved from the reduced system.
std::vector<std::vector<Rational>> null_space(RationalMatrix m);

struct LstsqResult {
  Eigen::VectorXd coefficients;
  double residual_norm;  // ||A x - b||_2
};

// Minimizes ||A x - b||_2 via normal equations with column scaling.
LstsqResult lstsq(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

}  // namespace kyt
