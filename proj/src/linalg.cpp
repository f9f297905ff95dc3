// Gauss-Jordan elimination over the rationals and least squares over doubles.

#include "kyt/linalg.hpp"

namespace kyt {

std::vector<int> RationalMatrix::rref() {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < cols_ && row < rows_; ++col) {
    int pivot = -1;
    for (int r = row; r < rows_; ++r) {
      if (at(r, col) != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != row)
      for (int c = col; c < cols_; ++c) std::swap(at(row, c), at(pivot, c));

    Rational inv = 1 / at(row, col);
    for (int c = col; c < cols_; ++c) at(row, c) *= inv;

    for (int r = 0; r < rows_; ++r) {
      if (r == row || at(r, col) == 0) continue;
      Rational factor = at(r, col);
      for (int c = col; c < cols_; ++c) at(r, c) -= factor * at(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

int RationalMatrix::rank() const {
  RationalMatrix copy = *this;
  return static_cast<int>(copy.rref().size());
}

std::vector<std::vector<Rational>> null_space(RationalMatrix m) {
  const int cols = m.cols();
  std::vector<int> pivots = m.rref();

  std::vector<bool> is_pivot(cols, false);
  for (int c : pivots) is_pivot[c] = true;

  std::vector<std::vector<Rational>> basis;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r)
      v[pivots[r]] = -m.at(static_cast<int>(r), free);
    basis.push_back(std::move(v));
  }
  return basis;
}

LstsqResult lstsq(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const int cols = static_cast<int>(a.cols());
  Eigen::VectorXd scale(cols);
  for (int c = 0; c < cols; ++c) {
    double norm = a.col(c).norm();
    scale(c) = norm > 0 ? 1.0 / norm : 1.0;
  }
  Eigen::MatrixXd as = a * scale.asDiagonal();
  Eigen::MatrixXd gram = as.transpose() * as;
  Eigen::VectorXd rhs = as.transpose() * b;
  Eigen::VectorXd y = gram.ldlt().solve(rhs);

  LstsqResult out;
  out.coefficients = scale.asDiagonal() * y;
  out.residual_norm = (a * out.coefficients - b).norm();
  return out;
}

}  // namespace kyt
