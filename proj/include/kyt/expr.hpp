#pragma once

// Scalar fields on a coordinate chart: immutable expression trees over the
// coordinates x1..xn with exact rational literals, symbolic partial
// differentiation and pointwise evaluation.

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kyt/rational.hpp"

namespace kyt {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t byte_offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Raised when evaluation hits ln/sqrt of a non-positive argument, a zero
// divisor, or a non-finite intermediate; carries the offending subexpression.
class EvalError : public std::runtime_error {
 public:
  EvalError(const std::string& message, std::string subexpression);
  const std::string& subexpression() const { return subexpr_; }

 private:
  std::string subexpr_;
};

namespace detail {
struct Expr;
}
using ExprPtr = std::shared_ptr<const detail::Expr>;

// Per-point evaluation cache.  Fields built from shared subtrees (a gauge
// scalar reused across tensor components, say) are evaluated once per point
// when they share a context.
class EvalContext {
 public:
  explicit EvalContext(std::span<const double> x) : x_(x) {}
  std::span<const double> point() const { return x_; }
  std::unordered_map<const detail::Expr*, double>& memo() { return memo_; }

 private:
  std::span<const double> x_;
  std::unordered_map<const detail::Expr*, double> memo_;
};

class ScalarField {
 public:
  ScalarField() = default;  // zero field of dimension 0; assign before use

  static ScalarField constant(int n, const Rational& value);
  static ScalarField coordinate(int n, int index);  // 1-based index
  static ScalarField parse(std::string_view text, int n);

  int dimension() const { return n_; }
  bool is_zero() const;      // structurally the literal 0
  bool is_constant() const;

  ScalarField diff(int index) const;
  double eval(std::span<const double> x) const;
  double eval(EvalContext& ctx) const;
  std::string to_string() const;

  friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator*(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator/(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator-(const ScalarField& a);
  friend ScalarField operator*(const Rational& c, const ScalarField& a);

  friend ScalarField pow(const ScalarField& base, long exponent);
  friend ScalarField exp(const ScalarField& f);
  friend ScalarField ln(const ScalarField& f);
  friend ScalarField sin(const ScalarField& f);
  friend ScalarField cos(const ScalarField& f);
  friend ScalarField sqrt(const ScalarField& f);

 private:
  ScalarField(int n, ExprPtr node) : n_(n), node_(std::move(node)) {}

  int n_ = 0;
  ExprPtr node_;
};

ScalarField pow(const ScalarField& base, long exponent);
ScalarField exp(const ScalarField& f);
ScalarField ln(const ScalarField& f);
ScalarField sin(const ScalarField& f);
ScalarField cos(const ScalarField& f);
ScalarField sqrt(const ScalarField& f);

}  // namespace kyt
