#pragma once

// Symmetry-aware constant tensors and tensor fields: canonical multi-index
// enumeration, (anti)symmetrization, products, interior product, and the
// volume duality that turns tuples of vector fields into forms.

#include <span>
#include <vector>

#include "kyt/expr.hpp"
#include "kyt/rational.hpp"

namespace kyt {

// --- canonical multi-index enumeration ---------------------------------------
//
// Strictly increasing tuples (antisymmetric storage) and non-decreasing tuples
// (symmetric storage) over 1..n, both in colexicographic order.  rank/unrank
// round-trip over the whole enumeration; the null-space solver shares this
// ordering.

std::int64_t combo_count(int n, int p);                       // C(n, p)
std::int64_t combo_rank(std::span<const int> tuple);          // strictly increasing
void combo_unrank(int p, std::int64_t rank, std::span<int> out);

std::int64_t multiset_count(int n, int p);                    // C(n+p-1, p)
std::int64_t multiset_rank(std::span<const int> tuple);       // non-decreasing
void multiset_unrank(int p, std::int64_t rank, std::span<int> out);

// Advances a general index tuple over {1..n}^p in row-major order; returns
// false after the last tuple.
bool next_index(std::span<int> idx, int n);

// Sign of the permutation sorting `tuple` ascending; 0 if entries repeat.
int sort_sign(std::span<const int> tuple, std::vector<int>& sorted);

// --- constant tensors ---------------------------------------------------------

enum class Symmetry { general, symmetric, antisymmetric, bisymmetric };

// Exact-rational constant tensor storing only canonical components.  Access by
// an arbitrary index tuple returns the sign-adjusted canonical value.
class CoeffTensor {
 public:
  CoeffTensor() = default;
  CoeffTensor(int n, int rank, Symmetry sym);
  // Bisymmetric: symmetric separately in the first p and the last q slots.
  static CoeffTensor bisymmetric(int n, int p, int q);

  int dimension() const { return n_; }
  int rank() const { return rank_; }
  Symmetry symmetry() const { return sym_; }
  int block_split() const { return block_p_; }

  std::size_t storage_size() const { return data_.size(); }
  const std::vector<Rational>& storage() const { return data_; }

  Rational get(std::span<const int> idx) const;
  // idx must be canonical for the symmetry class.
  void set(std::span<const int> idx, const Rational& value);

  std::int64_t canonical_rank(std::span<const int> canonical_idx) const;
  void canonical_unrank(std::int64_t rank, std::span<int> out) const;

 private:
  int n_ = 0, rank_ = 0;
  Symmetry sym_ = Symmetry::general;
  int block_p_ = 0;  // bisymmetric split point
  std::vector<Rational> data_;
};

// --- numeric tensors ----------------------------------------------------------

// Dense real-valued covariant tensor, the result of evaluating a TensorField
// at a point.  Rank 0 is a scalar.
class NumericTensor {
 public:
  NumericTensor() = default;
  NumericTensor(int n, int rank);

  int dimension() const { return n_; }
  int rank() const { return rank_; }
  double& at(std::span<const int> idx) { return data_[offset(idx)]; }
  double at(std::span<const int> idx) const { return data_[offset(idx)]; }
  double& scalar() { return data_[0]; }
  double scalar() const { return data_[0]; }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  std::size_t offset(std::span<const int> idx) const;

 private:
  int n_ = 0, rank_ = 0;
  std::vector<double> data_;
};

NumericTensor sym(const NumericTensor& t);
NumericTensor alt(const NumericTensor& t);
NumericTensor tensor_product(const NumericTensor& a, const NumericTensor& b);
// (i_v t)_{i2..ip} = v^k t_{k i2..ip}
NumericTensor interior_product(std::span<const double> v, const NumericTensor& t);
double max_abs(const NumericTensor& t);

// --- tensor fields ------------------------------------------------------------

// Covariant rank-p tensor field with dense ScalarField components.
class TensorField {
 public:
  TensorField() = default;
  TensorField(int n, int rank);  // all components zero

  int dimension() const { return n_; }
  int rank() const { return rank_; }
  ScalarField& at(std::span<const int> idx) { return comps_[offset(idx)]; }
  const ScalarField& at(std::span<const int> idx) const { return comps_[offset(idx)]; }
  ScalarField& component(std::size_t flat) { return comps_[flat]; }
  const ScalarField& component(std::size_t flat) const { return comps_[flat]; }
  std::size_t component_count() const { return comps_.size(); }

  NumericTensor eval(EvalContext& ctx) const;
  NumericTensor eval(std::span<const double> x) const;

  std::size_t offset(std::span<const int> idx) const;

 private:
  int n_ = 0, rank_ = 0;
  std::vector<ScalarField> comps_;
};

// Contravariant vector field X^i.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(int n);

  int dimension() const { return n_; }
  ScalarField& at(int i) { return comps_[i - 1]; }           // 1-based
  const ScalarField& at(int i) const { return comps_[i - 1]; }
  std::vector<double> eval(EvalContext& ctx) const;
  std::vector<double> eval(std::span<const double> x) const;

 private:
  int n_ = 0;
  std::vector<ScalarField> comps_;
};

TensorField sym(const TensorField& t);
TensorField alt(const TensorField& t);
TensorField tensor_product(const TensorField& a, const TensorField& b);
// sym of the tensor product of rank-1 fields.
TensorField sym_product(std::span<const TensorField> one_forms);

// Degree n-p form dual to alt(X_1 x ... x X_p) relative to the volume scalar
// eta; fully antisymmetric.  Requires 1 <= p <= n-1.
TensorField volume_dual(std::span<const VectorField> fields, const ScalarField& eta);

TensorField operator+(const TensorField& a, const TensorField& b);
TensorField operator-(const TensorField& a, const TensorField& b);
TensorField operator*(const ScalarField& s, const TensorField& t);
TensorField operator*(const Rational& c, const TensorField& t);

}  // namespace kyt
