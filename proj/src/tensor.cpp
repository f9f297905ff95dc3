// Canonical index enumeration, constant tensors with symmetry-aware storage,
// dense tensor fields, and the algebraic operations on both.

#include "kyt/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace kyt {

// --- multi-index enumeration --------------------------------------------------

std::int64_t combo_count(int n, int p) { return binomial(n, p); }

std::int64_t combo_rank(std::span<const int> tuple) {
  std::int64_t r = 0;
  for (std::size_t i = 0; i < tuple.size(); ++i)
    r += binomial(tuple[i] - 1, static_cast<int>(i) + 1);
  return r;
}

void combo_unrank(int p, std::int64_t rank, std::span<int> out) {
  for (int i = p; i >= 1; --i) {
    int a = i;  // smallest value with C(a-1, i) = 0
    while (binomial(a, i) <= rank) ++a;
    out[i - 1] = a;
    rank -= binomial(a - 1, i);
  }
}

std::int64_t multiset_count(int n, int p) { return binomial(n + p - 1, p); }

std::int64_t multiset_rank(std::span<const int> tuple) {
  std::vector<int> shifted(tuple.size());
  for (std::size_t i = 0; i < tuple.size(); ++i)
    shifted[i] = tuple[i] + static_cast<int>(i);
  return combo_rank(shifted);
}

void multiset_unrank(int p, std::int64_t rank, std::span<int> out) {
  combo_unrank(p, rank, out);
  for (int i = 0; i < p; ++i) out[i] -= i;
}

bool next_index(std::span<int> idx, int n) {
  for (int i = static_cast<int>(idx.size()) - 1; i >= 0; --i) {
    if (idx[i] < n) {
      ++idx[i];
      for (std::size_t j = i + 1; j < idx.size(); ++j) idx[j] = 1;
      return true;
    }
  }
  return false;
}

int sort_sign(std::span<const int> tuple, std::vector<int>& sorted) {
  sorted.assign(tuple.begin(), tuple.end());
  int sign = 1;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    for (std::size_t j = i; j > 0 && sorted[j - 1] > sorted[j]; --j) {
      std::swap(sorted[j - 1], sorted[j]);
      sign = -sign;
    }
  }
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] == sorted[i - 1]) return 0;
  return sign;
}

namespace {

// Permutations of 0..p-1 with signs, regenerated on demand; p stays tiny here.
struct PermTable {
  std::vector<std::vector<int>> perms;
  std::vector<int> signs;
};

PermTable permutations(int p) {
  PermTable t;
  std::vector<int> perm(p);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    int sign = 1;
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j)
        if (perm[i] > perm[j]) sign = -sign;
    t.perms.push_back(perm);
    t.signs.push_back(sign);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return t;
}

}  // namespace

// --- CoeffTensor ---------------------------------------------------------------

CoeffTensor::CoeffTensor(int n, int rank, Symmetry sym)
    : n_(n), rank_(rank), sym_(sym), block_p_(rank) {
  std::size_t size = 0;
  switch (sym) {
    case Symmetry::general: {
      size = 1;
      for (int i = 0; i < rank; ++i) size *= n;
      break;
    }
    case Symmetry::symmetric: size = multiset_count(n, rank); break;
    case Symmetry::antisymmetric: size = combo_count(n, rank); break;
    case Symmetry::bisymmetric:
      throw std::invalid_argument("use CoeffTensor::bisymmetric(n, p, q)");
  }
  data_.assign(size, Rational(0));
}

CoeffTensor CoeffTensor::bisymmetric(int n, int p, int q) {
  CoeffTensor t;
  t.n_ = n;
  t.rank_ = p + q;
  t.sym_ = Symmetry::bisymmetric;
  t.block_p_ = p;
  t.data_.assign(multiset_count(n, p) * multiset_count(n, q), Rational(0));
  return t;
}

std::int64_t CoeffTensor::canonical_rank(std::span<const int> idx) const {
  switch (sym_) {
    case Symmetry::general: {
      std::int64_t off = 0;
      for (int i = 0; i < rank_; ++i) off = off * n_ + (idx[i] - 1);
      return off;
    }
    case Symmetry::symmetric: return multiset_rank(idx);
    case Symmetry::antisymmetric: return combo_rank(idx);
    case Symmetry::bisymmetric: {
      int q = rank_ - block_p_;
      return multiset_rank(idx.subspan(0, block_p_)) * multiset_count(n_, q) +
             multiset_rank(idx.subspan(block_p_));
    }
  }
  return 0;
}

void CoeffTensor::canonical_unrank(std::int64_t rank, std::span<int> out) const {
  switch (sym_) {
    case Symmetry::general: {
      for (int i = rank_ - 1; i >= 0; --i) {
        out[i] = static_cast<int>(rank % n_) + 1;
        rank /= n_;
      }
      break;
    }
    case Symmetry::symmetric: multiset_unrank(rank_, rank, out); break;
    case Symmetry::antisymmetric: combo_unrank(rank_, rank, out); break;
    case Symmetry::bisymmetric: {
      int q = rank_ - block_p_;
      std::int64_t cq = multiset_count(n_, q);
      multiset_unrank(block_p_, rank / cq, out.subspan(0, block_p_));
      multiset_unrank(q, rank % cq, out.subspan(block_p_));
      break;
    }
  }
}

Rational CoeffTensor::get(std::span<const int> idx) const {
  std::vector<int> sorted;
  switch (sym_) {
    case Symmetry::general: return data_[canonical_rank(idx)];
    case Symmetry::symmetric: {
      sorted.assign(idx.begin(), idx.end());
      std::sort(sorted.begin(), sorted.end());
      return data_[multiset_rank(sorted)];
    }
    case Symmetry::antisymmetric: {
      int sign = sort_sign(idx, sorted);
      if (sign == 0) return Rational(0);
      Rational v = data_[combo_rank(sorted)];
      return sign > 0 ? v : Rational(-v);
    }
    case Symmetry::bisymmetric: {
      int q = rank_ - block_p_;
      std::vector<int> a(idx.begin(), idx.begin() + block_p_);
      std::vector<int> b(idx.begin() + block_p_, idx.end());
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      return data_[multiset_rank(a) * multiset_count(n_, q) + multiset_rank(b)];
    }
  }
  return Rational(0);
}

void CoeffTensor::set(std::span<const int> idx, const Rational& value) {
  std::vector<int> sorted;
  switch (sym_) {
    case Symmetry::general:
      data_[canonical_rank(idx)] = value;
      return;
    case Symmetry::symmetric:
      sorted.assign(idx.begin(), idx.end());
      std::sort(sorted.begin(), sorted.end());
      data_[multiset_rank(sorted)] = value;
      return;
    case Symmetry::antisymmetric: {
      int sign = sort_sign(idx, sorted);
      if (sign == 0) throw std::invalid_argument("repeated index in antisymmetric tensor");
      data_[combo_rank(sorted)] = sign > 0 ? value : Rational(-value);
      return;
    }
    case Symmetry::bisymmetric: {
      int q = rank_ - block_p_;
      std::vector<int> a(idx.begin(), idx.begin() + block_p_);
      std::vector<int> b(idx.begin() + block_p_, idx.end());
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      data_[multiset_rank(a) * multiset_count(n_, q) + multiset_rank(b)] = value;
      return;
    }
  }
}

// --- NumericTensor --------------------------------------------------------------

NumericTensor::NumericTensor(int n, int rank) : n_(n), rank_(rank) {
  std::size_t size = 1;
  for (int i = 0; i < rank; ++i) size *= n;
  data_.assign(size, 0.0);
}

std::size_t NumericTensor::offset(std::span<const int> idx) const {
  std::size_t off = 0;
  for (int i = 0; i < rank_; ++i) off = off * n_ + (idx[i] - 1);
  return off;
}

NumericTensor sym(const NumericTensor& t) {
  const int p = t.rank();
  NumericTensor out(t.dimension(), p);
  const auto table = permutations(p);
  std::vector<int> idx(p, 1), pidx(p);
  const double inv = 1.0 / static_cast<double>(table.perms.size());
  do {
    double acc = 0;
    for (const auto& perm : table.perms) {
      for (int i = 0; i < p; ++i) pidx[i] = idx[perm[i]];
      acc += t.at(pidx);
    }
    out.at(idx) = acc * inv;
  } while (next_index(idx, t.dimension()));
  return out;
}

NumericTensor alt(const NumericTensor& t) {
  const int p = t.rank();
  NumericTensor out(t.dimension(), p);
  const auto table = permutations(p);
  std::vector<int> idx(p, 1), pidx(p);
  const double inv = 1.0 / static_cast<double>(table.perms.size());
  do {
    double acc = 0;
    for (std::size_t s = 0; s < table.perms.size(); ++s) {
      for (int i = 0; i < p; ++i) pidx[i] = idx[table.perms[s][i]];
      acc += table.signs[s] * t.at(pidx);
    }
    out.at(idx) = acc * inv;
  } while (next_index(idx, t.dimension()));
  return out;
}

NumericTensor tensor_product(const NumericTensor& a, const NumericTensor& b) {
  NumericTensor out(a.dimension(), a.rank() + b.rank());
  std::vector<int> idx(a.rank() + b.rank(), 1);
  do {
    std::span<const int> s(idx);
    out.at(idx) = a.at(s.subspan(0, a.rank())) * b.at(s.subspan(a.rank()));
  } while (next_index(idx, a.dimension()));
  return out;
}

NumericTensor interior_product(std::span<const double> v, const NumericTensor& t) {
  if (t.rank() < 1) throw std::invalid_argument("interior product needs rank >= 1");
  const int n = t.dimension();
  NumericTensor out(n, t.rank() - 1);
  std::vector<int> idx(t.rank() - 1, 1);
  std::vector<int> full(t.rank());
  do {
    std::copy(idx.begin(), idx.end(), full.begin() + 1);
    double acc = 0;
    for (int k = 1; k <= n; ++k) {
      full[0] = k;
      acc += v[k - 1] * t.at(full);
    }
    out.at(idx) = acc;
  } while (next_index(idx, n));
  return out;
}

double max_abs(const NumericTensor& t) {
  double m = 0;
  for (double v : t.data()) m = std::max(m, std::abs(v));
  return m;
}

// --- TensorField -----------------------------------------------------------------

TensorField::TensorField(int n, int rank) : n_(n), rank_(rank) {
  std::size_t size = 1;
  for (int i = 0; i < rank; ++i) size *= n;
  comps_.assign(size, ScalarField::constant(n, Rational(0)));
}

std::size_t TensorField::offset(std::span<const int> idx) const {
  std::size_t off = 0;
  for (int i = 0; i < rank_; ++i) off = off * n_ + (idx[i] - 1);
  return off;
}

NumericTensor TensorField::eval(EvalContext& ctx) const {
  NumericTensor out(n_, rank_);
  for (std::size_t i = 0; i < comps_.size(); ++i) out.data()[i] = comps_[i].eval(ctx);
  return out;
}

NumericTensor TensorField::eval(std::span<const double> x) const {
  EvalContext ctx(x);
  return eval(ctx);
}

VectorField::VectorField(int n) : n_(n) {
  comps_.assign(n, ScalarField::constant(n, Rational(0)));
}

std::vector<double> VectorField::eval(EvalContext& ctx) const {
  std::vector<double> out(n_);
  for (int i = 0; i < n_; ++i) out[i] = comps_[i].eval(ctx);
  return out;
}

std::vector<double> VectorField::eval(std::span<const double> x) const {
  EvalContext ctx(x);
  return eval(ctx);
}

TensorField sym(const TensorField& t) {
  const int p = t.rank();
  TensorField out(t.dimension(), p);
  const auto table = permutations(p);
  const Rational inv = Rational(1) / Rational(static_cast<long>(table.perms.size()));
  std::vector<int> idx(p, 1), pidx(p);
  do {
    ScalarField acc = ScalarField::constant(t.dimension(), Rational(0));
    for (const auto& perm : table.perms) {
      for (int i = 0; i < p; ++i) pidx[i] = idx[perm[i]];
      acc = acc + t.at(pidx);
    }
    out.at(idx) = inv * acc;
  } while (next_index(idx, t.dimension()));
  return out;
}

TensorField alt(const TensorField& t) {
  const int p = t.rank();
  TensorField out(t.dimension(), p);
  const auto table = permutations(p);
  const Rational inv = Rational(1) / Rational(static_cast<long>(table.perms.size()));
  std::vector<int> idx(p, 1), pidx(p);
  do {
    ScalarField acc = ScalarField::constant(t.dimension(), Rational(0));
    for (std::size_t s = 0; s < table.perms.size(); ++s) {
      for (int i = 0; i < p; ++i) pidx[i] = idx[table.perms[s][i]];
      if (table.signs[s] > 0)
        acc = acc + t.at(pidx);
      else
        acc = acc - t.at(pidx);
    }
    out.at(idx) = inv * acc;
  } while (next_index(idx, t.dimension()));
  return out;
}

TensorField tensor_product(const TensorField& a, const TensorField& b) {
  TensorField out(a.dimension(), a.rank() + b.rank());
  std::vector<int> idx(a.rank() + b.rank(), 1);
  do {
    std::span<const int> s(idx);
    out.at(idx) = a.at(s.subspan(0, a.rank())) * b.at(s.subspan(a.rank()));
  } while (next_index(idx, a.dimension()));
  return out;
}

TensorField sym_product(std::span<const TensorField> one_forms) {
  if (one_forms.empty()) throw std::invalid_argument("sym_product of nothing");
  TensorField prod = one_forms[0];
  for (std::size_t i = 1; i < one_forms.size(); ++i)
    prod = tensor_product(prod, one_forms[i]);
  return sym(prod);
}

namespace {

// Determinant of a small matrix of scalar fields, Laplace expansion along the
// first row.
ScalarField field_det(const std::vector<std::vector<ScalarField>>& m, int chart_dim) {
  const int p = static_cast<int>(m.size());
  if (p == 0) return ScalarField::constant(chart_dim, Rational(1));
  if (p == 1) return m[0][0];
  ScalarField acc = ScalarField::constant(chart_dim, Rational(0));
  for (int c = 0; c < p; ++c) {
    std::vector<std::vector<ScalarField>> minor(p - 1);
    for (int r = 1; r < p; ++r)
      for (int cc = 0; cc < p; ++cc)
        if (cc != c) minor[r - 1].push_back(m[r][cc]);
    ScalarField term = m[0][c] * field_det(minor, chart_dim);
    acc = (c % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

}  // namespace

TensorField volume_dual(std::span<const VectorField> fields, const ScalarField& eta) {
  const int p = static_cast<int>(fields.size());
  const int n = eta.dimension();
  if (p < 1 || p > n - 1) throw std::invalid_argument("volume_dual needs 1 <= p <= n-1");
  const int q = n - p;

  TensorField out(n, q);
  std::vector<int> jdx(q, 1);
  std::vector<int> sorted;
  do {
    // Only tuples of q distinct indices carry a value; the complement supplies
    // the contracted slots.
    std::vector<bool> used(n + 1, false);
    bool distinct = true;
    for (int j : jdx) {
      if (used[j]) { distinct = false; break; }
      used[j] = true;
    }
    if (!distinct) continue;

    std::vector<int> complement;
    for (int i = 1; i <= n; ++i)
      if (!used[i]) complement.push_back(i);

    std::vector<int> full(complement);
    full.insert(full.end(), jdx.begin(), jdx.end());
    int sign = sort_sign(full, sorted);

    std::vector<std::vector<ScalarField>> m(p, std::vector<ScalarField>());
    for (int a = 0; a < p; ++a)
      for (int b = 0; b < p; ++b) m[a].push_back(fields[a].at(complement[b]));

    ScalarField value = eta * field_det(m, n);
    out.at(jdx) = sign > 0 ? value : -value;
  } while (next_index(jdx, n));
  return out;
}

TensorField operator+(const TensorField& a, const TensorField& b) {
  TensorField out(a.dimension(), a.rank());
  for (std::size_t i = 0; i < out.component_count(); ++i)
    out.component(i) = a.component(i) + b.component(i);
  return out;
}

TensorField operator-(const TensorField& a, const TensorField& b) {
  TensorField out(a.dimension(), a.rank());
  for (std::size_t i = 0; i < out.component_count(); ++i)
    out.component(i) = a.component(i) - b.component(i);
  return out;
}

TensorField operator*(const ScalarField& s, const TensorField& t) {
  TensorField out(t.dimension(), t.rank());
  for (std::size_t i = 0; i < out.component_count(); ++i)
    out.component(i) = s * t.component(i);
  return out;
}

TensorField operator*(const Rational& c, const TensorField& t) {
  TensorField out(t.dimension(), t.rank());
  for (std::size_t i = 0; i < out.component_count(); ++i)
    out.component(i) = c * t.component(i);
  return out;
}

}  // namespace kyt
