// Killing-Yano and Killing tensor spaces: closed-form dimension counts,
// flat-space linear systems and their exact null spaces, basis construction,
// and residual evaluation.

#include "kyt/killing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kyt {

std::int64_t ky_dim(int n, int p) {
  if (p < 1 || p > n - 1) throw std::invalid_argument("ky_dim needs 1 <= p <= n-1");
  return factorial_ratio_ky(n, p);
}

std::int64_t kt_dim(int n, int p) {
  if (p < 1) throw std::invalid_argument("kt_dim needs p >= 1");
  return factorial_ratio_kt(n, p);
}

// --- flat Killing-Yano system -----------------------------------------------------
//
// Components are antisymmetric in their p indices and linear in x; unknowns
// are one constant and n slope coefficients per canonical strictly-increasing
// tuple.  Column layout: I_rank * (n+1) + m, with m = 0 the constant and
// m = k the x^k slope.

namespace {

RationalMatrix ky_flat_system(int n, int p) {
  const std::int64_t comp_count = combo_count(n, p);
  const int cols = static_cast<int>(comp_count * (n + 1));

  std::vector<std::vector<Rational>> rows;
  std::vector<int> inner(p > 1 ? p - 1 : 0);
  std::vector<int> with_i(p), with_j(p), sorted;

  auto add_row = [&](int i, int j, std::span<const int> rest) {
    std::vector<Rational> row(cols, Rational(0));
    with_i[0] = i;
    std::copy(rest.begin(), rest.end(), with_i.begin() + 1);
    with_j[0] = j;
    std::copy(rest.begin(), rest.end(), with_j.begin() + 1);
    int si = sort_sign(with_i, sorted);
    if (si != 0) {
      std::int64_t r = combo_rank(sorted);
      row[r * (n + 1) + j] += si;
    }
    int sj = sort_sign(with_j, sorted);
    if (sj != 0) {
      std::int64_t r = combo_rank(sorted);
      row[r * (n + 1) + i] += sj;
    }
    bool nonzero = false;
    for (const auto& v : row)
      if (v != 0) { nonzero = true; break; }
    if (nonzero) rows.push_back(std::move(row));
  };

  const std::int64_t rest_count = combo_count(n, p - 1);
  for (std::int64_t rr = 0; rr < rest_count; ++rr) {
    combo_unrank(p - 1, rr, inner);
    for (int i = 1; i <= n; ++i)
      for (int j = i; j <= n; ++j) add_row(i, j, inner);
  }

  RationalMatrix m(static_cast<int>(rows.size()), cols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int c = 0; c < cols; ++c) m.at(static_cast<int>(r), c) = rows[r][c];
  return m;
}

}  // namespace

std::int64_t ky_flat_system_nullity(int n, int p) {
  if (p < 1 || p > n - 1) throw std::invalid_argument("need 1 <= p <= n-1");
  RationalMatrix m = ky_flat_system(n, p);
  return m.cols() - m.rank();
}

// --- flat Killing tensor system ----------------------------------------------------
//
// phi_I(x) = sum_J c_{I,J} m_J(x) over canonical non-decreasing I (|I| = p)
// and canonical monomial multisets J of degree 0..p.  One row per canonical
// non-decreasing (p+1)-tuple T and monomial K of degree <= p-1:
// the coefficient of m_K in sum_a d_{T[a]} phi_{T minus a}.

namespace {

struct KTSystemLayout {
  int n = 0, p = 0;
  std::int64_t comp_count = 0;        // canonical symmetric tuples |I| = p
  std::vector<std::int64_t> mono_offset;  // per degree q, into the monomial list
  std::int64_t mono_count = 0;        // canonical monomials of degree <= p

  std::int64_t col(std::int64_t comp_rank, int q, std::int64_t mono_rank) const {
    return comp_rank * mono_count + mono_offset[q] + mono_rank;
  }
};

KTSystemLayout kt_layout(int n, int p) {
  KTSystemLayout l;
  l.n = n;
  l.p = p;
  l.comp_count = multiset_count(n, p);
  l.mono_offset.assign(p + 1, 0);
  std::int64_t acc = 0;
  for (int q = 0; q <= p; ++q) {
    l.mono_offset[q] = acc;
    acc += multiset_count(n, q);
  }
  l.mono_count = acc;
  return l;
}

RationalMatrix kt_flat_system(int n, int p, const KTSystemLayout& l) {
  const int cols = static_cast<int>(l.comp_count * l.mono_count);

  std::vector<std::vector<Rational>> rows;
  std::vector<int> tuple(p + 1), comp(p), mono_k, mono_j;

  const std::int64_t tuple_count = multiset_count(n, p + 1);
  for (std::int64_t tr = 0; tr < tuple_count; ++tr) {
    multiset_unrank(p + 1, tr, tuple);
    for (int deg_k = 0; deg_k <= p - 1; ++deg_k) {
      mono_k.assign(deg_k, 0);
      const std::int64_t k_count = multiset_count(n, deg_k);
      for (std::int64_t kr = 0; kr < k_count; ++kr) {
        multiset_unrank(deg_k, kr, mono_k);
        std::vector<Rational> row(cols, Rational(0));
        for (int a = 0; a <= p; ++a) {
          const int var = tuple[a];
          // component index: tuple with slot a removed
          int w = 0;
          for (int b = 0; b <= p; ++b)
            if (b != a) comp[w++] = tuple[b];
          // monomial K + {var}; multiplicity = new exponent of var
          mono_j = mono_k;
          mono_j.insert(std::upper_bound(mono_j.begin(), mono_j.end(), var), var);
          int mult = static_cast<int>(std::count(mono_j.begin(), mono_j.end(), var));
          std::int64_t c = l.col(multiset_rank(comp), deg_k + 1, multiset_rank(mono_j));
          row[c] += mult;
        }
        bool nonzero = false;
        for (const auto& v : row)
          if (v != 0) { nonzero = true; break; }
        if (nonzero) rows.push_back(std::move(row));
      }
    }
  }

  RationalMatrix m(static_cast<int>(rows.size()), cols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int c = 0; c < cols; ++c) m.at(static_cast<int>(r), c) = rows[r][c];
  return m;
}

// x^{j1} ... x^{jq} for a non-decreasing tuple of variable indices.
ScalarField monomial_field(int n, std::span<const int> mono) {
  ScalarField f = ScalarField::constant(n, Rational(1));
  for (int v : mono) f = f * ScalarField::coordinate(n, v);
  return f;
}

std::int64_t monomial_multiplicity(std::span<const int> mono) {
  // number of distinct orderings: q! / prod (count!)
  mpz_class num;
  mpz_fac_ui(num.get_mpz_t(), mono.size());
  std::size_t i = 0;
  while (i < mono.size()) {
    std::size_t j = i;
    while (j < mono.size() && mono[j] == mono[i]) ++j;
    mpz_class c;
    mpz_fac_ui(c.get_mpz_t(), j - i);
    num /= c;
    i = j;
  }
  return static_cast<std::int64_t>(num.get_si());
}

}  // namespace

std::int64_t kt_flat_system_nullity(int n, int p) {
  if (p < 1) throw std::invalid_argument("need p >= 1");
  KTSystemLayout l = kt_layout(n, p);
  RationalMatrix m = kt_flat_system(n, p, l);
  return m.cols() - m.rank();
}

// --- basis construction --------------------------------------------------------------

KYBasis build_ky_basis(int n, int p, const ScalarField& gauge) {
  if (p < 1 || p > n - 1) throw std::invalid_argument("build_ky_basis needs 1 <= p <= n-1");
  KYBasis basis;
  basis.n = n;
  basis.degree = p;
  basis.gauge = gauge;

  ScalarField weight = gauge.is_zero() ? ScalarField::constant(n, Rational(1))
                                       : exp(Rational(p + 1) * gauge);

  std::vector<int> canon(p + 1), idx(p);

  // 'A' family: one element per canonical skew (p+1)-tuple, component
  // w_I = weight * A_{k I} x^k.
  for (std::int64_t r = 0; r < combo_count(n, p + 1); ++r) {
    combo_unrank(p + 1, r, canon);
    KYElement el;
    el.family = 'A';
    el.indices = canon;
    el.linear = CoeffTensor(n, p + 1, Symmetry::antisymmetric);
    el.linear.set(canon, Rational(1));
    el.constant = CoeffTensor(n, p, Symmetry::antisymmetric);

    el.field = TensorField(n, p);
    std::fill(idx.begin(), idx.end(), 1);
    std::vector<int> full(p + 1);
    do {
      ScalarField acc = ScalarField::constant(n, Rational(0));
      std::copy(idx.begin(), idx.end(), full.begin() + 1);
      for (int k = 1; k <= n; ++k) {
        full[0] = k;
        Rational a = el.linear.get(full);
        if (a != 0) acc = acc + a * ScalarField::coordinate(n, k);
      }
      el.field.at(idx) = weight * acc;
    } while (next_index(idx, n));
    basis.elements.push_back(std::move(el));
  }

  // 'B' family: one element per canonical skew p-tuple, w_I = weight * B_I.
  std::vector<int> canon_b(p);
  for (std::int64_t r = 0; r < combo_count(n, p); ++r) {
    combo_unrank(p, r, canon_b);
    KYElement el;
    el.family = 'B';
    el.indices = canon_b;
    el.linear = CoeffTensor(n, p + 1, Symmetry::antisymmetric);
    el.constant = CoeffTensor(n, p, Symmetry::antisymmetric);
    el.constant.set(canon_b, Rational(1));

    el.field = TensorField(n, p);
    std::fill(idx.begin(), idx.end(), 1);
    do {
      Rational b = el.constant.get(idx);
      if (b != 0) el.field.at(idx) = weight * ScalarField::constant(n, b);
    } while (next_index(idx, n));
    basis.elements.push_back(std::move(el));
  }
  return basis;
}

KTBasis build_kt_basis(int n, int p, const ScalarField& gauge) {
  if (p < 1) throw std::invalid_argument("build_kt_basis needs p >= 1");
  KTBasis basis;
  basis.n = n;
  basis.degree = p;
  basis.gauge = gauge;

  KTSystemLayout l = kt_layout(n, p);
  RationalMatrix m = kt_flat_system(n, p, l);
  auto kernel = null_space(std::move(m));

  ScalarField weight = gauge.is_zero() ? ScalarField::constant(n, Rational(1))
                                       : exp(Rational(2 * p) * gauge);

  std::vector<int> comp(p), mono, idx(p), sorted;
  for (std::size_t e = 0; e < kernel.size(); ++e) {
    const auto& c = kernel[e];
    KTElement el;
    el.ordinal = static_cast<int>(e);

    // coefficient record: A^{(q)}_{I,J} = c_{I,J} / multiplicity(J)
    for (int q = 0; q <= p; ++q) {
      CoeffTensor a = CoeffTensor::bisymmetric(n, p, q);
      mono.assign(q, 0);
      for (std::int64_t ir = 0; ir < l.comp_count; ++ir) {
        multiset_unrank(p, ir, comp);
        for (std::int64_t jr = 0; jr < multiset_count(n, q); ++jr) {
          multiset_unrank(q, jr, mono);
          Rational v = c[l.col(ir, q, jr)];
          if (v == 0) continue;
          std::vector<int> joint(comp);
          joint.insert(joint.end(), mono.begin(), mono.end());
          a.set(joint, v / Rational(monomial_multiplicity(mono)));
        }
      }
      el.coeff.push_back(std::move(a));
    }

    // dense field: phi_I = weight * sum_{q,J} c_{sorted I, J} m_J
    el.field = TensorField(n, p);
    std::fill(idx.begin(), idx.end(), 1);
    do {
      sorted.assign(idx.begin(), idx.end());
      std::sort(sorted.begin(), sorted.end());
      std::int64_t ir = multiset_rank(sorted);
      ScalarField poly = ScalarField::constant(n, Rational(0));
      for (int q = 0; q <= p; ++q) {
        mono.assign(q, 0);
        for (std::int64_t jr = 0; jr < multiset_count(n, q); ++jr) {
          multiset_unrank(q, jr, mono);
          Rational v = c[l.col(ir, q, jr)];
          if (v != 0) poly = poly + v * monomial_field(n, mono);
        }
      }
      el.field.at(idx) = weight * poly;
    } while (next_index(idx, n));

    basis.elements.push_back(std::move(el));
  }
  return basis;
}

// --- residuals --------------------------------------------------------------------------

double ky_residual(const TensorField& omega, const AffineConnection& gamma,
                   std::span<const std::vector<double>> points) {
  const int n = omega.dimension();
  const int p = omega.rank();
  TensorField grad = covariant_derivative(omega, gamma);
  double worst = 0;
  std::vector<int> idx(p + 1, 1), swapped(p + 1);
  for (const auto& pt : points) {
    EvalContext ctx(pt);
    NumericTensor t = grad.eval(ctx);
    std::fill(idx.begin(), idx.end(), 1);
    do {
      swapped = idx;
      std::swap(swapped[0], swapped[1]);
      worst = std::max(worst, std::abs(t.at(idx) + t.at(swapped)));
    } while (next_index(idx, n));
  }
  return worst;
}

double kt_residual(const TensorField& phi, const AffineConnection& gamma,
                   std::span<const std::vector<double>> points) {
  const int n = phi.dimension();
  const int p = phi.rank();
  TensorField grad = covariant_derivative(phi, gamma);
  double worst = 0;
  std::vector<int> idx(p + 1, 1), rot(p + 1);
  for (const auto& pt : points) {
    EvalContext ctx(pt);
    NumericTensor t = grad.eval(ctx);
    std::fill(idx.begin(), idx.end(), 1);
    do {
      double acc = 0;
      for (int s = 0; s <= p; ++s) {
        for (int m = 0; m <= p; ++m) rot[m] = idx[(s + m) % (p + 1)];
        acc += t.at(rot);
      }
      worst = std::max(worst, std::abs(acc));
    } while (next_index(idx, n));
  }
  return worst;
}

TensorField ky_from_concircular(std::span<const VectorField> fields,
                                const EquiaffineStructure& s) {
  return volume_dual(fields, s.volume);
}

TensorField kt_from_ky1(std::span<const TensorField> one_forms) {
  return sym_product(one_forms);
}

TensorField pullback_ky(const TensorField& omega, int p, const ScalarField& gauge) {
  if (gauge.is_zero()) return omega;
  return exp(Rational(-(p + 1)) * gauge) * omega;
}

TensorField pullback_kt(const TensorField& phi, int p, const ScalarField& gauge) {
  if (gauge.is_zero()) return phi;
  return exp(Rational(-2 * p) * gauge) * phi;
}

// --- coefficient symmetry conditions -------------------------------------------------------

CoefficientSymmetryReport check_coefficient_symmetries(const KTBasis& basis) {
  const int n = basis.n;
  const int p = basis.degree;
  CoefficientSymmetryReport report;

  std::vector<int> tuple(p + 1), fixed, joint;
  for (const auto& el : basis.elements) {
    std::vector<CoefficientConditionResult> conditions;
    for (int q = 1; q <= p; ++q) {
      CoefficientConditionResult res;
      res.q = q;
      const CoeffTensor& a = el.coeff[q];
      // cycle (i1..ip, j_last) with j1..j_{q-1} held fixed:
      // sum over slots a of A_{(tuple minus a), (fixed..., tuple[a])} = 0
      fixed.assign(q - 1, 0);
      const std::int64_t fixed_count = multiset_count(n, q - 1);
      const std::int64_t tuple_count = multiset_count(n, p + 1);
      for (std::int64_t fr = 0; fr < fixed_count; ++fr) {
        multiset_unrank(q - 1, fr, fixed);
        for (std::int64_t tr = 0; tr < tuple_count; ++tr) {
          multiset_unrank(p + 1, tr, tuple);
          Rational acc(0);
          for (int slot = 0; slot <= p; ++slot) {
            joint.clear();
            for (int b = 0; b <= p; ++b)
              if (b != slot) joint.push_back(tuple[b]);
            joint.insert(joint.end(), fixed.begin(), fixed.end());
            joint.push_back(tuple[slot]);
            acc += a.get(joint);
          }
          ++res.checked;
          if (acc != 0) ++res.violations;
        }
      }
      res.holds = res.violations == 0;
      if (!res.holds) report.all_hold = false;
      conditions.push_back(res);
    }
    report.per_element.push_back(std::move(conditions));
  }
  return report;
}

}  // namespace kyt
