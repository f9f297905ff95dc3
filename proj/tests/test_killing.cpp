#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "kyt/killing.hpp"

using namespace kyt;
using kyt_test::random_poly_gauge;

namespace {

// Membership of a candidate field in the span of basis fields, judged by a
// least-squares fit over sample points.
double span_fit_residual(const TensorField& candidate,
                         const std::vector<const TensorField*>& basis,
                         std::span<const std::vector<double>> points) {
  const std::size_t comps = candidate.component_count();
  Eigen::MatrixXd a(points.size() * comps, basis.size());
  Eigen::VectorXd b(points.size() * comps);
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    EvalContext ctx(points[pi]);
    NumericTensor cv = candidate.eval(ctx);
    std::vector<NumericTensor> bv;
    for (const auto* f : basis) bv.push_back(f->eval(ctx));
    for (std::size_t ci = 0; ci < comps; ++ci) {
      b(pi * comps + ci) = cv.data()[ci];
      for (std::size_t k = 0; k < basis.size(); ++k)
        a(pi * comps + ci, k) = bv[k].data()[ci];
    }
  }
  auto fit = lstsq(a, b);
  return fit.residual_norm / std::max(1.0, b.norm());
}

}  // namespace

TEST_CASE("Killing-Yano dimension count") {
  CHECK(ky_dim(4, 2) == 10);
  CHECK(ky_dim(2, 1) == 3);
  CHECK_THROWS_AS(ky_dim(3, 3), std::invalid_argument);
  CHECK_THROWS_AS(ky_dim(3, 0), std::invalid_argument);

  // closed form equals the two-binomial split for all desk-scale (n, p)
  for (int n = 2; n <= 8; ++n)
    for (int p = 1; p <= n - 1; ++p)
      CHECK(ky_dim(n, p) == binomial(n, p + 1) + binomial(n, p));
}

TEST_CASE("Killing tensor dimension count") {
  CHECK(kt_dim(2, 1) == 3);   // n(n+1)/2
  CHECK(kt_dim(3, 1) == 6);
  CHECK(kt_dim(2, 2) == 6);
  CHECK(kt_dim(4, 1) == 10);
  CHECK_THROWS_AS(kt_dim(3, 0), std::invalid_argument);
}

TEST_CASE("flat-system null spaces match the closed forms") {
  for (int n = 2; n <= 4; ++n)
    for (int p = 1; p <= n - 1; ++p)
      CHECK(ky_flat_system_nullity(n, p) == ky_dim(n, p));

  for (int n = 2; n <= 3; ++n)
    for (int p = 1; p <= 2; ++p)
      CHECK(kt_flat_system_nullity(n, p) == kt_dim(n, p));
}

TEST_CASE("flat KY basis in the plane") {
  ScalarField zero = ScalarField::constant(2, rat(0));
  KYBasis basis = build_ky_basis(2, 1, zero);
  REQUIRE(basis.elements.size() == 3u);

  std::vector<double> pt{0.7, -0.3};
  // one 'A' element: (-x2, x1)
  const auto& a = basis.elements[0];
  CHECK(a.family == 'A');
  CHECK(a.field.at(std::vector<int>{1}).eval(pt) == doctest::Approx(0.3));
  CHECK(a.field.at(std::vector<int>{2}).eval(pt) == doctest::Approx(0.7));
  // two 'B' elements: dx1 and dx2
  CHECK(basis.elements[1].family == 'B');
  CHECK(basis.elements[1].field.at(std::vector<int>{1}).eval(pt) == doctest::Approx(1.0));
  CHECK(basis.elements[1].field.at(std::vector<int>{2}).eval(pt) == doctest::Approx(0.0));
  CHECK(basis.elements[2].field.at(std::vector<int>{2}).eval(pt) == doctest::Approx(1.0));
}

TEST_CASE("KY element count matches the dimension for n <= 5") {
  ScalarField zero3 = ScalarField::constant(3, rat(0));
  for (int n = 2; n <= 5; ++n) {
    ScalarField zero = ScalarField::constant(n, rat(0));
    for (int p = 1; p <= n - 1; ++p)
      CHECK(build_ky_basis(n, p, zero).elements.size() ==
            static_cast<std::size_t>(ky_dim(n, p)));
  }
  (void)zero3;
}

TEST_CASE("flat KY elements satisfy the symmetrized-pair identity exactly") {
  const int n = 4, p = 2;
  ScalarField zero = ScalarField::constant(n, rat(0));
  KYBasis basis = build_ky_basis(n, p, zero);
  for (const auto& el : basis.elements) {
    // derivative coefficient of component (i, rest) wrt x^j is linear.get(j,i,rest)
    std::vector<int> rest(p - 1);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        for (int r = 1; r <= n; ++r) {
          rest[0] = r;
          Rational lhs = el.linear.get(std::vector<int>{j, i, r}) +
                         el.linear.get(std::vector<int>{i, j, r});
          CHECK(lhs == 0);
        }
  }
}

TEST_CASE("flat KT basis in the plane spans the classical three") {
  ScalarField zero = ScalarField::constant(2, rat(0));
  KTBasis basis = build_kt_basis(2, 1, zero);
  REQUIRE(basis.elements.size() == 3u);

  auto pts = sample_points(DomainBox::cube(2, 1.0), 12, 3);
  std::vector<const TensorField*> fields;
  for (const auto& el : basis.elements) fields.push_back(&el.field);

  // dx1, dx2, and the rotation x2 dx1 - x1 dx2 must all lie in the span
  TensorField dx1(2, 1), dx2(2, 1), rot(2, 1);
  dx1.at(std::vector<int>{1}) = ScalarField::constant(2, rat(1));
  dx2.at(std::vector<int>{2}) = ScalarField::constant(2, rat(1));
  rot.at(std::vector<int>{1}) = ScalarField::parse("x2", 2);
  rot.at(std::vector<int>{2}) = ScalarField::parse("-x1", 2);
  CHECK(span_fit_residual(dx1, fields, pts) <= 1e-10);
  CHECK(span_fit_residual(dx2, fields, pts) <= 1e-10);
  CHECK(span_fit_residual(rot, fields, pts) <= 1e-10);

  // a non-Killing field must not fit
  TensorField bad(2, 1);
  bad.at(std::vector<int>{1}) = ScalarField::parse("x1", 2);
  CHECK(span_fit_residual(bad, fields, pts) > 1e-3);
}

TEST_CASE("flat KT basis sizes") {
  ScalarField zero3 = ScalarField::constant(3, rat(0));
  CHECK(build_kt_basis(3, 1, zero3).elements.size() == 6u);
  ScalarField zero2 = ScalarField::constant(2, rat(0));
  CHECK(build_kt_basis(2, 2, zero2).elements.size() == 6u);
}

TEST_CASE("flat KT elements satisfy the cyclic identity") {
  ScalarField zero = ScalarField::constant(3, rat(0));
  KTBasis basis = build_kt_basis(3, 2, zero);
  AffineConnection flat(3);
  auto pts = sample_points(DomainBox::cube(3, 1.0), 16, 5);
  for (const auto& el : basis.elements)
    CHECK(kt_residual(el.field, flat, pts) <= 1e-13);
}

TEST_CASE("KY residual: frozen flat examples") {
  AffineConnection flat(2);
  auto pts = sample_points(DomainBox::cube(2, 1.0), 8, 7);

  TensorField bad(2, 1);
  bad.at(std::vector<int>{1}) = ScalarField::parse("x1", 2);
  CHECK(ky_residual(bad, flat, pts) == doctest::Approx(2.0));

  TensorField zero(2, 1);
  CHECK(ky_residual(zero, flat, pts) == 0.0);
}

TEST_CASE("gauge-weighted KY and KT bases satisfy their equations on the matching structure") {
  std::mt19937_64 rng(101);
  const int n = 3;
  for (int rep = 0; rep < 2; ++rep) {
    ScalarField gauge = random_poly_gauge(rng, n);
    EquiaffineStructure s = projective_structure_from_gauge(gauge);
    auto pts = sample_points(DomainBox::cube(n, 0.8), 64, 13 + rep);

    for (int p = 1; p <= 2; ++p) {
      KYBasis ky = build_ky_basis(n, p, gauge);
      for (const auto& el : ky.elements)
        CHECK(ky_residual(el.field, s.connection, pts) < 1e-9);

      KTBasis kt = build_kt_basis(n, p, gauge);
      CHECK(kt.elements.size() == static_cast<std::size_t>(kt_dim(n, p)));
      for (const auto& el : kt.elements)
        CHECK(kt_residual(el.field, s.connection, pts) < 1e-9);
    }
  }
}

TEST_CASE("volume dual of concircular fields is Killing-Yano") {
  std::mt19937_64 rng(103);
  const int n = 3;
  ScalarField gauge = random_poly_gauge(rng, n);
  EquiaffineStructure s = projective_structure_from_gauge(gauge);
  auto pts = sample_points(DomainBox::cube(n, 0.8), 32, 17);

  ScalarField weight = exp(-gauge);
  auto concircular = [&](std::vector<Rational> a, Rational c) {
    VectorField x(n);
    for (int i = 1; i <= n; ++i)
      x.at(i) = weight * (ScalarField::constant(n, a[i - 1]) +
                          c * ScalarField::coordinate(n, i));
    return x;
  };
  VectorField x1 = concircular({rat(1), rat(0), rat(1, 2)}, rat(1));
  VectorField x2 = concircular({rat(0), rat(1), rat(-1, 3)}, rat(-2));
  REQUIRE(concircular_residual(x1, s.connection, pts) <= 1e-10);
  REQUIRE(concircular_residual(x2, s.connection, pts) <= 1e-10);

  std::vector<VectorField> singles{x1};
  TensorField w1 = ky_from_concircular(singles, s);  // degree n-1 = 2
  CHECK(ky_residual(w1, s.connection, pts) <= 1e-9);

  std::vector<VectorField> pairs{x1, x2};
  TensorField w2 = ky_from_concircular(pairs, s);    // degree n-2 = 1
  CHECK(ky_residual(w2, s.connection, pts) <= 1e-9);
}

TEST_CASE("sym products of degree-1 KY fields are Killing tensors in the KT span") {
  std::mt19937_64 rng(107);
  const int n = 3, p = 2;
  ScalarField gauge = random_poly_gauge(rng, n);
  EquiaffineStructure s = projective_structure_from_gauge(gauge);
  auto pts = sample_points(DomainBox::cube(n, 0.8), 48, 19);

  KYBasis ones = build_ky_basis(n, 1, gauge);
  KTBasis kt = build_kt_basis(n, p, gauge);
  std::vector<const TensorField*> span;
  for (const auto& el : kt.elements) span.push_back(&el.field);

  int tried = 0;
  for (std::size_t i = 0; i < ones.elements.size() && tried < 4; i += 3, ++tried) {
    std::size_t j = (i + 1) % ones.elements.size();
    std::vector<TensorField> forms{ones.elements[i].field, ones.elements[j].field};
    TensorField phi = kt_from_ky1(forms);
    CHECK(kt_residual(phi, s.connection, pts) <= 1e-9);
    CHECK(span_fit_residual(phi, span, pts) <= 1e-8);
  }
}

TEST_CASE("pullback with zero gauge is the identity") {
  ScalarField zero = ScalarField::constant(2, rat(0));
  TensorField t(2, 1);
  t.at(std::vector<int>{1}) = ScalarField::parse("x2^2", 2);
  TensorField back = pullback_ky(t, 1, zero);
  std::vector<double> pt{0.4, 0.9};
  CHECK(back.at(std::vector<int>{1}).eval(pt) == doctest::Approx(0.81));
  TensorField back2 = pullback_kt(t, 1, zero);
  CHECK(back2.at(std::vector<int>{1}).eval(pt) == doctest::Approx(0.81));
}

TEST_CASE("gauge transport round trip preserves the Killing equations") {
  std::mt19937_64 rng(109);
  const int n = 3;
  ScalarField gauge = random_poly_gauge(rng, n);
  EquiaffineStructure s = projective_structure_from_gauge(gauge);
  AffineConnection flat(n);
  auto pts = sample_points(DomainBox::cube(n, 0.8), 32, 23);

  // flat KY element pushed to the curved structure via the minus-gauge map
  ScalarField zero = ScalarField::constant(n, rat(0));
  KYBasis flat_basis = build_ky_basis(n, 2, zero);
  for (const auto& el : flat_basis.elements) {
    TensorField pushed = pullback_ky(el.field, 2, -gauge);
    CHECK(ky_residual(pushed, s.connection, pts) < 1e-9);
    // and back
    TensorField back = pullback_ky(pushed, 2, gauge);
    CHECK(ky_residual(back, flat, pts) < 1e-10);
    // composition is the identity pointwise
    for (const auto& pt : pts) {
      NumericTensor a = el.field.eval(pt), b = back.eval(pt);
      for (std::size_t k = 0; k < a.data().size(); ++k)
        CHECK(a.data()[k] == doctest::Approx(b.data()[k]).epsilon(1e-12));
    }
    break;  // one element suffices here; the acceptance suite sweeps more
  }

  KTBasis flat_kt = build_kt_basis(n, 2, zero);
  TensorField pushed = pullback_kt(flat_kt.elements[0].field, 2, -gauge);
  CHECK(kt_residual(pushed, s.connection, pts) < 1e-9);
}

TEST_CASE("coefficient symmetry conditions hold for null-space elements") {
  ScalarField zero2 = ScalarField::constant(2, rat(0));
  auto rep2 = check_coefficient_symmetries(build_kt_basis(2, 2, zero2));
  CHECK(rep2.all_hold);

  ScalarField zero3 = ScalarField::constant(3, rat(0));
  auto rep3 = check_coefficient_symmetries(build_kt_basis(3, 2, zero3));
  CHECK(rep3.all_hold);
  for (const auto& el : rep3.per_element)
    for (const auto& cond : el) CHECK(cond.checked > 0);
}

TEST_CASE("a perturbed coefficient violates the conditions") {
  ScalarField zero = ScalarField::constant(2, rat(0));
  KTBasis basis = build_kt_basis(2, 1, zero);
  // corrupt one linear coefficient of the first element so that the q=1
  // condition must fail somewhere in the basis
  KTBasis corrupt = basis;
  bool changed = false;
  for (auto& el : corrupt.elements) {
    CoeffTensor& a1 = el.coeff[1];
    for (int i = 1; i <= 2 && !changed; ++i)
      for (int j = 1; j <= 2 && !changed; ++j) {
        std::vector<int> idx{i, j};
        if (a1.get(idx) != 0) {
          a1.set(idx, a1.get(idx) * rat(11, 10));
          changed = true;
        }
      }
    if (changed) break;
  }
  REQUIRE(changed);
  CHECK(!check_coefficient_symmetries(corrupt).all_hold);
}
