#pragma once

// Explicit bases for the spaces of Killing-Yano and Killing tensors on
// projectively flat structures, their dimension counts, the exact flat-space
// null-space oracles, and residual checks for the defining equations.

#include <span>
#include <vector>

#include "kyt/geometry.hpp"
#include "kyt/linalg.hpp"
#include "kyt/tensor.hpp"

namespace kyt {

// (n+1)! / ((p+1)! (n-p)!) for 1 <= p <= n-1.
std::int64_t ky_dim(int n, int p);
// (n+p-1)! (n+p)! / ((n-1)! n! p! (p+1)!) for p >= 1.
std::int64_t kt_dim(int n, int p);

// Exact null-space dimensions of the flat-space systems: the symmetrized-pair
// equation on antisymmetric degree-1 polynomials, and the cyclic-sum equation
// on symmetric polynomials of degree <= p.  Independent cross-checks for the
// closed forms above.
std::int64_t ky_flat_system_nullity(int n, int p);
std::int64_t kt_flat_system_nullity(int n, int p);

struct KYElement {
  TensorField field;
  char family = 'B';          // 'A': linear part, 'B': constant part
  std::vector<int> indices;   // canonical skew index carrying the unit constant
  CoeffTensor linear;         // rank p+1, antisymmetric ('A' family)
  CoeffTensor constant;       // rank p, antisymmetric ('B' family)
};

struct KYBasis {
  int n = 0, degree = 0;
  ScalarField gauge;
  std::vector<KYElement> elements;
};

struct KTElement {
  TensorField field;
  int ordinal = 0;                   // position in the null-space enumeration
  std::vector<CoeffTensor> coeff;    // A^{(q)}, bisymmetric (p, q), q = 0..p
};

struct KTBasis {
  int n = 0, degree = 0;
  ScalarField gauge;
  std::vector<KTElement> elements;
};

// One element per canonical skew constant: e^{(p+1) gauge} (A x) and
// e^{(p+1) gauge} B.
KYBasis build_ky_basis(int n, int p, const ScalarField& gauge);

// Null-space route: exact solutions of the flat cyclic-sum system on the
// polynomial ansatz, scaled by e^{2 p gauge}.
KTBasis build_kt_basis(int n, int p, const ScalarField& gauge);

// max over points and index tuples of |grad_{i0} w_{i1..} + grad_{i1} w_{i0..}|.
double ky_residual(const TensorField& omega, const AffineConnection& gamma,
                   std::span<const std::vector<double>> points);

// max over points of |cyclic sum of grad phi|.
double kt_residual(const TensorField& phi, const AffineConnection& gamma,
                   std::span<const std::vector<double>> points);

// Volume dual of concircular fields; a Killing-Yano tensor of degree n-p when
// the inputs pass the concircular test.
TensorField ky_from_concircular(std::span<const VectorField> fields,
                                const EquiaffineStructure& s);

// sym of the tensor product of degree-1 Killing-Yano fields.
TensorField kt_from_ky1(std::span<const TensorField> one_forms);

// Gauge transport between projectively related connections: a tensor Killing
// for G = Gbar + dg (x) id + id (x) dg maps to one Killing for Gbar.
TensorField pullback_ky(const TensorField& omega, int p, const ScalarField& gauge);
TensorField pullback_kt(const TensorField& phi, int p, const ScalarField& gauge);

struct CoefficientConditionResult {
  int q = 0;              // coefficient block degree under test
  bool holds = false;
  std::int64_t checked = 0;
  std::int64_t violations = 0;
};

struct CoefficientSymmetryReport {
  // per element, one entry per q = 1..p
  std::vector<std::vector<CoefficientConditionResult>> per_element;
  bool all_hold = true;
};

// A-posteriori check of the cyclic coefficient conditions, read as: the sum
// over ways of moving one of (i1..ip, j_last) into the trailing symmetric
// block vanishes, the leading j's held fixed.
CoefficientSymmetryReport check_coefficient_symmetries(const KTBasis& basis);

}  // namespace kyt
