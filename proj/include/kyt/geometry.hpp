#pragma once

// Affine connections, curvature and its projective decomposition, covariant
// derivatives, Levi-Civita connections, structure classification, and the
// concircular/solenoidal vector-field machinery.

#include <span>
#include <vector>

#include "kyt/sampling.hpp"
#include "kyt/tensor.hpp"

namespace kyt {

// Torsion-free connection: n^3 scalar fields with the lower pair symmetric by
// construction (only i <= j is stored).
class AffineConnection {
 public:
  AffineConnection() = default;
  explicit AffineConnection(int n);

  int dimension() const { return n_; }
  const ScalarField& christoffel(int k, int i, int j) const;
  void set_christoffel(int k, int i, int j, ScalarField value);

  // All symbols at one point, laid out [k][i][j] with size n^3.
  std::vector<double> eval(EvalContext& ctx) const;

 private:
  std::size_t slot(int k, int i, int j) const;
  int n_ = 0;
  std::vector<ScalarField> gamma_;  // k-major over canonical i <= j
};

struct EquiaffineStructure {
  AffineConnection connection;
  ScalarField volume;  // eta > 0 on the domain
};

// R^l_{kij} = d_i G^l_{jk} - d_j G^l_{ik} + G^l_{im} G^m_{jk} - G^l_{jm} G^m_{ik},
// Ric_{kj} = R^l_{klj}, and the trace-free projective remainder W.
struct CurvatureData {
  int n = 0;
  std::vector<ScalarField> riemann;  // [l][k][i][j], filled by curvature()
  TensorField ricci;                 // empty until compute_ricci()
  std::vector<ScalarField> weyl;     // empty until compute_weyl_projective()

  const ScalarField& r(int l, int k, int i, int j) const {
    return riemann[((static_cast<std::size_t>(l - 1) * n + (k - 1)) * n + (i - 1)) * n + (j - 1)];
  }
  const ScalarField& w(int l, int k, int i, int j) const {
    return weyl[((static_cast<std::size_t>(l - 1) * n + (k - 1)) * n + (i - 1)) * n + (j - 1)];
  }
};

CurvatureData curvature(const AffineConnection& gamma);
void compute_ricci(CurvatureData& cd);
void compute_weyl_projective(CurvatureData& cd);

// (grad T)_{i0, i1..ip} = d_{i0} T_{i1..ip} - sum_a T_{..k at a..} G^k_{i_a i0};
// the derivative index comes first.
TensorField covariant_derivative(const TensorField& t, const AffineConnection& gamma);

// Symbolic determinant and adjugate-based inverse of a rank-2 field; n <= 4.
ScalarField field_determinant(const TensorField& metric);
TensorField inverse_metric(const TensorField& metric);

AffineConnection levi_civita(const TensorField& metric);

struct ClassifyReport {
  bool equiaffine = false;
  bool ricci_flat = false;
  bool equiprojective = false;
  double volume_residual = 0;          // max |d_i ln eta - G^k_{ki}|
  double ricci_asymmetry = 0;          // max |Ric_ij - Ric_ji|
  double ricci_norm = 0;               // max |Ric|
  double weyl_norm = 0;                // max |W|
  int points_used = 0;
};

ClassifyReport classify(const EquiaffineStructure& s,
                        std::span<const std::vector<double>> points, double tol);

// (A_X)^k_j = -grad_j X^k for a torsion-free connection; returned as a rank-2
// field indexed [k][j].
TensorField a_operator(const VectorField& x, const AffineConnection& gamma);

// max over points of the componentwise norm of A_X + (div X / n) id.
double concircular_residual(const VectorField& x, const AffineConnection& gamma,
                            std::span<const std::vector<double>> points);

// div X relative to the volume form: sum_i d_i X^i + X^i d_i ln eta.
ScalarField divergence(const VectorField& x, const ScalarField& volume);

// G^k_{ij} = g_i d^k_j + g_j d^k_i from a gauge scalar, with eta = e^{(n+1) g}.
EquiaffineStructure projective_structure_from_gauge(const ScalarField& gauge);

}  // namespace kyt
