#pragma once

// Constant-curvature metric models in a projective chart, the conformal
// Killing operator on forms, closed conformal Killing tensors, and the
// splitting of a conformal Killing form into its Killing-Yano and closed
// parts.

#include <optional>

#include "kyt/killing.hpp"

namespace kyt {

struct ConstantCurvatureModel {
  int n = 0;
  double curvature = 0;        // C, nonzero
  TensorField metric;          // g_ij in the projective chart
  TensorField inverse;         // g^ij, symbolic adjugate route
  ScalarField det_metric;
  ScalarField gauge;           // ln|det g| / (2(n+1))
  AffineConnection connection; // Levi-Civita of g
  DomainBox box;
};

// g_ij = ((1 + C|x|^2) d_ij - C x_i x_j) / (1 + C|x|^2)^2 on a box kept away
// from the 1 + C|x|^2 = 0 locus.
ConstantCurvatureModel beltrami_model(int n, double curvature);

// Same bookkeeping for a user-supplied metric claimed to have constant
// curvature; nothing is trusted, validate_model() is the check.
ConstantCurvatureModel model_from_metric(double curvature, TensorField metric, DomainBox box);

struct ModelValidation {
  double weyl_norm = 0;
  double sectional_error = 0;           // max |K(plane) - C| over coordinate planes
  double trace_christoffel_residual = 0; // Levi-Civita vs pure-trace form
  double inverse_residual = 0;          // |g g^{-1} - id|
};

ModelValidation validate_model(const ConstantCurvatureModel& model,
                               std::span<const std::vector<double>> points);

// Sectional curvature of the span of u, v at a point.
double sectional_curvature(const ConstantCurvatureModel& model,
                           std::span<const double> point, std::span<const double> u,
                           std::span<const double> v);

// The n(n+1)/2 Killing covectors e^{2 gauge}(A x + B), as a degree-1 KT basis.
KTBasis killing_vector_basis(const ConstantCurvatureModel& model);

// (d theta)_{i0..ip} = sum_a (-1)^a d_{i_a} theta_{..hat a..}; input a p-form.
TensorField exterior_derivative(const TensorField& theta);

// (d* theta)_{i2..ip} = -g^{jk} grad_j theta_{k i2..ip}.
TensorField codifferential(const TensorField& theta, const ConstantCurvatureModel& model);

// (g ^ alpha)_{i0 i1..ip} = sum_{a=1..p} (-1)^{a+1} g_{i0 i_a} alpha_{i1..hat a..ip}
// with p = rank(alpha) + 1.
TensorField g_wedge(const TensorField& alpha, const ConstantCurvatureModel& model);

// Kernel test for D = grad - (p+1)^{-1} d - (n-p+1)^{-1} g ^ d*; the sign of
// the codifferential above makes the last term enter with a plus here, the
// combination anchored by D annihilating both basis families.
double conformal_residual(const TensorField& theta, const ConstantCurvatureModel& model,
                          std::span<const std::vector<double>> points);
TensorField conformal_operator(const TensorField& theta, const ConstantCurvatureModel& model);

// theta_{i1..ip} = -(1/(pC)) grad_{i1} omega_{i2..ip} for a degree p-1
// Killing-Yano input; antisymmetric and closed.
TensorField closed_ckt_from_ky(const TensorField& omega, const ConstantCurvatureModel& model);

struct CKTElement {
  TensorField field;
  bool from_ky = false;       // true: Killing-Yano family, false: closed family
  char family = 'B';          // canonical constant behind the source element
  std::vector<int> indices;
};

// Union of the degree-p KY basis and the closed tensors built from the
// degree p-1 KY basis; 2 <= p <= n-1.
std::vector<CKTElement> build_ckt_basis(const ConstantCurvatureModel& model, int p);

struct DecomposeResult {
  Eigen::VectorXd ky_coefficients;
  Eigen::VectorXd closed_coefficients;
  double fit_residual = 0;      // relative to the candidate's norm
  bool is_conformal_killing = false;
  TensorField ky_part;
  TensorField closed_part;
};

DecomposeResult decompose(const TensorField& theta, const ConstantCurvatureModel& model,
                          int p, std::span<const std::vector<double>> points, double tol);

}  // namespace kyt
