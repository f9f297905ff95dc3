// Constant-curvature models and the conformal Killing calculus on them.

#include "kyt/riemannian.hpp"

#include <cmath>
#include <stdexcept>

namespace kyt {

namespace {

Rational exact_rational(double v) {
  Rational r;
  mpq_set_d(r.get_mpq_t(), v);
  return r;
}

void finish_model(ConstantCurvatureModel& m) {
  m.inverse = inverse_metric(m.metric);
  m.det_metric = field_determinant(m.metric);
  m.gauge = (Rational(1) / Rational(2 * (m.n + 1))) * ln(m.det_metric);
  m.connection = levi_civita(m.metric);
}

}  // namespace

ConstantCurvatureModel beltrami_model(int n, double curvature) {
  if (curvature == 0) throw std::invalid_argument("curvature must be nonzero; use the flat equiaffine path");
  if (n < 2 || n > 4) throw std::invalid_argument("beltrami_model supports 2 <= n <= 4");

  ConstantCurvatureModel m;
  m.n = n;
  m.curvature = curvature;

  const Rational c = exact_rational(curvature);
  ScalarField s = ScalarField::constant(n, Rational(1));
  for (int i = 1; i <= n; ++i) {
    ScalarField xi = ScalarField::coordinate(n, i);
    s = s + c * (xi * xi);
  }
  m.metric = TensorField(n, 2);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      ScalarField num = ScalarField::constant(n, Rational(0));
      if (i == j) num = s;
      num = num - c * (ScalarField::coordinate(n, i) * ScalarField::coordinate(n, j));
      m.metric.at(std::vector<int>{i, j}) = num / (s * s);
    }

  double half = curvature > 0 ? 0.8 : 0.8 / std::sqrt(n * std::abs(curvature));
  m.box = DomainBox::cube(n, half);
  finish_model(m);
  return m;
}

ConstantCurvatureModel model_from_metric(double curvature, TensorField metric, DomainBox box) {
  if (curvature == 0) throw std::invalid_argument("curvature must be nonzero");
  ConstantCurvatureModel m;
  m.n = metric.dimension();
  m.curvature = curvature;
  m.metric = std::move(metric);
  m.box = std::move(box);
  finish_model(m);
  return m;
}

double sectional_curvature(const ConstantCurvatureModel& model,
                           std::span<const double> point, std::span<const double> u,
                           std::span<const double> v) {
  const int n = model.n;
  EvalContext ctx(point);
  NumericTensor g = model.metric.eval(ctx);
  CurvatureData cd = curvature(model.connection);

  double num = 0;
  for (int l = 1; l <= n; ++l)
    for (int k = 1; k <= n; ++k)
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
          double r = 0;
          for (int mm = 1; mm <= n; ++mm)
            r += g.at(std::vector<int>{l, mm}) * cd.r(mm, k, i, j).eval(ctx);
          num += r * u[l - 1] * v[k - 1] * u[i - 1] * v[j - 1];
        }

  auto inner = [&](std::span<const double> a, std::span<const double> b) {
    double acc = 0;
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        acc += g.at(std::vector<int>{i, j}) * a[i - 1] * b[j - 1];
    return acc;
  };
  double den = inner(u, u) * inner(v, v) - inner(u, v) * inner(u, v);
  return num / den;
}

ModelValidation validate_model(const ConstantCurvatureModel& model,
                               std::span<const std::vector<double>> points) {
  const int n = model.n;
  ModelValidation val;

  std::vector<ScalarField> grad;
  for (int i = 1; i <= n; ++i) grad.push_back(model.gauge.diff(i));

  CurvatureData cd = curvature(model.connection);
  compute_weyl_projective(cd);

  for (const auto& pt : points) {
    EvalContext ctx(pt);
    for (const auto& w : cd.weyl)
      val.weyl_norm = std::max(val.weyl_norm, std::abs(w.eval(ctx)));

    NumericTensor g = model.metric.eval(ctx);
    NumericTensor gi = model.inverse.eval(ctx);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        double acc = 0;
        for (int k = 1; k <= n; ++k)
          acc += g.at(std::vector<int>{i, k}) * gi.at(std::vector<int>{k, j});
        val.inverse_residual =
            std::max(val.inverse_residual, std::abs(acc - (i == j ? 1.0 : 0.0)));
      }

    std::vector<double> dg(n);
    for (int i = 1; i <= n; ++i) dg[i - 1] = grad[i - 1].eval(ctx);
    for (int k = 1; k <= n; ++k)
      for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j) {
          double pure = (k == j ? dg[i - 1] : 0.0) + (k == i ? dg[j - 1] : 0.0);
          double got = model.connection.christoffel(k, i, j).eval(ctx);
          val.trace_christoffel_residual =
              std::max(val.trace_christoffel_residual, std::abs(got - pure));
        }

    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j) {
        std::vector<double> u(n, 0.0), v(n, 0.0);
        u[i - 1] = 1.0;
        v[j - 1] = 1.0;
        double k = sectional_curvature(model, pt, u, v);
        val.sectional_error = std::max(val.sectional_error, std::abs(k - model.curvature));
      }
  }
  return val;
}

KTBasis killing_vector_basis(const ConstantCurvatureModel& model) {
  const int n = model.n;
  KYBasis ky = build_ky_basis(n, 1, model.gauge);
  KTBasis out;
  out.n = n;
  out.degree = 1;
  out.gauge = model.gauge;
  int ordinal = 0;
  for (const auto& el : ky.elements) {
    KTElement kt;
    kt.field = el.field;
    kt.ordinal = ordinal++;
    CoeffTensor a0 = CoeffTensor::bisymmetric(n, 1, 0);
    CoeffTensor a1 = CoeffTensor::bisymmetric(n, 1, 1);
    for (int i = 1; i <= n; ++i) {
      if (el.family == 'B') a0.set(std::vector<int>{i}, el.constant.get(std::vector<int>{i}));
      for (int k = 1; k <= n; ++k)
        if (el.family == 'A')
          a1.set(std::vector<int>{i, k}, el.linear.get(std::vector<int>{k, i}));
    }
    kt.coeff.push_back(std::move(a0));
    kt.coeff.push_back(std::move(a1));
    out.elements.push_back(std::move(kt));
  }
  return out;
}

TensorField exterior_derivative(const TensorField& theta) {
  const int n = theta.dimension();
  const int p = theta.rank();
  TensorField out(n, p + 1);
  std::vector<int> idx(p + 1, 1), sub(p);
  do {
    ScalarField acc = ScalarField::constant(n, Rational(0));
    for (int a = 0; a <= p; ++a) {
      int w = 0;
      for (int b = 0; b <= p; ++b)
        if (b != a) sub[w++] = idx[b];
      ScalarField term = theta.at(sub).diff(idx[a]);
      acc = (a % 2 == 0) ? acc + term : acc - term;
    }
    out.at(idx) = acc;
  } while (next_index(idx, n));
  return out;
}

namespace {

TensorField codifferential_of_grad(const TensorField& grad,
                                   const ConstantCurvatureModel& model) {
  const int n = grad.dimension();
  const int p = grad.rank() - 1;
  TensorField out(n, p - 1);
  std::vector<int> idx(p - 1, 1), full(p + 1);
  do {
    ScalarField acc = ScalarField::constant(n, Rational(0));
    std::copy(idx.begin(), idx.end(), full.begin() + 2);
    for (int j = 1; j <= n; ++j)
      for (int k = 1; k <= n; ++k) {
        full[0] = j;
        full[1] = k;
        acc = acc + model.inverse.at(std::vector<int>{j, k}) * grad.at(full);
      }
    out.at(idx) = -acc;
  } while (next_index(idx, n));
  return out;
}

}  // namespace

TensorField codifferential(const TensorField& theta, const ConstantCurvatureModel& model) {
  if (theta.rank() < 1) throw std::invalid_argument("codifferential needs rank >= 1");
  return codifferential_of_grad(covariant_derivative(theta, model.connection), model);
}

TensorField g_wedge(const TensorField& alpha, const ConstantCurvatureModel& model) {
  const int n = alpha.dimension();
  const int p = alpha.rank() + 1;
  TensorField out(n, p + 1);
  std::vector<int> idx(p + 1, 1), sub(p - 1);
  do {
    ScalarField acc = ScalarField::constant(n, Rational(0));
    for (int a = 1; a <= p; ++a) {
      int w = 0;
      for (int b = 1; b <= p; ++b)
        if (b != a) sub[w++] = idx[b];
      ScalarField term = model.metric.at(std::vector<int>{idx[0], idx[a]}) * alpha.at(sub);
      acc = (a % 2 == 1) ? acc + term : acc - term;
    }
    out.at(idx) = acc;
  } while (next_index(idx, n));
  return out;
}

TensorField conformal_operator(const TensorField& theta, const ConstantCurvatureModel& model) {
  const int p = theta.rank();
  const int n = theta.dimension();
  TensorField grad = covariant_derivative(theta, model.connection);
  TensorField d = exterior_derivative(theta);
  TensorField wedge = g_wedge(codifferential_of_grad(grad, model), model);
  // The codifferential carries the -divergence sign, so its term flips to +.
  return grad - (Rational(1) / Rational(p + 1)) * d +
         (Rational(1) / Rational(n - p + 1)) * wedge;
}

double conformal_residual(const TensorField& theta, const ConstantCurvatureModel& model,
                          std::span<const std::vector<double>> points) {
  TensorField d = conformal_operator(theta, model);
  double worst = 0;
  for (const auto& pt : points) worst = std::max(worst, max_abs(d.eval(pt)));
  return worst;
}

TensorField closed_ckt_from_ky(const TensorField& omega, const ConstantCurvatureModel& model) {
  const int p = omega.rank() + 1;
  TensorField grad = covariant_derivative(omega, model.connection);
  Rational scale = Rational(-1) / (Rational(p) * [&] {
    Rational c;
    mpq_set_d(c.get_mpq_t(), model.curvature);
    return c;
  }());
  return scale * grad;
}

std::vector<CKTElement> build_ckt_basis(const ConstantCurvatureModel& model, int p) {
  const int n = model.n;
  if (p < 2 || p > n - 1)
    throw std::invalid_argument("build_ckt_basis needs 2 <= p <= n-1");

  std::vector<CKTElement> out;
  KYBasis ky = build_ky_basis(n, p, model.gauge);
  for (auto& el : ky.elements) {
    CKTElement e;
    e.field = std::move(el.field);
    e.from_ky = true;
    e.family = el.family;
    e.indices = el.indices;
    out.push_back(std::move(e));
  }
  KYBasis lower = build_ky_basis(n, p - 1, model.gauge);
  for (auto& el : lower.elements) {
    CKTElement e;
    e.field = closed_ckt_from_ky(el.field, model);
    e.from_ky = false;
    e.family = el.family;
    e.indices = el.indices;
    out.push_back(std::move(e));
  }
  return out;
}

DecomposeResult decompose(const TensorField& theta, const ConstantCurvatureModel& model,
                          int p, std::span<const std::vector<double>> points, double tol) {
  auto basis = build_ckt_basis(model, p);
  const std::size_t comps = theta.component_count();

  Eigen::MatrixXd a(points.size() * comps, basis.size());
  Eigen::VectorXd b(points.size() * comps);
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    EvalContext ctx(points[pi]);
    NumericTensor tv = theta.eval(ctx);
    for (std::size_t k = 0; k < basis.size(); ++k) {
      NumericTensor bv = basis[k].field.eval(ctx);
      for (std::size_t ci = 0; ci < comps; ++ci)
        a(pi * comps + ci, k) = bv.data()[ci];
    }
    for (std::size_t ci = 0; ci < comps; ++ci) b(pi * comps + ci) = tv.data()[ci];
  }

  auto fit = lstsq(a, b);

  DecomposeResult res;
  res.fit_residual = fit.residual_norm / std::max(1.0, b.norm());
  res.is_conformal_killing = res.fit_residual <= tol;
  res.ky_part = TensorField(model.n, p);
  res.closed_part = TensorField(model.n, p);
  std::vector<double> kc, cc;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    Rational w;
    mpq_set_d(w.get_mpq_t(), fit.coefficients(k));
    if (basis[k].from_ky) {
      kc.push_back(fit.coefficients(k));
      res.ky_part = res.ky_part + w * basis[k].field;
    } else {
      cc.push_back(fit.coefficients(k));
      res.closed_part = res.closed_part + w * basis[k].field;
    }
  }
  res.ky_coefficients = Eigen::Map<Eigen::VectorXd>(kc.data(), kc.size());
  res.closed_coefficients = Eigen::Map<Eigen::VectorXd>(cc.data(), cc.size());
  return res;
}

}  // namespace kyt
