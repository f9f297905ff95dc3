// Curvature, projective decomposition, covariant calculus, and classification
// of equiaffine structures.

#include "kyt/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace kyt {

std::vector<std::vector<double>> sample_points(
    const DomainBox& box, int count, std::uint64_t seed,
    const std::function<bool(std::span<const double>)>& accept) {
  static constexpr int primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
  const int n = box.dimension();
  if (n > 8) throw std::invalid_argument("sample_points supports n <= 8");

  std::vector<std::vector<double>> pts;
  pts.reserve(count);
  std::uint64_t index = 1 + seed * 1009;  // offset the sequence per seed
  const std::uint64_t cap = index + 64ull * count + 4096;
  std::vector<double> x(n);
  while (static_cast<int>(pts.size()) < count && index < cap) {
    for (int i = 0; i < n; ++i)
      x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * halton(index, primes[i]);
    ++index;
    if (accept && !accept(x)) continue;
    pts.push_back(x);
  }
  if (static_cast<int>(pts.size()) < count)
    throw std::runtime_error("sample_points: domain rejection rate too high");
  return pts;
}

// --- AffineConnection ----------------------------------------------------------

AffineConnection::AffineConnection(int n) : n_(n) {
  gamma_.assign(static_cast<std::size_t>(n) * n * (n + 1) / 2,
                ScalarField::constant(n, Rational(0)));
}

std::size_t AffineConnection::slot(int k, int i, int j) const {
  if (i > j) std::swap(i, j);
  // canonical pair index over i <= j
  std::size_t pair = static_cast<std::size_t>(i - 1) * (n_ + 1) -
                     (static_cast<std::size_t>(i) * (i - 1)) / 2 + (j - i);
  return static_cast<std::size_t>(k - 1) * (static_cast<std::size_t>(n_) * (n_ + 1) / 2) + pair;
}

const ScalarField& AffineConnection::christoffel(int k, int i, int j) const {
  return gamma_[slot(k, i, j)];
}

void AffineConnection::set_christoffel(int k, int i, int j, ScalarField value) {
  gamma_[slot(k, i, j)] = std::move(value);
}

std::vector<double> AffineConnection::eval(EvalContext& ctx) const {
  std::vector<double> out(static_cast<std::size_t>(n_) * n_ * n_);
  for (int k = 1; k <= n_; ++k)
    for (int i = 1; i <= n_; ++i)
      for (int j = i; j <= n_; ++j) {
        double v = christoffel(k, i, j).eval(ctx);
        out[((k - 1) * n_ + (i - 1)) * n_ + (j - 1)] = v;
        out[((k - 1) * n_ + (j - 1)) * n_ + (i - 1)] = v;
      }
  return out;
}

// --- curvature -------------------------------------------------------------------

CurvatureData curvature(const AffineConnection& gamma) {
  const int n = gamma.dimension();
  CurvatureData cd;
  cd.n = n;
  cd.riemann.assign(static_cast<std::size_t>(n) * n * n * n,
                    ScalarField::constant(n, Rational(0)));
  auto put = [&](int l, int k, int i, int j, const ScalarField& f) {
    cd.riemann[((static_cast<std::size_t>(l - 1) * n + (k - 1)) * n + (i - 1)) * n + (j - 1)] = f;
  };

  for (int l = 1; l <= n; ++l)
    for (int k = 1; k <= n; ++k)
      for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
          ScalarField acc = gamma.christoffel(l, j, k).diff(i) -
                            gamma.christoffel(l, i, k).diff(j);
          for (int m = 1; m <= n; ++m) {
            acc = acc + gamma.christoffel(l, i, m) * gamma.christoffel(m, j, k) -
                  gamma.christoffel(l, j, m) * gamma.christoffel(m, i, k);
          }
          put(l, k, i, j, acc);
          put(l, k, j, i, -acc);
        }
  return cd;
}

void compute_ricci(CurvatureData& cd) {
  const int n = cd.n;
  cd.ricci = TensorField(n, 2);
  std::vector<int> idx(2);
  for (int k = 1; k <= n; ++k)
    for (int j = 1; j <= n; ++j) {
      ScalarField acc = ScalarField::constant(n, Rational(0));
      for (int l = 1; l <= n; ++l) acc = acc + cd.r(l, k, l, j);
      idx[0] = k;
      idx[1] = j;
      cd.ricci.at(idx) = acc;
    }
}

void compute_weyl_projective(CurvatureData& cd) {
  const int n = cd.n;
  if (cd.ricci.dimension() == 0) compute_ricci(cd);
  cd.weyl.assign(cd.riemann.size(), ScalarField::constant(n, Rational(0)));
  const Rational inv(1, n - 1);
  std::vector<int> kj(2), ki(2);
  for (int l = 1; l <= n; ++l)
    for (int k = 1; k <= n; ++k)
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
          ScalarField acc = cd.r(l, k, i, j);
          kj = {k, j};
          ki = {k, i};
          if (l == i) acc = acc - inv * cd.ricci.at(kj);
          if (l == j) acc = acc + inv * cd.ricci.at(ki);
          cd.weyl[((static_cast<std::size_t>(l - 1) * n + (k - 1)) * n + (i - 1)) * n + (j - 1)] = acc;
        }
}

// --- covariant derivative ----------------------------------------------------------

TensorField covariant_derivative(const TensorField& t, const AffineConnection& gamma) {
  const int n = t.dimension();
  const int p = t.rank();
  TensorField out(n, p + 1);
  std::vector<int> idx(p + 1, 1);
  std::vector<int> inner(p);
  do {
    const int d = idx[0];
    std::copy(idx.begin() + 1, idx.end(), inner.begin());
    ScalarField acc = t.at(inner).diff(d);
    for (int a = 0; a < p; ++a) {
      const int ia = inner[a];
      for (int k = 1; k <= n; ++k) {
        inner[a] = k;
        acc = acc - t.at(inner) * gamma.christoffel(k, ia, d);
      }
      inner[a] = ia;
    }
    out.at(idx) = acc;
  } while (next_index(idx, n));
  return out;
}

// --- metric helpers -------------------------------------------------------------------

namespace {

ScalarField minor_det(const TensorField& g, const std::vector<int>& rows,
                      const std::vector<int>& cols) {
  const int n = g.dimension();
  const int p = static_cast<int>(rows.size());
  if (p == 0) return ScalarField::constant(n, Rational(1));
  if (p == 1) return g.at(std::vector<int>{rows[0], cols[0]});
  ScalarField acc = ScalarField::constant(n, Rational(0));
  for (int c = 0; c < p; ++c) {
    std::vector<int> sub_rows(rows.begin() + 1, rows.end());
    std::vector<int> sub_cols;
    for (int cc = 0; cc < p; ++cc)
      if (cc != c) sub_cols.push_back(cols[cc]);
    ScalarField term = g.at(std::vector<int>{rows[0], cols[c]}) * minor_det(g, sub_rows, sub_cols);
    acc = (c % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

}  // namespace

ScalarField field_determinant(const TensorField& metric) {
  const int n = metric.dimension();
  if (metric.rank() != 2) throw std::invalid_argument("determinant needs a rank-2 field");
  if (n > 4) throw std::invalid_argument("symbolic determinant limited to n <= 4");
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i + 1;
  return minor_det(metric, all, all);
}

TensorField inverse_metric(const TensorField& metric) {
  const int n = metric.dimension();
  if (n > 4) throw std::invalid_argument("symbolic inverse limited to n <= 4");
  ScalarField det = field_determinant(metric);
  TensorField inv(n, 2);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      std::vector<int> rows, cols;
      for (int r = 1; r <= n; ++r)
        if (r != j) rows.push_back(r);
      for (int c = 1; c <= n; ++c)
        if (c != i) cols.push_back(c);
      ScalarField cof = minor_det(metric, rows, cols);
      if ((i + j) % 2 != 0) cof = -cof;
      inv.at(std::vector<int>{i, j}) = cof / det;
    }
  return inv;
}

AffineConnection levi_civita(const TensorField& metric) {
  const int n = metric.dimension();
  TensorField ginv = inverse_metric(metric);
  AffineConnection conn(n);
  for (int k = 1; k <= n; ++k)
    for (int i = 1; i <= n; ++i)
      for (int j = i; j <= n; ++j) {
        ScalarField acc = ScalarField::constant(n, Rational(0));
        for (int l = 1; l <= n; ++l) {
          ScalarField bracket = metric.at(std::vector<int>{l, j}).diff(i) +
                                metric.at(std::vector<int>{l, i}).diff(j) -
                                metric.at(std::vector<int>{i, j}).diff(l);
          acc = acc + ginv.at(std::vector<int>{k, l}) * bracket;
        }
        conn.set_christoffel(k, i, j, rat(1, 2) * acc);
      }
  return conn;
}

// --- classification ----------------------------------------------------------------------

ClassifyReport classify(const EquiaffineStructure& s,
                        std::span<const std::vector<double>> points, double tol) {
  const int n = s.connection.dimension();
  ClassifyReport rep;

  ScalarField log_volume = ln(s.volume);
  std::vector<ScalarField> dlv;
  for (int i = 1; i <= n; ++i) dlv.push_back(log_volume.diff(i));

  CurvatureData cd = curvature(s.connection);
  compute_ricci(cd);
  compute_weyl_projective(cd);

  for (const auto& pt : points) {
    EvalContext ctx(pt);
    for (int i = 1; i <= n; ++i) {
      double trace = 0;
      for (int k = 1; k <= n; ++k) trace += s.connection.christoffel(k, k, i).eval(ctx);
      rep.volume_residual = std::max(rep.volume_residual, std::abs(dlv[i - 1].eval(ctx) - trace));
    }
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        double rij = cd.ricci.at(std::vector<int>{i, j}).eval(ctx);
        double rji = cd.ricci.at(std::vector<int>{j, i}).eval(ctx);
        rep.ricci_asymmetry = std::max(rep.ricci_asymmetry, std::abs(rij - rji));
        rep.ricci_norm = std::max(rep.ricci_norm, std::abs(rij));
      }
    for (const auto& w : cd.weyl)
      rep.weyl_norm = std::max(rep.weyl_norm, std::abs(w.eval(ctx)));
  }

  rep.points_used = static_cast<int>(points.size());
  rep.equiaffine = rep.volume_residual < tol && rep.ricci_asymmetry < tol;
  rep.ricci_flat = rep.ricci_norm < tol;
  rep.equiprojective = rep.weyl_norm < tol;
  return rep;
}

// --- vector-field machinery ----------------------------------------------------------------

TensorField a_operator(const VectorField& x, const AffineConnection& gamma) {
  const int n = x.dimension();
  TensorField out(n, 2);
  for (int k = 1; k <= n; ++k)
    for (int j = 1; j <= n; ++j) {
      ScalarField acc = x.at(k).diff(j);
      for (int m = 1; m <= n; ++m) acc = acc + gamma.christoffel(k, j, m) * x.at(m);
      out.at(std::vector<int>{k, j}) = -acc;
    }
  return out;
}

double concircular_residual(const VectorField& x, const AffineConnection& gamma,
                            std::span<const std::vector<double>> points) {
  const int n = x.dimension();
  TensorField ax = a_operator(x, gamma);
  double worst = 0;
  for (const auto& pt : points) {
    EvalContext ctx(pt);
    NumericTensor a = ax.eval(ctx);
    double div = 0;   // trace A_X = -div X
    for (int k = 1; k <= n; ++k) div -= a.at(std::vector<int>{k, k});
    for (int k = 1; k <= n; ++k)
      for (int j = 1; j <= n; ++j) {
        double v = a.at(std::vector<int>{k, j});
        if (k == j) v += div / n;
        worst = std::max(worst, std::abs(v));
      }
  }
  return worst;
}

ScalarField divergence(const VectorField& x, const ScalarField& volume) {
  const int n = x.dimension();
  ScalarField log_volume = ln(volume);
  ScalarField acc = ScalarField::constant(n, Rational(0));
  for (int i = 1; i <= n; ++i)
    acc = acc + x.at(i).diff(i) + x.at(i) * log_volume.diff(i);
  return acc;
}

EquiaffineStructure projective_structure_from_gauge(const ScalarField& gauge) {
  const int n = gauge.dimension();
  EquiaffineStructure s;
  s.connection = AffineConnection(n);
  std::vector<ScalarField> grad;
  for (int i = 1; i <= n; ++i) grad.push_back(gauge.diff(i));
  for (int k = 1; k <= n; ++k)
    for (int i = 1; i <= n; ++i)
      for (int j = i; j <= n; ++j) {
        ScalarField acc = ScalarField::constant(n, Rational(0));
        if (k == j) acc = acc + grad[i - 1];
        if (k == i) acc = acc + grad[j - 1];
        s.connection.set_christoffel(k, i, j, acc);
      }
  s.volume = exp(Rational(n + 1) * gauge);
  return s;
}

}  // namespace kyt
