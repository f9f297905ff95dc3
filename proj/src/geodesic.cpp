// RK4 geodesic integration and invariant monitors.

#include "kyt/geodesic.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace kyt {

namespace {

// State layout: x[0..n), v[n..2n), then any transported frame vectors.
class GeodesicSystem {
 public:
  GeodesicSystem(const AffineConnection& gamma, int frames)
      : gamma_(gamma), n_(gamma.dimension()), frames_(frames) {}

  int size() const { return n_ * (2 + frames_); }

  void rhs(const std::vector<double>& y, std::vector<double>& dy) const {
    EvalContext ctx(std::span<const double>(y.data(), n_));
    std::vector<double> g = gamma_.eval(ctx);
    auto chris = [&](int k, int i, int j) {
      return g[((k - 1) * n_ + (i - 1)) * n_ + (j - 1)];
    };
    for (int i = 0; i < n_; ++i) dy[i] = y[n_ + i];
    for (int k = 1; k <= n_; ++k) {
      double acc = 0;
      for (int i = 1; i <= n_; ++i)
        for (int j = 1; j <= n_; ++j)
          acc += chris(k, i, j) * y[n_ + i - 1] * y[n_ + j - 1];
      dy[n_ + k - 1] = -acc;
    }
    for (int f = 0; f < frames_; ++f) {
      const int base = n_ * (2 + f);
      for (int k = 1; k <= n_; ++k) {
        double acc = 0;
        for (int i = 1; i <= n_; ++i)
          for (int j = 1; j <= n_; ++j)
            acc += chris(k, i, j) * y[n_ + i - 1] * y[base + j - 1];
        dy[base + k - 1] = -acc;
      }
    }
  }

  void rk4_step(std::vector<double>& y, double h) const {
    const int m = size();
    std::vector<double> k1(m), k2(m), k3(m), k4(m), tmp(m);
    rhs(y, k1);
    for (int i = 0; i < m; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    rhs(tmp, k2);
    for (int i = 0; i < m; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    rhs(tmp, k3);
    for (int i = 0; i < m; ++i) tmp[i] = y[i] + h * k3[i];
    rhs(tmp, k4);
    for (int i = 0; i < m; ++i)
      y[i] += h * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]) / 6.0;
  }

 private:
  const AffineConnection& gamma_;
  int n_, frames_;
};

}  // namespace

GeodesicTrace integrate(const AffineConnection& gamma, std::span<const double> x0,
                        std::span<const double> v0, double duration, double step,
                        const DomainBox& box) {
  if (step <= 0) throw std::invalid_argument("step must be positive");
  const int n = gamma.dimension();
  if (!box.contains(x0)) throw std::invalid_argument("initial point outside the domain box");

  GeodesicSystem sys(gamma, 0);
  std::vector<double> y(2 * n);
  std::copy(x0.begin(), x0.end(), y.begin());
  std::copy(v0.begin(), v0.end(), y.begin() + n);

  GeodesicTrace trace;
  trace.step = step;
  const long steps = std::lround(duration / step);
  auto record = [&](double t) {
    trace.times.push_back(t);
    trace.positions.emplace_back(y.begin(), y.begin() + n);
    trace.velocities.emplace_back(y.begin() + n, y.end());
  };
  record(0.0);
  for (long s = 1; s <= steps; ++s) {
    sys.rk4_step(y, step);
    if (!box.contains(std::span<const double>(y.data(), n))) {
      trace.truncated = true;
      break;
    }
    record(s * step);
  }
  return trace;
}

DriftReport monitor_kt(const TensorField& phi, const GeodesicTrace& trace) {
  const int p = phi.rank();
  DriftReport report;
  for (std::size_t s = 0; s < trace.times.size(); ++s) {
    EvalContext ctx(trace.positions[s]);
    NumericTensor t = phi.eval(ctx);
    // contract all slots with the velocity
    NumericTensor cur = t;
    for (int a = 0; a < p; ++a) cur = interior_product(trace.velocities[s], cur);
    report.series.push_back(cur.scalar());
  }
  if (report.series.empty()) return report;
  report.reference = report.series.front();
  const double denom = std::max(std::abs(report.reference), 1.0);
  for (double v : report.series)
    report.max_drift = std::max(report.max_drift, std::abs(v - report.reference) / denom);
  return report;
}

DriftReport monitor_ky(const TensorField& omega, const GeodesicTrace& trace,
                       const AffineConnection& gamma,
                       std::span<const std::vector<double>> frame0) {
  const int n = omega.dimension();
  const int p = omega.rank();
  if (static_cast<int>(frame0.size()) != p - 1)
    throw std::invalid_argument("monitor_ky needs rank-1 initial frame vectors");
  if (trace.times.empty()) return {};

  // Re-integrate jointly so the frame sees the same fourth-order trajectory.
  GeodesicSystem sys(gamma, p - 1);
  std::vector<double> y(sys.size());
  std::copy(trace.positions[0].begin(), trace.positions[0].end(), y.begin());
  std::copy(trace.velocities[0].begin(), trace.velocities[0].end(), y.begin() + n);
  for (int f = 0; f < p - 1; ++f)
    std::copy(frame0[f].begin(), frame0[f].end(), y.begin() + n * (2 + f));

  DriftReport report;
  auto sample = [&]() {
    EvalContext ctx(std::span<const double>(y.data(), n));
    NumericTensor t = omega.eval(ctx);
    NumericTensor cur = interior_product(std::span<const double>(y.data() + n, n), t);
    for (int f = 0; f < p - 1; ++f)
      cur = interior_product(std::span<const double>(y.data() + n * (2 + f), n), cur);
    report.series.push_back(cur.scalar());
  };
  sample();
  for (std::size_t s = 1; s < trace.times.size(); ++s) {
    sys.rk4_step(y, trace.step);
    sample();
  }
  report.reference = report.series.front();
  const double denom = std::max(std::abs(report.reference), 1.0);
  for (double v : report.series)
    report.max_drift = std::max(report.max_drift, std::abs(v - report.reference) / denom);
  return report;
}

void attach_monitor(GeodesicTrace& trace, const std::string& name, const DriftReport& report) {
  trace.monitors.emplace_back(name, report.series);
}

void write_csv(std::ostream& os, const GeodesicTrace& trace) {
  const int n = trace.positions.empty() ? 0 : static_cast<int>(trace.positions[0].size());
  os << "t";
  for (int i = 1; i <= n; ++i) os << ",x" << i;
  for (int i = 1; i <= n; ++i) os << ",v" << i;
  for (const auto& [name, series] : trace.monitors) os << "," << name;
  os << "\n";
  os.precision(17);
  for (std::size_t s = 0; s < trace.times.size(); ++s) {
    os << trace.times[s];
    for (int i = 0; i < n; ++i) os << "," << trace.positions[s][i];
    for (int i = 0; i < n; ++i) os << "," << trace.velocities[s][i];
    for (const auto& [name, series] : trace.monitors)
      os << "," << (s < series.size() ? series[s] : 0.0);
    os << "\n";
  }
}

}  // namespace kyt
