#pragma once

// Fixed-step geodesic integration with invariant monitoring: first integrals
// of Killing tensors and parallel-transport contractions of Killing-Yano
// tensors along the trajectory.

#include <iosfwd>
#include <string>

#include "kyt/geometry.hpp"

namespace kyt {

struct GeodesicTrace {
  double step = 0;
  bool truncated = false;  // left the domain box before the requested duration
  std::vector<double> times;
  std::vector<std::vector<double>> positions;
  std::vector<std::vector<double>> velocities;
  std::vector<std::pair<std::string, std::vector<double>>> monitors;
};

// Classical fourth-order Runge-Kutta on x'' + G(x)(x', x') = 0.  Stops early
// with a partial trace when the trajectory exits the box.
GeodesicTrace integrate(const AffineConnection& gamma, std::span<const double> x0,
                        std::span<const double> v0, double duration, double step,
                        const DomainBox& box);

struct DriftReport {
  double max_drift = 0;   // max |s(t) - s(0)| / max(|s(0)|, 1)
  double reference = 0;   // s(0)
  std::vector<double> series;
};

// phi(v, ..., v) along the trace.
DriftReport monitor_kt(const TensorField& phi, const GeodesicTrace& trace);

// Co-integrates parallel transport of rank(omega) - 1 auxiliary frame vectors
// and reports the drift of omega(v, E_2, ..., E_p); for rank 1 the scalar
// omega(v).  frame0 supplies the initial frame vectors.
DriftReport monitor_ky(const TensorField& omega, const GeodesicTrace& trace,
                       const AffineConnection& gamma,
                       std::span<const std::vector<double>> frame0);

void attach_monitor(GeodesicTrace& trace, const std::string& name, const DriftReport& report);

// Columns t, x1..xn, v1..vn, then one column per attached monitor.
void write_csv(std::ostream& os, const GeodesicTrace& trace);

}  // namespace kyt
