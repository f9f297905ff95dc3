#pragma once

// Domain boxes and deterministic quasi-random sample points (Halton sequence,
// offset by a seed so ensembles are reproducible).

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace kyt {

struct DomainBox {
  std::vector<double> lo, hi;

  int dimension() const { return static_cast<int>(lo.size()); }
  bool contains(std::span<const double> x) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  }
  static DomainBox cube(int n, double half_width) {
    DomainBox b;
    b.lo.assign(n, -half_width);
    b.hi.assign(n, half_width);
    return b;
  }
};

inline double halton(std::uint64_t index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

// `count` points in the box.  A predicate may reject points (singular loci of
// the fields under test); rejected points are replaced by later sequence
// members, up to a generous attempt cap.
std::vector<std::vector<double>> sample_points(
    const DomainBox& box, int count, std::uint64_t seed,
    const std::function<bool(std::span<const double>)>& accept = nullptr);

}  // namespace kyt
