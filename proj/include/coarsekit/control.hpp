#pragma once

#include <functional>
#include <vector>

#include "coarsekit/modules.hpp"
#include "coarsekit/report.hpp"

namespace coarsekit::algebra {

/// Product of a base space with a finite time grid in [0,1), under the sum
/// metric d(x,y) + |t - u|. Grid point order is base-major: the point for
/// (base b, time index k) has index b * times.size() + k and id "x@t".
struct GridSpace {
  metric::SpaceRef product;
  metric::SpaceRef base;
  std::vector<double> times;

  std::uint32_t index_of(std::uint32_t base_point, std::size_t time_index) const;
  std::uint32_t base_of(std::uint32_t grid_point) const;
  double time_of(std::uint32_t grid_point) const;
};

/// Times must be distinct values in [0,1).
GridSpace make_grid(metric::SpaceRef base, std::vector<double> times);

/// One control probe: the box U = B_rho(x) x (1 - eps, 1) around a base
/// point near the time boundary.
struct ControlProbe {
  std::uint32_t center = 0;  // base point
  double rho = 0.0;
  double eps = 0.0;
};

/// For gap eps at radius rho, yields the smaller gap eps' < eps that defines
/// the inner box V = B_rho(x) x (1 - eps', 1).
using DeltaFn = std::function<double(double rho, double eps)>;

/// Discretized boundary-control check for a morphism over a grid space: for
/// every probe, no nonzero block may connect a grid point of V with a grid
/// point outside U, in either direction. Throws when delta fails to shrink.
struct ControlOutcome {
  report::CheckRecord record;
  std::size_t probes = 0;
  std::size_t violations = 0;
};

ControlOutcome check_control_certificate(const GeomMorphism& phi, const GridSpace& grid,
                                         const std::vector<ControlProbe>& probes,
                                         const DeltaFn& delta);

}  // namespace coarsekit::algebra
