#include "coarsekit/control.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace coarsekit::algebra {

std::uint32_t GridSpace::index_of(std::uint32_t base_point, std::size_t time_index) const {
  return static_cast<std::uint32_t>(base_point * times.size() + time_index);
}

std::uint32_t GridSpace::base_of(std::uint32_t grid_point) const {
  return static_cast<std::uint32_t>(grid_point / times.size());
}

double GridSpace::time_of(std::uint32_t grid_point) const {
  return times[grid_point % times.size()];
}

GridSpace make_grid(metric::SpaceRef base, std::vector<double> times) {
  if (!base) throw std::invalid_argument("make_grid: null base space");
  if (times.empty()) throw std::invalid_argument("make_grid: empty time grid");
  for (double t : times) {
    if (!(t >= 0.0) || !(t < 1.0)) {
      throw std::invalid_argument("make_grid: times must lie in [0, 1)");
    }
  }
  auto sorted = times;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("make_grid: duplicate time values");
  }

  GridSpace grid;
  grid.base = base;
  grid.times = std::move(sorted);

  const std::size_t n = base->size() * grid.times.size();
  std::vector<std::string> ids;
  ids.reserve(n);
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (std::uint32_t b = 0; b < base->size(); ++b) {
    for (const double t : grid.times) {
      std::ostringstream id;
      id << base->id(b) << "@" << std::setprecision(15) << t;
      ids.push_back(id.str());
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto bi = static_cast<std::uint32_t>(i / grid.times.size());
    const double ti = grid.times[i % grid.times.size()];
    for (std::size_t j = 0; j < n; ++j) {
      const auto bj = static_cast<std::uint32_t>(j / grid.times.size());
      const double tj = grid.times[j % grid.times.size()];
      rows[i][j] = base->dist_value(bi, bj) + std::abs(ti - tj);
    }
  }
  grid.product = metric::MetricSpace::from_matrix(base->label() + "-grid", std::move(ids),
                                                  std::move(rows));
  return grid;
}

ControlOutcome check_control_certificate(const GeomMorphism& phi, const GridSpace& grid,
                                         const std::vector<ControlProbe>& probes,
                                         const DeltaFn& delta) {
  if (phi.source.space != grid.product) {
    throw std::invalid_argument("control check: morphism does not live on the grid");
  }

  ControlOutcome out;
  out.record.name = "boundary-control";
  nlohmann::ordered_json witnesses = nlohmann::ordered_json::array();

  for (const auto& probe : probes) {
    if (!(probe.eps > 0.0)) throw std::invalid_argument("control probe: eps must be positive");
    const double shrunk = delta(probe.rho, probe.eps);
    if (!(shrunk < probe.eps) || !(shrunk > 0.0)) {
      throw std::invalid_argument("control certificate: delta must shrink the gap");
    }
    ++out.probes;

    const auto in_box = [&](std::uint32_t grid_point, double gap) {
      const double d = grid.base->dist_value(grid.base_of(grid_point), probe.center);
      return d < probe.rho && grid.time_of(grid_point) > 1.0 - gap;
    };

    for (const auto& [key, block] : phi.blocks) {
      const auto [target, source] = key;
      const bool crosses = (in_box(source, shrunk) && !in_box(target, probe.eps)) ||
                           (in_box(target, shrunk) && !in_box(source, probe.eps));
      if (!crosses) continue;
      ++out.violations;
      if (witnesses.size() < 5) {
        witnesses.push_back({{"center", grid.base->id(probe.center)},
                             {"rho", probe.rho},
                             {"eps", probe.eps},
                             {"epsInner", shrunk},
                             {"blockTarget", grid.product->id(target)},
                             {"blockSource", grid.product->id(source)}});
      }
    }
  }

  out.record.status = out.violations == 0 ? report::Status::Pass : report::Status::Fail;
  out.record.details = {{"probes", out.probes}, {"violations", out.violations}};
  if (!witnesses.empty()) out.record.details["witnesses"] = witnesses;
  return out;
}

}  // namespace coarsekit::algebra
