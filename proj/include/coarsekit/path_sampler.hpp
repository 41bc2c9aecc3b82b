#pragma once

#include "coarsekit/barycentric.hpp"
#include "coarsekit/rng.hpp"

namespace coarsekit::rips {

struct WalkParams {
  int steps = 12;
  /// Chance that a step lands on a vertex instead of an interior point.
  double vertex_snap = 0.25;
  /// Chance per candidate vertex of joining the carrier when widening.
  double widen = 0.5;
};

/// Random piecewise linear walk from a vertex, ending at a vertex. Each step
/// picks a maximal simplex containing the current support, widens the support
/// inside it, and moves to a random point of a random face of the widened
/// simplex (or to one of its vertices).
PLPath random_vertex_walk(const SimplicialComplex& k, std::uint32_t start, Rng& rng,
                          const WalkParams& params = {});

/// Random walk from `start` whose total length stays at or below `budget`
/// (budget >= 1). The walk ends at a vertex; the reversed path certifies that
/// the final vertex lies within simplicial distance `budget` of `start`.
PLPath random_budget_walk(const SimplicialComplex& k, std::uint32_t start, double budget,
                          Rng& rng, const WalkParams& params = {});

}  // namespace coarsekit::rips
