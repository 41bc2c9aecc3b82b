#pragma once

#include "coarsekit/metric_space.hpp"
#include "coarsekit/simplicial.hpp"

namespace coarsekit::rips {

inline constexpr std::size_t default_max_simplices = 2'000'000;

/// Rips complex at scale s over a point set: a simplex is any finite set of
/// points with pairwise distances at most s. Built by enumerating maximal
/// cliques of the distance graph; every face of a clique is a simplex.
/// `dimension` records the true dimension even when face enumeration stops
/// at dim_cap (the complex is then flagged capped).
SimplicialComplex build_rips(metric::SpaceRef space, const std::vector<std::uint32_t>& points,
                             double s, int dim_cap = 8,
                             std::size_t max_simplices = default_max_simplices);

/// Convenience overload over all points of the space.
SimplicialComplex build_rips(metric::SpaceRef space, double s, int dim_cap = 8,
                             std::size_t max_simplices = default_max_simplices);

/// Relative Rips complex. A simplex either has all vertices in z with
/// pairwise distances at most s, or all vertices inside a single family
/// member with pairwise distances at most s_large. Requires s <= s_large.
SimplicialComplex build_relative_rips(metric::SpaceRef space,
                                      const std::vector<std::uint32_t>& z,
                                      const std::vector<std::vector<std::uint32_t>>& w_family,
                                      double s, double s_large, int dim_cap = 8,
                                      std::size_t max_simplices = default_max_simplices);

/// Comparison constant (2*sqrt(2)+1)^(N-1) for a complex of dimension N >= 1,
/// and 1 for a zero-dimensional complex. Errors when the complex is capped
/// (the true dimension is known but callers asked for fewer faces than exist,
/// so downstream path machinery cannot traverse the full complex) or empty.
double rips_constant(const SimplicialComplex& k);

/// The same constant from a dimension value.
double comparison_constant(int dimension);

}  // namespace coarsekit::rips
