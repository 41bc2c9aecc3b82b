#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "coarsekit/ext_distance.hpp"
#include "coarsekit/metric_space.hpp"

namespace coarsekit::rips {

/// Finite abstract simplicial complex over points of a metric space.
///
/// Simplices are sorted lists of space point indices. The inclusion-maximal
/// simplices determine membership; all faces up to the dimension cap are
/// enumerated for serialization, sampling and skeleton walks. `dimension` is
/// always the true dimension (largest maximal simplex), even when
/// enumeration is capped.
struct SimplicialComplex {
  metric::SpaceRef space;
  std::vector<std::uint32_t> vertices;              // sorted point indices
  std::vector<std::vector<std::uint32_t>> maximal;  // sorted, inclusion-maximal, lexicographic order
  /// by_dim[d] lists the d-simplices, each sorted, the list lexicographic.
  std::vector<std::vector<std::vector<std::uint32_t>>> by_dim;
  int dimension = -1;
  bool capped = false;
  int dim_cap = 8;

  double scale = 0.0;        // vertex scale s
  double scale_large = 0.0;  // relative complexes only: s'
  bool relative = false;
  /// Relative complexes: the privileged subspace family (condition-two sets).
  std::vector<std::vector<std::uint32_t>> privileged_sets;

  bool has_vertex(std::uint32_t point) const;
  /// Position of a point in `vertices`, or npos when absent.
  std::size_t vertex_position(std::uint32_t point) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// Is the sorted vertex set `f` a simplex (a face of some maximal simplex)?
  bool is_simplex(const std::vector<std::uint32_t>& f) const;

  /// Indices into `maximal` of the maximal simplices containing `f`.
  std::vector<std::size_t> cofaces_of(const std::vector<std::uint32_t>& f) const;

  /// Does some privileged set contain `f`? For relative complexes this is
  /// exactly membership of the simplex in the privileged subcomplex (the
  /// union of full-scale complexes over the family members).
  bool is_privileged(const std::vector<std::uint32_t>& f) const;

  std::size_t simplex_count() const;

private:
  friend SimplicialComplex finish_complex(metric::SpaceRef space,
                                          std::vector<std::vector<std::uint32_t>> maximal,
                                          int dim_cap, std::size_t max_simplices);
  std::vector<std::vector<std::size_t>> vertex_to_maximal_;  // by vertex position
};

/// Assembles a complex from maximal simplices: sorts and filters to the
/// inclusion-maximal ones, indexes vertices, and enumerates faces up to
/// dim_cap. Throws when the face enumeration would exceed max_simplices.
SimplicialComplex finish_complex(metric::SpaceRef space,
                                 std::vector<std::vector<std::uint32_t>> maximal, int dim_cap,
                                 std::size_t max_simplices);

/// Path metric on the 1-skeleton, each edge of length one. Infinite across
/// components. Both arguments must be vertices of the complex.
metric::ExtDistance skeleton_distance(const SimplicialComplex& k, std::uint32_t a,
                                      std::uint32_t b);

/// Hop distances from `a` to every vertex (-1 where unreachable), indexed by
/// vertex position.
std::vector<long long> skeleton_distances_from(const SimplicialComplex& k, std::uint32_t a);

nlohmann::ordered_json complex_to_json(const SimplicialComplex& k);

/// Graphviz rendering of the 1-skeleton.
std::string complex_to_dot(const SimplicialComplex& k);

}  // namespace coarsekit::rips
