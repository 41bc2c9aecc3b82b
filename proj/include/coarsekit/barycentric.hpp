#pragma once

#include <cstdint>
#include <vector>

#include "coarsekit/simplicial.hpp"

namespace coarsekit::rips {

/// Point of a simplicial complex in barycentric coordinates: a sorted support
/// of vertices with strictly positive weights summing to one (tolerance
/// 1e-12). Lengths are measured in the embedding that places every vertex at
/// (sqrt(2)/2) e_i, so each simplex has diameter exactly one; the squared
/// distance between two points of a common simplex is half the squared
/// euclidean distance of their coordinate vectors.
struct BarycentricPoint {
  std::vector<std::uint32_t> support;  // sorted vertex point indices
  std::vector<double> coords;          // aligned, > 0, sum 1

  static BarycentricPoint vertex(std::uint32_t v);
  static BarycentricPoint make(std::vector<std::uint32_t> support, std::vector<double> coords);

  bool is_vertex() const { return support.size() == 1; }
  double coord_of(std::uint32_t v) const;  // 0 when v is not in the support
};

/// Length of the straight segment between two points of a common simplex.
double segment_length(const BarycentricPoint& a, const BarycentricPoint& b);

/// Piecewise linear path: consecutive points lie in a common simplex of the
/// complex (the recorded carrier; the minimal one is the support union).
struct PLPath {
  const SimplicialComplex* complex = nullptr;
  std::vector<BarycentricPoint> points;
  /// carriers[i] covers points[i] and points[i+1]; size = points.size() - 1.
  std::vector<std::vector<std::uint32_t>> carriers;

  /// Validates supports against the complex and carrier containment. When
  /// carriers are omitted they default to the support unions, which must be
  /// simplices.
  static PLPath make(const SimplicialComplex& k, std::vector<BarycentricPoint> points,
                     std::vector<std::vector<std::uint32_t>> carriers = {});

  std::size_t segments() const { return carriers.size(); }
};

double path_length(const PLPath& path);

/// Largest carrier dimension along the path, using minimal carriers
/// (support unions); -1 for single-point paths.
int path_dimension(const PLPath& path);

nlohmann::ordered_json path_to_json(const PLPath& path);

}  // namespace coarsekit::rips
