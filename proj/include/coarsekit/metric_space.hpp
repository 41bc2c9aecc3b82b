#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "coarsekit/ext_distance.hpp"

namespace coarsekit::metric {

class MetricSpace;
using SpaceRef = std::shared_ptr<const MetricSpace>;

/// Finite metric space with opaque point ids. Immutable after construction.
///
/// Two backends: an explicit distance matrix, and integer lattice points
/// under the l1 metric. Matrix construction validates the metric axioms
/// (zero diagonal, symmetry, identity of indiscernibles, triangle
/// inequality with infinity-absorbing arithmetic); the triangle check is the
/// full O(n^3) scan for n <= 2000 and a fixed 2,000,000-triple sample above.
/// Lattice distances are computed from coordinates and satisfy the axioms by
/// construction. All finite distances of interest are integer-valued or
/// small sums, exactly representable as doubles.
class MetricSpace {
public:
  enum class Backend { Matrix, L1 };

  static SpaceRef from_matrix(std::string label, std::vector<std::string> ids,
                              std::vector<std::vector<double>> rows);

  /// All integer vectors of l1 norm <= radius in the given dimension.
  /// dim = 0 yields the one-point space.
  static SpaceRef l1_lattice_ball(int dim, long long radius);

  /// Arbitrary distinct lattice points under the l1 metric.
  static SpaceRef from_lattice_points(std::string label,
                                      std::vector<std::vector<long long>> points);

  std::size_t size() const { return ids_.size(); }
  const std::string& label() const { return label_; }
  Backend backend() const { return backend_; }

  ExtDistance dist(std::uint32_t i, std::uint32_t j) const;
  /// Raw double distance (may be +inf).
  double dist_value(std::uint32_t i, std::uint32_t j) const;

  const std::string& id(std::uint32_t i) const { return ids_.at(i); }
  const std::vector<std::string>& ids() const { return ids_; }
  std::optional<std::uint32_t> index_of(std::string_view id) const;

  bool has_coordinates() const { return backend_ == Backend::L1; }
  int lattice_dim() const { return lattice_dim_; }
  const long long* coords(std::uint32_t i) const;

  /// Canonical id string "(a,b,...)" for a lattice point.
  static std::string lattice_id(const std::vector<long long>& p);

private:
  MetricSpace() = default;
  void index_ids();
  void validate_matrix() const;

  std::string label_;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::uint32_t> id_index_;
  Backend backend_ = Backend::Matrix;
  std::vector<double> matrix_;       // n*n row-major when Backend::Matrix
  std::vector<long long> coords_;    // n*dim when Backend::L1
  int lattice_dim_ = 0;
};

/// Subset of a parent space, stored as sorted unique point indices.
struct Subspace {
  SpaceRef parent;
  std::vector<std::uint32_t> members;

  static Subspace of(SpaceRef parent, std::vector<std::uint32_t> members);
  static Subspace whole(SpaceRef parent);
};

/// Finite family of subsets of a common parent space.
struct MetricFamily {
  SpaceRef parent;
  std::vector<std::vector<std::uint32_t>> sets;

  static MetricFamily of(SpaceRef parent, std::vector<std::vector<std::uint32_t>> sets);
};

struct DisjointnessReport {
  bool disjoint = true;
  // Witness for the violating pair when not disjoint.
  std::size_t set_a = 0, set_b = 0;
  std::uint32_t point_a = 0, point_b = 0;
  double distance = 0.0;
};

/// Points strictly within r of Z. Empty Z gives the empty set; r must be
/// finite and nonnegative (r = 0 gives the empty set).
std::vector<std::uint32_t> neighborhood(const MetricSpace& space,
                                        const std::vector<std::uint32_t>& z, double r);

/// Points within closed distance r of Z (r = 0 is Z itself).
std::vector<std::uint32_t> closed_neighborhood(const MetricSpace& space,
                                               const std::vector<std::uint32_t>& z, double r);

/// Open ball of radius r about x; equals neighborhood(space, {x}, r).
std::vector<std::uint32_t> ball(const MetricSpace& space, std::uint32_t x, double r);

/// Largest closed-ball cardinality: max over x of |{y : d(x,y) <= r}|.
std::size_t growth_bound(const MetricSpace& space, double r);

/// Minimum distance between two point sets; infinite if either is empty.
ExtDistance min_set_distance(const MetricSpace& space, const std::vector<std::uint32_t>& a,
                             const std::vector<std::uint32_t>& b);

/// Maximum pairwise distance within a set; zero if |a| <= 1.
ExtDistance diameter(const MetricSpace& space, const std::vector<std::uint32_t>& a);

/// Checks that every pair of distinct family members is strictly more than
/// r apart, reporting a witness pair otherwise.
DisjointnessReport is_r_disjoint(const MetricFamily& family, double r);

}  // namespace coarsekit::metric
