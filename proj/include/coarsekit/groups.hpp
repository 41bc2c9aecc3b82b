#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "coarsekit/metric_space.hpp"

namespace coarsekit::groups {

/// Description of a finitely generated group with a fixed generating set.
struct GroupSpec {
  enum class Kind { FreeAbelian, Free, IntegerMatrix };

  Kind kind = Kind::FreeAbelian;
  int rank = 0;  // FreeAbelian / Free
  /// IntegerMatrix: square integer generator matrices. Inverses are computed
  /// and appended automatically; every generator must be invertible over the
  /// integers (determinant +1 or -1).
  std::vector<std::vector<std::vector<long long>>> generators;

  static GroupSpec free_abelian(int rank);
  static GroupSpec free_group(int rank);
  static GroupSpec integer_matrix(std::vector<std::vector<std::vector<long long>>> gens);
};

/// The integer Heisenberg group: upper unitriangular 3x3 matrices, generated
/// by the two elementary matrices with a single off-diagonal 1.
GroupSpec heisenberg_spec();

/// Ball of the word metric around the identity.
///
/// Exploration runs to depth 2*radius so every pairwise distance inside the
/// ball is exact: a geodesic between ball elements has length at most
/// 2*radius, and each of its points stays within word length 2*radius of the
/// identity. Exploration aborts with an error when it would exceed the node
/// cap (default 200000, overridable via COARSEKIT_NODE_CAP or the cap
/// argument).
struct CayleyBall {
  metric::SpaceRef space;   // point order: breadth-first discovery
  std::vector<int> depth;   // word length from the identity, per point
  int radius = 0;
};

std::size_t default_node_cap();

CayleyBall cayley_ball(const GroupSpec& spec, int radius, std::size_t node_cap = 0);

}  // namespace coarsekit::groups
