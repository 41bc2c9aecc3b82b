#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "coarsekit/metric_space.hpp"
#include "coarsekit/rng.hpp"

namespace coarsekit::fdc {

/// Node of a decomposition certificate tree.
///
/// A split node decomposes every member Z_a of the family living at the node
/// into two colors, U and V, with Z_a = union(u_sub[a]) | union(v_sub[a]);
/// within a color the sub-parts must be pairwise more than r apart. The two
/// children then certify the gathered families of all U sub-parts and all V
/// sub-parts (ordered part-major, sub-part-minor). A leaf asserts a uniform
/// diameter bound over its family.
struct CertNode {
  enum class Kind { Leaf, Split };

  Kind kind = Kind::Leaf;
  double bound = 0.0;  // Leaf: uniform diameter bound
  double r = 0.0;      // Split: disjointness radius, positive

  struct Part {
    std::vector<std::vector<std::uint32_t>> u_sub;
    std::vector<std::vector<std::uint32_t>> v_sub;
  };
  std::vector<Part> parts;         // Split: aligned with the node's family
  std::vector<CertNode> children;  // Split: exactly {U child, V child}

  static CertNode leaf(double bound);
  static CertNode split(double r, std::vector<Part> parts, CertNode u_child, CertNode v_child);
};

struct Certificate {
  metric::SpaceRef space;
  std::vector<std::vector<std::uint32_t>> family;  // members the root certifies
  CertNode root;
};

/// Leaf depth of the tree: 0 for a leaf, 1 + max over children for a split.
int certificate_depth(const CertNode& node);

struct VerifyResult {
  bool ok = true;
  /// Path of the first violating node, e.g. "root.U.V", with the violated
  /// clause: arity | missing-child | radius | cover | disjointness |
  /// leaf-diameter.
  std::string node_path;
  std::string clause;
  nlohmann::ordered_json witness;
};

/// Recursively checks every node: exact covers at splits, strict r-disjoint
/// sub-parts within each color, and leaf diameter bounds. Stops at the first
/// violation, depth first, U before V.
VerifyResult verify_certificate(const Certificate& cert);

/// Slab decomposition certificate for a set of lattice points, splitting
/// along coordinate k at depth k into alternating-parity slabs of integer
/// width floor(r_k) + 1. Same-color slabs are then at least width + 1 > r_k
/// apart. Depth is exactly the lattice dimension; leaves bound the diameter
/// by the sum of the final slab widths minus one per coordinate.
Certificate decompose_lattice_points(metric::SpaceRef space,
                                     const std::vector<double>& r_schedule);

/// The same over the full l1 ball of the given radius.
Certificate decompose_lattice(int dim, long long radius, const std::vector<double>& r_schedule);

/// Rebuilds a certificate for `targets`, each contained in the closed
/// t-neighborhood of the original family member `assignment[b]`. Every split
/// keeps its structure with parts replaced by closed t-neighborhood
/// intersections and r lowered to r - 2t; leaf bounds grow by 2t. Throws
/// when some split has r <= 2t ("disjointness exhausted") or a containment
/// precondition fails, naming the node.
Certificate weaken_to_subneighborhoods(const Certificate& cert, double t,
                                       const std::vector<std::vector<std::uint32_t>>& targets,
                                       const std::vector<std::size_t>& assignment);

/// A random single-point certificate corruption for negative tests: moves
/// one point between two same-color sub-parts of some split node. The
/// returned path names the mutated node. Retries until the mutation provably
/// breaks the certificate; throws if the certificate offers no such move.
struct Mutation {
  Certificate cert;
  std::string node_path;
};
Mutation move_point_mutation(const Certificate& cert, Rng& rng);

nlohmann::ordered_json certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(const nlohmann::json& j);
nlohmann::ordered_json node_to_json(const CertNode& node);
CertNode node_from_json(const nlohmann::json& j);

/// Graphviz rendering of the certificate tree.
std::string certificate_to_dot(const Certificate& cert);

}  // namespace coarsekit::fdc
