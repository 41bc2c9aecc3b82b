#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "coarsekit/metric_space.hpp"
#include "coarsekit/rips.hpp"

namespace coarsekit::seq {

/// Sequence of subspaces of a common ambient space, one per level, each
/// covered by an indexed family of parts. Level r's subspace is the union of
/// its parts.
struct DecomposedSequence {
  metric::SpaceRef space;
  /// levels[r][a]: sorted point sets; the union over a is the level's subspace.
  std::vector<std::vector<std::vector<std::uint32_t>>> levels;

  std::size_t level_count() const { return levels.size(); }
  std::vector<std::uint32_t> level_union(std::size_t r) const;
};

/// Two-color cover of a decomposed sequence: per level and part index,
/// u and v have the same shape as z and satisfy U ∪ V = Z (overlap allowed).
struct SequenceCover {
  DecomposedSequence z, u, v;
};

/// Shape and cover validation; throws on mismatch.
void validate_cover(const SequenceCover& cover);

/// Per-(level, part) Rips complexes at the level's scale. The sequence
/// complex is their disjoint union: points are tagged by (level, part), and
/// distances across pieces are infinite, so the pieces are exactly the
/// construction's components at the level of parts.
struct SequencePiece {
  std::size_t level = 0;
  std::size_t part = 0;
  rips::SimplicialComplex complex;
};

struct SequenceComplex {
  std::vector<SequencePiece> pieces;
  std::size_t piece_count() const { return pieces.size(); }
  std::size_t simplex_count() const;
};

/// Throws when the schedule is shorter than the sequence or decreasing.
SequenceComplex build_sequence_rips(const DecomposedSequence& z,
                                    const std::vector<double>& s_schedule, int dim_cap = 8);

/// The covering condition of the Mayer-Vietoris argument: for every simplex
/// of every piece complex of Z, the first vertex in sorted order must lie in
/// U or V for the same (level, part). Since every vertex is itself the first
/// vertex of a 0-simplex, this holds exactly when U ∪ V covers Z, and any
/// orphaned point is caught even on dimension-capped complexes.
struct CoverCheck {
  bool ok = true;
  nlohmann::ordered_json witness;  // level, part, simplex, vertex on failure
  std::size_t simplices_checked = 0;
};

CoverCheck check_cover(const SequenceCover& cover, const std::vector<double>& s_schedule,
                       int dim_cap = 8);

/// Refinements of a cover's colors into sub-parts, aligned with the cover:
/// u_sub[r][a] lists the sub-parts of u.levels[r][a], likewise v_sub.
struct RefinedCover {
  SequenceCover cover;
  std::vector<std::vector<std::vector<std::vector<std::uint32_t>>>> u_sub, v_sub;
};

/// Builds the pairwise intersection families
///   W[r][a] = { N_T(U_sub) ∩ N_T(V_sub) ∩ Z[r][a] }
/// with closed neighborhoods of radius T = T_schedule[r]. Empty intersections
/// are omitted and counted. Alongside, a per-level refinement report compares
/// the color gaps (minimum distance between same-color sub-parts enlarged by
/// their intersection sets) against the threshold (T+1) * s * C.
struct IntersectionFamilies {
  /// families[r][a]: nonempty intersection sets, U-major then V order.
  std::vector<std::vector<std::vector<std::vector<std::uint32_t>>>> families;
  std::size_t omitted_empty = 0;
  nlohmann::ordered_json refinement_report;
};

IntersectionFamilies intersection_families(const RefinedCover& refined,
                                           const std::vector<double>& t_schedule,
                                           const std::vector<double>& s_schedule,
                                           const std::vector<double>& c_schedule);

nlohmann::ordered_json cover_to_json(const SequenceCover& cover);
SequenceCover cover_from_json(const nlohmann::json& j);
nlohmann::ordered_json refined_cover_to_json(const RefinedCover& refined);
RefinedCover refined_cover_from_json(const nlohmann::json& j);

}  // namespace coarsekit::seq
