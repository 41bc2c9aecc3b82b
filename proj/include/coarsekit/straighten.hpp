#pragma once

#include "coarsekit/barycentric.hpp"

namespace coarsekit::rips {

/// One projection replacement, with the measured lengths needed to audit the
/// geometric bounds: left/right insertions are each at most sqrt(2) times the
/// replaced segment, the middle projection never exceeds it, and the three
/// together stay within (2*sqrt(2)+1) times it.
struct ReplacementRecord {
  std::size_t segment = 0;  // index in the path at the time of replacement
  int dim = 0;              // carrier simplex dimension n
  double seg_len = 0.0;     // replaced segment length
  double left_len = 0.0;    // endpoint to its projection
  double mid_len = 0.0;     // between the two projections
  double right_len = 0.0;   // projection to the other endpoint
  double dropped_first = 0.0;  // barycentric weight removed from the left point
  double dropped_last = 0.0;   // barycentric weight removed from the right point
};

struct StraightenStep {
  PLPath path;
  ReplacementRecord record;
};

/// Normalizes the path (minimal carriers, degenerate segments dropped,
/// breakpoints with nested carriers removed), then performs one projection
/// replacement at the earliest maximal-dimension segment.
///
/// The replaced segment's carrier <x_0, ..., x_n> is reordered
/// deterministically: among vertices absent from the left point the smallest
/// becomes x_n, among those absent from the right point the smallest becomes
/// x_0 (the two pools are disjoint for minimal carriers). Both endpoints are
/// projected orthogonally onto the affine span of <x_1, ..., x_{n-1}>, which
/// they land inside, and the projections are spliced in between them.
///
/// Path endpoints must be vertices. Errors with "already 1-dimensional" when
/// no segment has dimension two or more after normalization.
StraightenStep straighten_step(const PLPath& path);

struct StraightenOutcome {
  PLPath path;  // final path: a walk along edges, every breakpoint a vertex
  std::vector<ReplacementRecord> replacements;
  int start_dim = -1;             // path dimension after initial normalization
  double input_length = 0.0;      // length of the caller's path
  double normalized_length = 0.0; // after initial normalization (never larger)
  double final_length = 0.0;      // equals edge_count
  std::size_t edge_count = 0;
};

/// Repeats straighten_step, highest dimension first (earliest index on ties),
/// until the path runs along the 1-skeleton. Length inflates by at most
/// (2*sqrt(2)+1) per dimension shed, so
///   final_length <= (2*sqrt(2)+1)^(start_dim - 1) * normalized_length
/// whenever start_dim >= 1, and the endpoint distance in the underlying space
/// is at most scale * final_length.
StraightenOutcome straighten_full(const PLPath& path);

}  // namespace coarsekit::rips
