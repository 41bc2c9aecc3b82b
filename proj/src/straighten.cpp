#include "coarsekit/straighten.hpp"

#include <cmath>
#include <stdexcept>

#include "coarsekit/sets.hpp"

namespace coarsekit::rips {

namespace {

using Points = std::vector<BarycentricPoint>;

std::vector<std::uint32_t> minimal_carrier(const BarycentricPoint& a, const BarycentricPoint& b) {
  return sets::unite(a.support, b.support);
}

bool points_equal(const BarycentricPoint& a, const BarycentricPoint& b) {
  if (a.support != b.support) return false;
  for (std::size_t i = 0; i < a.coords.size(); ++i) {
    if (std::abs(a.coords[i] - b.coords[i]) > 1e-12) return false;
  }
  return true;
}

/// Drops degenerate segments and breakpoints whose two carriers are nested.
void normalize(Points& pts) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      if (points_equal(pts[i], pts[i + 1])) {
        // Keep the endpoints; drop an interior copy.
        pts.erase(pts.begin() + static_cast<long>(i + 1 < pts.size() - 1 ? i + 1 : i));
        changed = true;
        break;
      }
    }
    if (changed) continue;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
      const auto left = minimal_carrier(pts[i - 1], pts[i]);
      const auto right = minimal_carrier(pts[i], pts[i + 1]);
      if (sets::subset(left, right) || sets::subset(right, left)) {
        pts.erase(pts.begin() + static_cast<long>(i));
        changed = true;
        break;
      }
    }
  }
}

int dimension_of(const Points& pts) {
  int dim = -1;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    dim = std::max(dim, static_cast<int>(minimal_carrier(pts[i], pts[i + 1]).size()) - 1);
  }
  return dim;
}

double length_of(const Points& pts) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    total += segment_length(pts[i], pts[i + 1]);
  }
  return total;
}

BarycentricPoint project_onto(const std::vector<std::uint32_t>& face,
                              const BarycentricPoint& p, double dropped) {
  // Orthogonal projection onto the affine span of `face` for a point
  // supported on face + one extra vertex with weight `dropped`: every face
  // coordinate gains dropped/|face|, which keeps all of them positive, so the
  // projection lies inside the face.
  const double shift = dropped / static_cast<double>(face.size());
  std::vector<double> coords(face.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < face.size(); ++i) {
    coords[i] = p.coord_of(face[i]) + shift;
    sum += coords[i];
  }
  for (double& c : coords) c /= sum;
  return BarycentricPoint::make(face, std::move(coords));
}

ReplacementRecord replace_segment(Points& pts, std::size_t i) {
  const auto sigma = minimal_carrier(pts[i], pts[i + 1]);
  const int n = static_cast<int>(sigma.size()) - 1;
  const auto absent_left = sets::subtract(sigma, pts[i].support);
  const auto absent_right = sets::subtract(sigma, pts[i + 1].support);
  if (absent_left.empty() || absent_right.empty()) {
    throw std::logic_error("straighten: segment endpoint has full support after normalization");
  }
  // Minimal carriers make the two pools disjoint, so the picks differ.
  const std::uint32_t x_n = absent_left[0];
  const std::uint32_t x_0 = absent_right[0];
  std::vector<std::uint32_t> face =
      sets::subtract(sigma, {std::min(x_0, x_n), std::max(x_0, x_n)});

  const double a0 = pts[i].coord_of(x_0);
  const double bn = pts[i + 1].coord_of(x_n);
  const BarycentricPoint left_proj = project_onto(face, pts[i], a0);
  const BarycentricPoint right_proj = project_onto(face, pts[i + 1], bn);

  ReplacementRecord rec;
  rec.segment = i;
  rec.dim = n;
  rec.seg_len = segment_length(pts[i], pts[i + 1]);
  rec.left_len = segment_length(pts[i], left_proj);
  rec.mid_len = segment_length(left_proj, right_proj);
  rec.right_len = segment_length(right_proj, pts[i + 1]);
  rec.dropped_first = a0;
  rec.dropped_last = bn;

  pts.insert(pts.begin() + static_cast<long>(i + 1), {left_proj, right_proj});
  return rec;
}

std::size_t pick_segment(const Points& pts, int dim) {
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (static_cast<int>(minimal_carrier(pts[i], pts[i + 1]).size()) - 1 == dim) return i;
  }
  throw std::logic_error("straighten: no segment of the reported dimension");
}

void require_vertex_endpoints(const Points& pts) {
  if (!pts.front().is_vertex() || !pts.back().is_vertex()) {
    throw std::invalid_argument("straighten: path endpoints must be vertices");
  }
}

}  // namespace

StraightenStep straighten_step(const PLPath& path) {
  Points pts = path.points;
  require_vertex_endpoints(pts);
  normalize(pts);
  const int dim = dimension_of(pts);
  if (dim <= 1) throw std::runtime_error("straighten_step: already 1-dimensional");
  StraightenStep out;
  out.record = replace_segment(pts, pick_segment(pts, dim));
  out.path = PLPath::make(*path.complex, std::move(pts));
  return out;
}

StraightenOutcome straighten_full(const PLPath& path) {
  StraightenOutcome out;
  out.input_length = path_length(path);

  Points pts = path.points;
  require_vertex_endpoints(pts);
  normalize(pts);
  out.start_dim = dimension_of(pts);
  out.normalized_length = length_of(pts);

  int dim = out.start_dim;
  std::size_t guard = 0;
  while (dim > 1) {
    if (++guard > 200000) throw std::logic_error("straighten_full: did not terminate");
    out.replacements.push_back(replace_segment(pts, pick_segment(pts, dim)));
    normalize(pts);
    dim = dimension_of(pts);
  }

  // A 1-dimensional normalized path has every breakpoint at a vertex: an
  // interior point of an edge would force equal carriers on both sides.
  for (const auto& p : pts) {
    if (!p.is_vertex()) throw std::logic_error("straighten_full: non-vertex point at dimension 1");
  }
  out.edge_count = pts.size() - 1;
  out.final_length = static_cast<double>(out.edge_count);
  out.path = PLPath::make(*path.complex, std::move(pts));
  return out;
}

}  // namespace coarsekit::rips
