#include "coarsekit/path_sampler.hpp"

#include <algorithm>
#include <stdexcept>

#include "coarsekit/sets.hpp"

namespace coarsekit::rips {

namespace {

// A random simplex through the current support: pick a maximal coface, then
// keep a random superset of the support inside it, respecting the dim cap.
std::vector<std::uint32_t> widen_carrier(const SimplicialComplex& k,
                                         const std::vector<std::uint32_t>& support, Rng& rng,
                                         double widen) {
  const auto cofaces = k.cofaces_of(support);
  if (cofaces.empty()) throw std::invalid_argument("walk support is not a simplex");
  const auto& big = k.maximal[cofaces[rng.index(cofaces.size())]];

  std::vector<std::uint32_t> extras;
  extras.reserve(big.size());
  for (std::uint32_t v : big) {
    if (!sets::contains(support, v)) extras.push_back(v);
  }
  rng.shuffle(extras);

  const std::size_t cap = static_cast<std::size_t>(k.dim_cap) + 1;
  std::vector<std::uint32_t> carrier = support;
  for (std::uint32_t v : extras) {
    if (carrier.size() >= cap) break;
    if (rng.chance(widen)) carrier.push_back(v);
  }
  std::sort(carrier.begin(), carrier.end());
  return carrier;
}

BarycentricPoint random_point_of(const std::vector<std::uint32_t>& carrier, Rng& rng) {
  std::vector<double> coords(carrier.size());
  double total = 0.0;
  for (double& c : coords) {
    c = 0.05 + rng.next_unit();
    total += c;
  }
  for (double& c : coords) c /= total;
  return BarycentricPoint::make(carrier, std::move(coords));
}

BarycentricPoint propose_step(const SimplicialComplex& k, const BarycentricPoint& p, Rng& rng,
                              const WalkParams& params) {
  const auto carrier = widen_carrier(k, p.support, rng, params.widen);
  if (rng.chance(params.vertex_snap)) {
    // Prefer a vertex the current point does not touch: a snap inside the
    // support makes the two segments around it nested, so normalization
    // would erase the breakpoint again.
    std::vector<std::uint32_t> fresh;
    for (std::uint32_t v : carrier) {
      if (!sets::contains(p.support, v)) fresh.push_back(v);
    }
    const auto& pool = fresh.empty() ? carrier : fresh;
    return BarycentricPoint::vertex(pool[rng.index(pool.size())]);
  }
  // Land on a random face of the carrier rather than its full interior: a
  // support that keeps every vertex of the previous point swallows it when
  // the path is normalized, so faces that drop some vertices are what let
  // consecutive segments sit in genuinely different simplices.
  std::vector<std::uint32_t> face;
  face.reserve(carrier.size());
  for (std::uint32_t v : carrier) {
    if (rng.chance(0.6)) face.push_back(v);
  }
  if (face.empty()) face.push_back(carrier[rng.index(carrier.size())]);
  return random_point_of(face, rng);
}

// Any point of a simplex is within one of each of its vertices, so snapping
// inside the current support always costs at most one unit of length.
BarycentricPoint snap_to_vertex(const BarycentricPoint& p, Rng& rng) {
  return BarycentricPoint::vertex(p.support[rng.index(p.support.size())]);
}

}  // namespace

PLPath random_vertex_walk(const SimplicialComplex& k, std::uint32_t start, Rng& rng,
                          const WalkParams& params) {
  std::vector<BarycentricPoint> points;
  points.push_back(BarycentricPoint::vertex(start));
  for (int i = 0; i < params.steps; ++i) {
    points.push_back(propose_step(k, points.back(), rng, params));
  }
  if (!points.back().is_vertex()) points.push_back(snap_to_vertex(points.back(), rng));
  return PLPath::make(k, std::move(points));
}

PLPath random_budget_walk(const SimplicialComplex& k, std::uint32_t start, double budget,
                          Rng& rng, const WalkParams& params) {
  if (budget < 1.0) throw std::invalid_argument("walk budget must be at least 1");
  std::vector<BarycentricPoint> points;
  points.push_back(BarycentricPoint::vertex(start));
  double used = 0.0;
  for (int i = 0; i < params.steps; ++i) {
    BarycentricPoint q = propose_step(k, points.back(), rng, params);
    const double seg = segment_length(points.back(), q);
    // Reserve one unit for the final vertex snap.
    if (used + seg + 1.0 > budget) continue;
    used += seg;
    points.push_back(std::move(q));
  }
  if (!points.back().is_vertex()) points.push_back(snap_to_vertex(points.back(), rng));
  return PLPath::make(k, std::move(points));
}

}  // namespace coarsekit::rips
