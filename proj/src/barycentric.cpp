#include "coarsekit/barycentric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "coarsekit/sets.hpp"

namespace coarsekit::rips {

BarycentricPoint BarycentricPoint::vertex(std::uint32_t v) {
  return BarycentricPoint{{v}, {1.0}};
}

BarycentricPoint BarycentricPoint::make(std::vector<std::uint32_t> support,
                                        std::vector<double> coords) {
  if (support.empty() || support.size() != coords.size()) {
    throw std::invalid_argument("BarycentricPoint: support and coords must align");
  }
  if (!sets::is_normalized(support)) {
    throw std::invalid_argument("BarycentricPoint: support must be sorted and unique");
  }
  double sum = 0.0;
  for (double c : coords) {
    if (!(c > 0.0)) throw std::invalid_argument("BarycentricPoint: coords must be positive");
    sum += c;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("BarycentricPoint: coords must sum to one");
  }
  return BarycentricPoint{std::move(support), std::move(coords)};
}

double BarycentricPoint::coord_of(std::uint32_t v) const {
  auto it = std::lower_bound(support.begin(), support.end(), v);
  if (it == support.end() || *it != v) return 0.0;
  return coords[static_cast<std::size_t>(it - support.begin())];
}

double segment_length(const BarycentricPoint& a, const BarycentricPoint& b) {
  // Merge the two sorted supports; absent coordinates are zero. With vertices
  // at (sqrt(2)/2) e_i the squared length is half the coordinate-space one.
  double sq = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.support.size() || j < b.support.size()) {
    double av = 0.0, bv = 0.0;
    std::uint32_t va = i < a.support.size() ? a.support[i] : 0;
    std::uint32_t vb = j < b.support.size() ? b.support[j] : 0;
    if (j >= b.support.size() || (i < a.support.size() && va < vb)) {
      av = a.coords[i++];
    } else if (i >= a.support.size() || vb < va) {
      bv = b.coords[j++];
    } else {
      av = a.coords[i++];
      bv = b.coords[j++];
    }
    const double d = av - bv;
    sq += d * d;
  }
  return std::sqrt(sq / 2.0);
}

PLPath PLPath::make(const SimplicialComplex& k, std::vector<BarycentricPoint> points,
                    std::vector<std::vector<std::uint32_t>> carriers) {
  if (points.empty()) throw std::invalid_argument("PLPath: needs at least one point");
  const bool implicit = carriers.empty();
  if (!implicit && carriers.size() != points.size() - 1) {
    throw std::invalid_argument("PLPath: carrier count must be point count minus one");
  }
  if (implicit) carriers.resize(points.size() - 1);
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const auto minimal = sets::unite(points[i].support, points[i + 1].support);
    if (implicit) {
      carriers[i] = minimal;
    } else {
      carriers[i] = sets::normalized(std::move(carriers[i]));
      if (!sets::subset(minimal, carriers[i])) {
        throw std::invalid_argument("PLPath: carrier does not contain both endpoints");
      }
    }
    if (!k.is_simplex(carriers[i])) {
      throw std::invalid_argument("PLPath: consecutive points do not share a simplex");
    }
  }
  if (points.size() == 1 && !k.is_simplex(points[0].support)) {
    throw std::invalid_argument("PLPath: point does not lie in the complex");
  }
  PLPath p;
  p.complex = &k;
  p.points = std::move(points);
  p.carriers = std::move(carriers);
  return p;
}

double path_length(const PLPath& path) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
    total += segment_length(path.points[i], path.points[i + 1]);
  }
  return total;
}

int path_dimension(const PLPath& path) {
  int dim = -1;
  for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
    const auto minimal = sets::unite(path.points[i].support, path.points[i + 1].support);
    dim = std::max(dim, static_cast<int>(minimal.size()) - 1);
  }
  return dim;
}

nlohmann::ordered_json path_to_json(const PLPath& path) {
  nlohmann::ordered_json pts = nlohmann::ordered_json::array();
  for (const auto& p : path.points) {
    nlohmann::ordered_json ids = nlohmann::ordered_json::array();
    nlohmann::ordered_json cs = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < p.support.size(); ++i) {
      ids.push_back(path.complex->space->id(p.support[i]));
      cs.push_back(p.coords[i]);
    }
    pts.push_back({{"support", std::move(ids)}, {"coords", std::move(cs)}});
  }
  return {{"points", std::move(pts)}};
}

}  // namespace coarsekit::rips
