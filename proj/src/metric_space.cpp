#include "coarsekit/metric_space.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "coarsekit/rng.hpp"
#include "coarsekit/sets.hpp"

namespace coarsekit::metric {

namespace {

[[noreturn]] void reject(const std::string& label, const std::string& what) {
  throw std::invalid_argument("metric space '" + label + "': " + what);
}

}  // namespace

void MetricSpace::index_ids() {
  id_index_.reserve(ids_.size());
  for (std::uint32_t i = 0; i < ids_.size(); ++i) {
    auto [it, fresh] = id_index_.emplace(ids_[i], i);
    (void)it;
    if (!fresh) reject(label_, "duplicate point id '" + ids_[i] + "'");
  }
}

void MetricSpace::validate_matrix() const {
  const std::size_t n = ids_.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = matrix_[i * n + j];
      if (std::isnan(v) || v < 0.0) {
        reject(label_, "distance (" + ids_[i] + ", " + ids_[j] + ") is negative or NaN");
      }
      if (i == j && v != 0.0) {
        reject(label_, "nonzero self-distance at '" + ids_[i] + "'");
      }
      if (i != j && v == 0.0) {
        reject(label_, "zero distance between distinct points '" + ids_[i] + "' and '" +
                           ids_[j] + "'");
      }
      if (matrix_[j * n + i] != v) {
        reject(label_, "asymmetric distances between '" + ids_[i] + "' and '" + ids_[j] + "'");
      }
    }
  }
  // Sums of exact distances can drift by a few ulps (e.g. 0.9 + 1.07), so the
  // triangle check tolerates roundoff noise; genuine violations are far larger.
  constexpr double kTriangleSlack = 1e-9;
  auto check_triple = [&](std::size_t i, std::size_t j, std::size_t k) {
    // Infinity absorbs on the right-hand side, so the comparison is safe.
    if (matrix_[i * n + k] > matrix_[i * n + j] + matrix_[j * n + k] + kTriangleSlack) {
      reject(label_, "triangle inequality fails for ('" + ids_[i] + "', '" + ids_[j] + "', '" +
                         ids_[k] + "')");
    }
  };
  if (n <= 2000) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double dij = matrix_[i * n + j];
        for (std::size_t k = 0; k < n; ++k) {
          if (matrix_[i * n + k] > dij + matrix_[j * n + k] + kTriangleSlack) check_triple(i, j, k);
        }
      }
    }
  } else {
    Rng rng(0xC0A125EDULL);
    for (int t = 0; t < 2'000'000; ++t) {
      check_triple(rng.index(n), rng.index(n), rng.index(n));
    }
  }
}

SpaceRef MetricSpace::from_matrix(std::string label, std::vector<std::string> ids,
                                  std::vector<std::vector<double>> rows) {
  auto sp = std::shared_ptr<MetricSpace>(new MetricSpace());
  sp->label_ = std::move(label);
  sp->ids_ = std::move(ids);
  sp->backend_ = Backend::Matrix;
  const std::size_t n = sp->ids_.size();
  if (rows.size() != n) reject(sp->label_, "matrix row count does not match point count");
  sp->matrix_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) reject(sp->label_, "matrix is not square");
    for (std::size_t j = 0; j < n; ++j) sp->matrix_[i * n + j] = rows[i][j];
  }
  sp->index_ids();
  sp->validate_matrix();
  return sp;
}

std::string MetricSpace::lattice_id(const std::vector<long long>& p) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) os << ',';
    os << p[i];
  }
  os << ')';
  return os.str();
}

SpaceRef MetricSpace::l1_lattice_ball(int dim, long long radius) {
  if (dim < 0) throw std::invalid_argument("l1_lattice_ball: dimension must be nonnegative");
  if (radius < 0) throw std::invalid_argument("l1_lattice_ball: radius must be nonnegative");
  std::vector<std::vector<long long>> pts;
  std::vector<long long> cur(static_cast<std::size_t>(dim), 0);
  // Lexicographic enumeration of all vectors with |x|_1 <= radius.
  auto rec = [&](auto&& self, int coord, long long budget) -> void {
    if (coord == dim) {
      pts.push_back(cur);
      return;
    }
    for (long long v = -budget; v <= budget; ++v) {
      cur[static_cast<std::size_t>(coord)] = v;
      self(self, coord + 1, budget - std::llabs(v));
    }
  };
  rec(rec, 0, radius);
  std::ostringstream label;
  label << "l1-ball-dim" << dim << "-r" << radius;
  return from_lattice_points(label.str(), std::move(pts));
}

SpaceRef MetricSpace::from_lattice_points(std::string label,
                                          std::vector<std::vector<long long>> points) {
  auto sp = std::shared_ptr<MetricSpace>(new MetricSpace());
  sp->label_ = std::move(label);
  sp->backend_ = Backend::L1;
  const std::size_t n = points.size();
  if (n == 0) reject(sp->label_, "lattice space must contain at least one point");
  sp->lattice_dim_ = static_cast<int>(points[0].size());
  sp->coords_.reserve(n * points[0].size());
  sp->ids_.reserve(n);
  for (const auto& p : points) {
    if (static_cast<int>(p.size()) != sp->lattice_dim_) {
      reject(sp->label_, "lattice points have mixed dimensions");
    }
    sp->ids_.push_back(lattice_id(p));
    sp->coords_.insert(sp->coords_.end(), p.begin(), p.end());
  }
  sp->index_ids();
  return sp;
}

ExtDistance MetricSpace::dist(std::uint32_t i, std::uint32_t j) const {
  return ExtDistance(dist_value(i, j));
}

double MetricSpace::dist_value(std::uint32_t i, std::uint32_t j) const {
  const std::size_t n = ids_.size();
  if (i >= n || j >= n) throw std::out_of_range("MetricSpace::dist: point index out of range");
  if (backend_ == Backend::Matrix) return matrix_[static_cast<std::size_t>(i) * n + j];
  const long long* a = coords(i);
  const long long* b = coords(j);
  long long s = 0;
  for (int k = 0; k < lattice_dim_; ++k) s += std::llabs(a[k] - b[k]);
  return static_cast<double>(s);
}

std::optional<std::uint32_t> MetricSpace::index_of(std::string_view id) const {
  auto it = id_index_.find(std::string(id));
  if (it == id_index_.end()) return std::nullopt;
  return it->second;
}

const long long* MetricSpace::coords(std::uint32_t i) const {
  if (backend_ != Backend::L1) {
    throw std::logic_error("MetricSpace::coords: space has no lattice coordinates");
  }
  return coords_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(lattice_dim_);
}

Subspace Subspace::of(SpaceRef parent, std::vector<std::uint32_t> members) {
  if (!parent) throw std::invalid_argument("Subspace: null parent");
  members = sets::normalized(std::move(members));
  if (!members.empty() && members.back() >= parent->size()) {
    throw std::out_of_range("Subspace: member index out of range");
  }
  return Subspace{std::move(parent), std::move(members)};
}

Subspace Subspace::whole(SpaceRef parent) {
  std::vector<std::uint32_t> all(parent->size());
  for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
  return Subspace{std::move(parent), std::move(all)};
}

MetricFamily MetricFamily::of(SpaceRef parent, std::vector<std::vector<std::uint32_t>> sets_in) {
  if (!parent) throw std::invalid_argument("MetricFamily: null parent");
  for (auto& s : sets_in) {
    s = sets::normalized(std::move(s));
    if (!s.empty() && s.back() >= parent->size()) {
      throw std::out_of_range("MetricFamily: member index out of range");
    }
  }
  return MetricFamily{std::move(parent), std::move(sets_in)};
}

namespace {

void require_radius(double r, const char* who) {
  if (std::isnan(r) || std::isinf(r) || r < 0.0) {
    throw std::invalid_argument(std::string(who) + ": radius must be finite and nonnegative");
  }
}

}  // namespace

std::vector<std::uint32_t> neighborhood(const MetricSpace& space,
                                        const std::vector<std::uint32_t>& z, double r) {
  require_radius(r, "neighborhood");
  std::vector<std::uint32_t> out;
  if (z.empty() || r == 0.0) return out;
  for (std::uint32_t y = 0; y < space.size(); ++y) {
    for (std::uint32_t zi : z) {
      if (space.dist_value(y, zi) < r) {
        out.push_back(y);
        break;
      }
    }
  }
  return out;
}

std::vector<std::uint32_t> closed_neighborhood(const MetricSpace& space,
                                               const std::vector<std::uint32_t>& z, double r) {
  require_radius(r, "closed_neighborhood");
  std::vector<std::uint32_t> out;
  if (z.empty()) return out;
  for (std::uint32_t y = 0; y < space.size(); ++y) {
    for (std::uint32_t zi : z) {
      if (space.dist_value(y, zi) <= r) {
        out.push_back(y);
        break;
      }
    }
  }
  return out;
}

std::vector<std::uint32_t> ball(const MetricSpace& space, std::uint32_t x, double r) {
  if (x >= space.size()) throw std::out_of_range("ball: center index out of range");
  return neighborhood(space, {x}, r);
}

std::size_t growth_bound(const MetricSpace& space, double r) {
  require_radius(r, "growth_bound");
  std::size_t best = 0;
  for (std::uint32_t x = 0; x < space.size(); ++x) {
    std::size_t count = 0;
    for (std::uint32_t y = 0; y < space.size(); ++y) {
      if (space.dist_value(x, y) <= r) ++count;
    }
    best = std::max(best, count);
  }
  return best;
}

ExtDistance min_set_distance(const MetricSpace& space, const std::vector<std::uint32_t>& a,
                             const std::vector<std::uint32_t>& b) {
  if (a.empty() || b.empty()) return ExtDistance::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t x : a) {
    for (std::uint32_t y : b) {
      best = std::min(best, space.dist_value(x, y));
    }
  }
  return ExtDistance(best);
}

ExtDistance diameter(const MetricSpace& space, const std::vector<std::uint32_t>& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      best = std::max(best, space.dist_value(a[i], a[j]));
    }
  }
  return ExtDistance(best);
}

DisjointnessReport is_r_disjoint(const MetricFamily& family, double r) {
  require_radius(r, "is_r_disjoint");
  DisjointnessReport rep;
  const auto& sp = *family.parent;
  for (std::size_t a = 0; a < family.sets.size(); ++a) {
    for (std::size_t b = a + 1; b < family.sets.size(); ++b) {
      for (std::uint32_t x : family.sets[a]) {
        for (std::uint32_t y : family.sets[b]) {
          if (sp.dist_value(x, y) <= r) {
            rep.disjoint = false;
            rep.set_a = a;
            rep.set_b = b;
            rep.point_a = x;
            rep.point_b = y;
            rep.distance = sp.dist_value(x, y);
            return rep;
          }
        }
      }
    }
  }
  return rep;
}

}  // namespace coarsekit::metric
