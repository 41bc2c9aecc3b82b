#include "coarsekit/rips.hpp"

#include <cmath>
#include <stdexcept>

#include "coarsekit/sets.hpp"

namespace coarsekit::rips {

namespace {

/// Maximal cliques of the graph on `points` with edges at distance <= s,
/// via Bron-Kerbosch with pivoting. Deterministic: candidate sets are kept
/// sorted and the pivot is the first best-degree vertex.
class CliqueEnumerator {
public:
  CliqueEnumerator(const metric::MetricSpace& space, std::vector<std::uint32_t> points, double s)
      : space_(space), points_(std::move(points)), s_(s) {
    const std::size_t n = points_.size();
    adj_.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (space_.dist_value(points_[i], points_[j]) <= s_) {
          adj_[i].push_back(static_cast<std::uint32_t>(j));
          adj_[j].push_back(static_cast<std::uint32_t>(i));
        }
      }
    }
    for (auto& a : adj_) std::sort(a.begin(), a.end());
  }

  std::vector<std::vector<std::uint32_t>> run() {
    std::vector<std::uint32_t> r, p(points_.size()), x;
    for (std::uint32_t i = 0; i < p.size(); ++i) p[i] = i;
    expand(r, p, x);
    return std::move(out_);
  }

private:
  void expand(std::vector<std::uint32_t>& r, std::vector<std::uint32_t> p,
              std::vector<std::uint32_t> x) {
    if (p.empty() && x.empty()) {
      if (!r.empty()) {
        std::vector<std::uint32_t> clique;
        clique.reserve(r.size());
        for (std::uint32_t local : r) clique.push_back(points_[local]);
        out_.push_back(sets::normalized(std::move(clique)));
      }
      return;
    }
    // Pivot: vertex of p ∪ x with the most neighbors in p.
    std::uint32_t pivot = 0;
    std::size_t best = static_cast<std::size_t>(-1);
    for (const auto* side : {&p, &x}) {
      for (std::uint32_t u : *side) {
        const std::size_t deg = sets::intersect(adj_[u], p).size();
        if (best == static_cast<std::size_t>(-1) || deg > best) {
          best = deg;
          pivot = u;
        }
      }
    }
    const std::vector<std::uint32_t> candidates = sets::subtract(p, adj_[pivot]);
    for (std::uint32_t v : candidates) {
      r.push_back(v);
      expand(r, sets::intersect(p, adj_[v]), sets::intersect(x, adj_[v]));
      r.pop_back();
      p = sets::subtract(p, {v});
      x = sets::unite(x, {v});
    }
  }

  const metric::MetricSpace& space_;
  std::vector<std::uint32_t> points_;
  double s_;
  std::vector<std::vector<std::uint32_t>> adj_;
  std::vector<std::vector<std::uint32_t>> out_;
};

void require_scale(double s, const char* who) {
  if (std::isnan(s) || std::isinf(s) || s <= 0.0) {
    throw std::invalid_argument(std::string(who) + ": scale must be finite and positive");
  }
}

}  // namespace

SimplicialComplex build_rips(metric::SpaceRef space, const std::vector<std::uint32_t>& points,
                             double s, int dim_cap, std::size_t max_simplices) {
  require_scale(s, "build_rips");
  if (!space) throw std::invalid_argument("build_rips: null space");
  auto pts = sets::normalized(points);
  if (!pts.empty() && pts.back() >= space->size()) {
    throw std::out_of_range("build_rips: point index out of range");
  }
  auto cliques = CliqueEnumerator(*space, pts, s).run();
  auto k = finish_complex(std::move(space), std::move(cliques), dim_cap, max_simplices);
  k.scale = s;
  return k;
}

SimplicialComplex build_rips(metric::SpaceRef space, double s, int dim_cap,
                             std::size_t max_simplices) {
  if (!space) throw std::invalid_argument("build_rips: null space");
  std::vector<std::uint32_t> all(space->size());
  for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
  return build_rips(std::move(space), all, s, dim_cap, max_simplices);
}

SimplicialComplex build_relative_rips(metric::SpaceRef space,
                                      const std::vector<std::uint32_t>& z,
                                      const std::vector<std::vector<std::uint32_t>>& w_family,
                                      double s, double s_large, int dim_cap,
                                      std::size_t max_simplices) {
  require_scale(s, "build_relative_rips");
  require_scale(s_large, "build_relative_rips");
  if (s > s_large) {
    throw std::invalid_argument("build_relative_rips: requires s <= s_large");
  }
  if (!space) throw std::invalid_argument("build_relative_rips: null space");

  auto zz = sets::normalized(z);
  if (!zz.empty() && zz.back() >= space->size()) {
    throw std::out_of_range("build_relative_rips: point index out of range");
  }
  auto cliques = CliqueEnumerator(*space, zz, s).run();
  std::vector<std::vector<std::uint32_t>> privileged;
  privileged.reserve(w_family.size());
  for (const auto& w : w_family) {
    auto ww = sets::normalized(w);
    if (!ww.empty() && ww.back() >= space->size()) {
      throw std::out_of_range("build_relative_rips: family point index out of range");
    }
    auto extra = CliqueEnumerator(*space, ww, s_large).run();
    cliques.insert(cliques.end(), extra.begin(), extra.end());
    privileged.push_back(std::move(ww));
  }
  auto k = finish_complex(std::move(space), std::move(cliques), dim_cap, max_simplices);
  k.scale = s;
  k.scale_large = s_large;
  k.relative = true;
  k.privileged_sets = std::move(privileged);
  return k;
}

double comparison_constant(int dimension) {
  if (dimension < 0) throw std::invalid_argument("comparison_constant: empty complex");
  if (dimension == 0) return 1.0;
  return std::pow(2.0 * std::sqrt(2.0) + 1.0, dimension - 1);
}

double rips_constant(const SimplicialComplex& k) {
  if (k.capped) {
    throw std::runtime_error(
        "rips_constant: dimension uncertain, face enumeration was capped below the true "
        "dimension; rebuild with a larger dim_cap");
  }
  return comparison_constant(k.dimension);
}

}  // namespace coarsekit::rips
