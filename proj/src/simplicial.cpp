#include "coarsekit/simplicial.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

#include "coarsekit/sets.hpp"

namespace coarsekit::rips {

bool SimplicialComplex::has_vertex(std::uint32_t point) const {
  return sets::contains(vertices, point);
}

std::size_t SimplicialComplex::vertex_position(std::uint32_t point) const {
  auto it = std::lower_bound(vertices.begin(), vertices.end(), point);
  if (it == vertices.end() || *it != point) return npos;
  return static_cast<std::size_t>(it - vertices.begin());
}

bool SimplicialComplex::is_simplex(const std::vector<std::uint32_t>& f) const {
  if (f.empty()) return false;
  const std::size_t pos = vertex_position(f[0]);
  if (pos == npos) return false;
  for (std::size_t mi : vertex_to_maximal_[pos]) {
    if (sets::subset(f, maximal[mi])) return true;
  }
  return false;
}

std::vector<std::size_t> SimplicialComplex::cofaces_of(
    const std::vector<std::uint32_t>& f) const {
  std::vector<std::size_t> out;
  if (f.empty()) return out;
  const std::size_t pos = vertex_position(f[0]);
  if (pos == npos) return out;
  for (std::size_t mi : vertex_to_maximal_[pos]) {
    if (sets::subset(f, maximal[mi])) out.push_back(mi);
  }
  return out;
}

bool SimplicialComplex::is_privileged(const std::vector<std::uint32_t>& f) const {
  for (const auto& w : privileged_sets) {
    if (sets::subset(f, w)) return true;
  }
  return false;
}

std::size_t SimplicialComplex::simplex_count() const {
  std::size_t n = 0;
  for (const auto& level : by_dim) n += level.size();
  return n;
}

SimplicialComplex finish_complex(metric::SpaceRef space,
                                 std::vector<std::vector<std::uint32_t>> maximal, int dim_cap,
                                 std::size_t max_simplices) {
  if (dim_cap < 1) throw std::invalid_argument("complex: dim_cap must be at least 1");
  SimplicialComplex k;
  k.space = std::move(space);
  k.dim_cap = dim_cap;

  for (auto& m : maximal) m = sets::normalized(std::move(m));
  std::sort(maximal.begin(), maximal.end());
  maximal.erase(std::unique(maximal.begin(), maximal.end()), maximal.end());
  // Keep only inclusion-maximal simplices (the list is already unique).
  std::vector<std::vector<std::uint32_t>> keep;
  for (std::size_t i = 0; i < maximal.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < maximal.size() && !dominated; ++j) {
      dominated = i != j && sets::subset(maximal[i], maximal[j]);
    }
    if (!dominated) keep.push_back(maximal[i]);
  }
  k.maximal = std::move(keep);

  for (const auto& m : k.maximal) {
    k.vertices.insert(k.vertices.end(), m.begin(), m.end());
    k.dimension = std::max(k.dimension, static_cast<int>(m.size()) - 1);
  }
  k.vertices = sets::normalized(std::move(k.vertices));
  k.capped = k.dimension > dim_cap;

  k.vertex_to_maximal_.assign(k.vertices.size(), {});
  for (std::size_t mi = 0; mi < k.maximal.size(); ++mi) {
    for (std::uint32_t v : k.maximal[mi]) {
      k.vertex_to_maximal_[k.vertex_position(v)].push_back(mi);
    }
  }

  // Enumerate faces up to the cap. Work is bounded by max_simplices counted
  // over raw subset generation, so a capped complex over a huge clique fails
  // fast instead of exploding.
  const int top = std::min(k.dimension, dim_cap);
  k.by_dim.assign(top >= 0 ? static_cast<std::size_t>(top) + 1 : 0, {});
  std::size_t generated = 0;
  for (int d = 0; d <= top; ++d) {
    std::set<std::vector<std::uint32_t>> faces;
    const std::size_t need = static_cast<std::size_t>(d) + 1;
    std::vector<std::uint32_t> cur(need);
    for (const auto& m : k.maximal) {
      if (m.size() < need) continue;
      // All `need`-subsets of m in lexicographic order.
      std::vector<std::size_t> idx(need);
      for (std::size_t i = 0; i < need; ++i) idx[i] = i;
      for (;;) {
        for (std::size_t i = 0; i < need; ++i) cur[i] = m[idx[i]];
        faces.insert(cur);
        if (++generated > max_simplices) {
          std::ostringstream os;
          os << "complex too large: more than " << max_simplices
             << " faces at dimension " << d << "; lower the scale or the dimension cap";
          throw std::runtime_error(os.str());
        }
        // Advance the combination.
        std::size_t i = need;
        while (i > 0 && idx[i - 1] == m.size() - (need - (i - 1))) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < need; ++j) idx[j] = idx[j - 1] + 1;
      }
    }
    k.by_dim[static_cast<std::size_t>(d)].assign(faces.begin(), faces.end());
  }
  return k;
}

namespace {

std::vector<std::vector<std::uint32_t>> skeleton_adjacency(const SimplicialComplex& k) {
  // Positions into k.vertices; edges from all vertex pairs of maximal faces.
  std::vector<std::set<std::uint32_t>> nbr(k.vertices.size());
  for (const auto& m : k.maximal) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      const std::size_t pi = k.vertex_position(m[i]);
      for (std::size_t j = i + 1; j < m.size(); ++j) {
        const std::size_t pj = k.vertex_position(m[j]);
        nbr[pi].insert(static_cast<std::uint32_t>(pj));
        nbr[pj].insert(static_cast<std::uint32_t>(pi));
      }
    }
  }
  std::vector<std::vector<std::uint32_t>> adj(k.vertices.size());
  for (std::size_t i = 0; i < nbr.size(); ++i) adj[i].assign(nbr[i].begin(), nbr[i].end());
  return adj;
}

}  // namespace

std::vector<long long> skeleton_distances_from(const SimplicialComplex& k, std::uint32_t a) {
  const std::size_t start = k.vertex_position(a);
  if (start == SimplicialComplex::npos) {
    throw std::invalid_argument("skeleton_distances_from: not a vertex of the complex");
  }
  const auto adj = skeleton_adjacency(k);
  std::vector<long long> dist(k.vertices.size(), -1);
  std::deque<std::size_t> queue;
  dist[start] = 0;
  queue.push_back(start);
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::uint32_t v : adj[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

metric::ExtDistance skeleton_distance(const SimplicialComplex& k, std::uint32_t a,
                                      std::uint32_t b) {
  const std::size_t pb = k.vertex_position(b);
  if (pb == SimplicialComplex::npos) {
    throw std::invalid_argument("skeleton_distance: not a vertex of the complex");
  }
  const auto dist = skeleton_distances_from(k, a);
  if (dist[pb] < 0) return metric::ExtDistance::infinity();
  return metric::ExtDistance(static_cast<double>(dist[pb]));
}

nlohmann::ordered_json complex_to_json(const SimplicialComplex& k) {
  nlohmann::ordered_json out;
  out["space_label"] = k.space->label();
  out["scale"] = k.scale;
  if (k.relative) {
    out["scale_large"] = k.scale_large;
    nlohmann::ordered_json fam = nlohmann::ordered_json::array();
    for (const auto& w : k.privileged_sets) {
      nlohmann::ordered_json ids = nlohmann::ordered_json::array();
      for (std::uint32_t p : w) ids.push_back(k.space->id(p));
      fam.push_back(std::move(ids));
    }
    out["privileged"] = std::move(fam);
  }
  out["dim_cap"] = k.dim_cap;
  out["dimension"] = k.dimension;
  out["capped"] = k.capped;
  nlohmann::ordered_json simplices = nlohmann::ordered_json::object();
  for (std::size_t d = 0; d < k.by_dim.size(); ++d) {
    nlohmann::ordered_json level = nlohmann::ordered_json::array();
    for (const auto& s : k.by_dim[d]) {
      nlohmann::ordered_json ids = nlohmann::ordered_json::array();
      for (std::uint32_t p : s) ids.push_back(k.space->id(p));
      level.push_back(std::move(ids));
    }
    simplices[std::to_string(d)] = std::move(level);
  }
  out["simplices"] = std::move(simplices);
  return out;
}

std::string complex_to_dot(const SimplicialComplex& k) {
  std::ostringstream os;
  os << "graph skeleton {\n";
  for (std::uint32_t v : k.vertices) {
    os << "  \"" << k.space->id(v) << "\";\n";
  }
  if (k.by_dim.size() > 1) {
    for (const auto& e : k.by_dim[1]) {
      os << "  \"" << k.space->id(e[0]) << "\" -- \"" << k.space->id(e[1]) << "\";\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace coarsekit::rips
