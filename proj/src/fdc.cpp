#include "coarsekit/fdc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "coarsekit/sets.hpp"
#include "coarsekit/space_io.hpp"

namespace coarsekit::fdc {

namespace {

constexpr double kTolerance = 1e-9;

nlohmann::ordered_json id_list(const metric::MetricSpace& space,
                               const std::vector<std::uint32_t>& points, std::size_t limit) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < points.size() && i < limit; ++i) {
    out.push_back(space.id(points[i]));
  }
  return out;
}

struct DiameterWitness {
  double value = 0.0;
  std::uint32_t a = 0, b = 0;
};

DiameterWitness widest_pair(const metric::MetricSpace& space,
                            const std::vector<std::uint32_t>& set) {
  DiameterWitness w;
  if (!set.empty()) w.a = w.b = set.front();
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      const double d = space.dist_value(set[i], set[j]);
      if (d > w.value) w = {d, set[i], set[j]};
    }
  }
  return w;
}

}  // namespace

CertNode CertNode::leaf(double bound) {
  CertNode n;
  n.kind = Kind::Leaf;
  n.bound = bound;
  return n;
}

CertNode CertNode::split(double r, std::vector<Part> parts, CertNode u_child, CertNode v_child) {
  CertNode n;
  n.kind = Kind::Split;
  n.r = r;
  n.parts = std::move(parts);
  n.children.push_back(std::move(u_child));
  n.children.push_back(std::move(v_child));
  return n;
}

int certificate_depth(const CertNode& node) {
  if (node.kind == CertNode::Kind::Leaf) return 0;
  int deepest = 0;
  for (const auto& c : node.children) deepest = std::max(deepest, certificate_depth(c));
  return 1 + deepest;
}

namespace {

VerifyResult violation(std::string path, std::string clause, nlohmann::ordered_json witness) {
  VerifyResult v;
  v.ok = false;
  v.node_path = std::move(path);
  v.clause = std::move(clause);
  v.witness = std::move(witness);
  return v;
}

VerifyResult verify_node(const metric::SpaceRef& space, const CertNode& node,
                         const std::vector<std::vector<std::uint32_t>>& family,
                         const std::string& path) {
  if (node.kind == CertNode::Kind::Leaf) {
    for (std::size_t a = 0; a < family.size(); ++a) {
      const auto w = widest_pair(*space, family[a]);
      if (w.value > node.bound + kTolerance) {
        return violation(path, "leaf-diameter",
                         {{"member", a},
                          {"pointA", space->id(w.a)},
                          {"pointB", space->id(w.b)},
                          {"distance", w.value},
                          {"bound", node.bound}});
      }
    }
    return {};
  }

  if (node.children.size() != 2) {
    return violation(path, "missing-child", {{"children", node.children.size()}});
  }
  if (node.parts.size() != family.size()) {
    return violation(path, "arity",
                     {{"parts", node.parts.size()}, {"familyMembers", family.size()}});
  }
  if (!(node.r > 0.0)) {
    return violation(path, "radius", {{"r", node.r}});
  }

  for (std::size_t a = 0; a < family.size(); ++a) {
    const auto member = sets::normalized(family[a]);
    std::vector<std::uint32_t> covered;
    for (const auto& sub : node.parts[a].u_sub) covered = sets::unite(covered, sets::normalized(sub));
    for (const auto& sub : node.parts[a].v_sub) covered = sets::unite(covered, sets::normalized(sub));
    if (covered != member) {
      return violation(path, "cover",
                       {{"part", a},
                        {"missing", id_list(*space, sets::subtract(member, covered), 5)},
                        {"extra", id_list(*space, sets::subtract(covered, member), 5)}});
    }

    for (int color = 0; color < 2; ++color) {
      const auto& subs = color == 0 ? node.parts[a].u_sub : node.parts[a].v_sub;
      const auto report = metric::is_r_disjoint(metric::MetricFamily::of(space, subs), node.r);
      if (!report.disjoint) {
        return violation(path, "disjointness",
                         {{"part", a},
                          {"color", color == 0 ? "U" : "V"},
                          {"subA", report.set_a},
                          {"subB", report.set_b},
                          {"pointA", space->id(report.point_a)},
                          {"pointB", space->id(report.point_b)},
                          {"distance", report.distance},
                          {"r", node.r}});
      }
    }
  }

  std::vector<std::vector<std::uint32_t>> u_family, v_family;
  for (const auto& part : node.parts) {
    for (const auto& sub : part.u_sub) u_family.push_back(sub);
    for (const auto& sub : part.v_sub) v_family.push_back(sub);
  }
  if (auto res = verify_node(space, node.children[0], u_family, path + ".U"); !res.ok) {
    return res;
  }
  return verify_node(space, node.children[1], v_family, path + ".V");
}

}  // namespace

VerifyResult verify_certificate(const Certificate& cert) {
  if (!cert.space) throw std::invalid_argument("verify_certificate: null space");
  return verify_node(cert.space, cert.root, cert.family, "root");
}

namespace {

// Slab decomposition along one coordinate. Slab j of width w holds the
// points with (coord - anchor) in [j*w, (j+1)*w); slabs of equal parity are
// w + 1 > r apart in l1.
CertNode decompose_rec(const metric::MetricSpace& space,
                       const std::vector<std::vector<std::uint32_t>>& family, int depth,
                       const std::vector<double>& schedule, const std::vector<long long>& anchors,
                       double leaf_bound) {
  const int dim = space.lattice_dim();
  if (depth == dim) return CertNode::leaf(leaf_bound);

  const double r = schedule[static_cast<std::size_t>(depth)];
  const long long width = static_cast<long long>(std::floor(r)) + 1;

  std::vector<CertNode::Part> parts;
  std::vector<std::vector<std::uint32_t>> u_family, v_family;
  parts.reserve(family.size());
  for (const auto& member : family) {
    std::map<long long, std::vector<std::uint32_t>> slabs;
    for (std::uint32_t p : member) {
      const long long offset = space.coords(p)[depth] - anchors[static_cast<std::size_t>(depth)];
      slabs[offset / width].push_back(p);
    }
    CertNode::Part part;
    for (auto& [slab, points] : slabs) {
      auto& color = slab % 2 == 0 ? part.u_sub : part.v_sub;
      color.push_back(std::move(points));
    }
    for (const auto& sub : part.u_sub) u_family.push_back(sub);
    for (const auto& sub : part.v_sub) v_family.push_back(sub);
    parts.push_back(std::move(part));
  }

  return CertNode::split(
      r, std::move(parts),
      decompose_rec(space, u_family, depth + 1, schedule, anchors, leaf_bound),
      decompose_rec(space, v_family, depth + 1, schedule, anchors, leaf_bound));
}

}  // namespace

Certificate decompose_lattice_points(metric::SpaceRef space,
                                     const std::vector<double>& r_schedule) {
  if (!space) throw std::invalid_argument("decompose: null space");
  if (!space->has_coordinates()) {
    throw std::invalid_argument("decompose: space must be lattice-backed");
  }
  const int dim = space->lattice_dim();
  if (r_schedule.size() < static_cast<std::size_t>(dim)) {
    throw std::invalid_argument("decompose: schedule shorter than the lattice dimension");
  }
  for (double r : r_schedule) {
    if (!(r > 0.0)) throw std::invalid_argument("decompose: r values must be positive");
  }

  std::vector<std::uint32_t> all(space->size());
  for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;

  std::vector<long long> anchors(static_cast<std::size_t>(dim), 0);
  for (int k = 0; k < dim; ++k) {
    long long low = 0;
    for (std::uint32_t p : all) low = std::min(low, space->coords(p)[k]);
    anchors[static_cast<std::size_t>(k)] = low;
  }

  double leaf_bound = 0.0;
  for (int k = 0; k < dim; ++k) {
    leaf_bound += std::floor(r_schedule[static_cast<std::size_t>(k)]);
  }

  Certificate cert;
  cert.space = space;
  cert.family = {all};
  cert.root = decompose_rec(*space, cert.family, 0, r_schedule, anchors, leaf_bound);
  return cert;
}

Certificate decompose_lattice(int dim, long long radius, const std::vector<double>& r_schedule) {
  return decompose_lattice_points(metric::MetricSpace::l1_lattice_ball(dim, radius), r_schedule);
}

namespace {

struct WeakenTask {
  std::vector<std::vector<std::uint32_t>> targets;
  std::vector<std::size_t> assignment;
};

CertNode weaken_rec(const metric::MetricSpace& space, const CertNode& node,
                    const std::vector<std::vector<std::uint32_t>>& family, const WeakenTask& task,
                    double t, const std::string& path) {
  if (node.kind == CertNode::Kind::Leaf) return CertNode::leaf(node.bound + 2.0 * t);

  if (node.children.size() != 2 || node.parts.size() != family.size()) {
    throw std::invalid_argument("weaken: malformed certificate at " + path);
  }
  if (!(node.r > 2.0 * t)) {
    std::ostringstream msg;
    msg << "weaken: disjointness exhausted at " << path << " (r = " << node.r << ", t = " << t
        << ")";
    throw std::invalid_argument(msg.str());
  }

  // Original child family index of each sub-part, for target bookkeeping.
  std::vector<std::size_t> u_offset(node.parts.size()), v_offset(node.parts.size());
  std::vector<std::vector<std::uint32_t>> u_family, v_family;
  for (std::size_t a = 0; a < node.parts.size(); ++a) {
    u_offset[a] = u_family.size();
    v_offset[a] = v_family.size();
    for (const auto& sub : node.parts[a].u_sub) u_family.push_back(sub);
    for (const auto& sub : node.parts[a].v_sub) v_family.push_back(sub);
  }

  std::vector<CertNode::Part> parts;
  WeakenTask u_task, v_task;
  parts.reserve(task.targets.size());
  for (std::size_t b = 0; b < task.targets.size(); ++b) {
    const auto& target = task.targets[b];
    const std::size_t a = task.assignment[b];
    const auto& origin = node.parts[a];
    CertNode::Part part;
    for (std::size_t i = 0; i < origin.u_sub.size(); ++i) {
      auto piece = sets::intersect(metric::closed_neighborhood(space, origin.u_sub[i], t), target);
      if (piece.empty()) continue;
      part.u_sub.push_back(piece);
      u_task.targets.push_back(std::move(piece));
      u_task.assignment.push_back(u_offset[a] + i);
    }
    for (std::size_t j = 0; j < origin.v_sub.size(); ++j) {
      auto piece = sets::intersect(metric::closed_neighborhood(space, origin.v_sub[j], t), target);
      if (piece.empty()) continue;
      part.v_sub.push_back(piece);
      v_task.targets.push_back(std::move(piece));
      v_task.assignment.push_back(v_offset[a] + j);
    }
    parts.push_back(std::move(part));
  }

  return CertNode::split(node.r - 2.0 * t, std::move(parts),
                         weaken_rec(space, node.children[0], u_family, u_task, t, path + ".U"),
                         weaken_rec(space, node.children[1], v_family, v_task, t, path + ".V"));
}

}  // namespace

Certificate weaken_to_subneighborhoods(const Certificate& cert, double t,
                                       const std::vector<std::vector<std::uint32_t>>& targets,
                                       const std::vector<std::size_t>& assignment) {
  if (!cert.space) throw std::invalid_argument("weaken: null space");
  if (t < 0.0) throw std::invalid_argument("weaken: t must be nonnegative");
  if (targets.size() != assignment.size()) {
    throw std::invalid_argument("weaken: one assignment entry per target required");
  }

  WeakenTask task;
  task.targets.reserve(targets.size());
  for (std::size_t b = 0; b < targets.size(); ++b) {
    if (assignment[b] >= cert.family.size()) {
      throw std::invalid_argument("weaken: assignment out of range at target " +
                                  std::to_string(b));
    }
    auto target = sets::normalized(targets[b]);
    const auto hull = metric::closed_neighborhood(*cert.space, cert.family[assignment[b]], t);
    if (!sets::subset(target, hull)) {
      std::ostringstream msg;
      msg << "weaken: target " << b << " is not within the closed " << t
          << "-neighborhood of family member " << assignment[b];
      throw std::invalid_argument(msg.str());
    }
    task.targets.push_back(std::move(target));
    task.assignment.push_back(assignment[b]);
  }

  Certificate out;
  out.space = cert.space;
  out.family = task.targets;
  out.root = weaken_rec(*cert.space, cert.root, cert.family, task, t, "root");
  return out;
}

namespace {

struct MoveSite {
  CertNode* node = nullptr;
  std::string path;
  std::size_t part = 0;
  int color = 0;  // 0 = U, 1 = V
  std::size_t from = 0, to = 0;
};

void collect_sites(CertNode& node, const std::string& path, std::vector<MoveSite>& sites) {
  if (node.kind != CertNode::Kind::Split) return;
  for (std::size_t a = 0; a < node.parts.size(); ++a) {
    for (int color = 0; color < 2; ++color) {
      const auto& subs = color == 0 ? node.parts[a].u_sub : node.parts[a].v_sub;
      for (std::size_t i = 0; i < subs.size(); ++i) {
        for (std::size_t j = 0; j < subs.size(); ++j) {
          if (i != j && !subs[i].empty()) sites.push_back({&node, path, a, color, i, j});
        }
      }
    }
  }
  if (node.children.size() == 2) {
    collect_sites(node.children[0], path + ".U", sites);
    collect_sites(node.children[1], path + ".V", sites);
  }
}

}  // namespace

Mutation move_point_mutation(const Certificate& cert, Rng& rng) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    Mutation m;
    m.cert = cert;
    std::vector<MoveSite> sites;
    collect_sites(m.cert.root, "root", sites);
    if (sites.empty()) break;

    const MoveSite& site = sites[rng.index(sites.size())];
    auto& subs = site.color == 0 ? site.node->parts[site.part].u_sub
                                 : site.node->parts[site.part].v_sub;
    const std::uint32_t p = subs[site.from][rng.index(subs[site.from].size())];

    // The move must provably break strict r-disjointness: the moved point
    // keeps a neighbor at distance <= r in its old sub-part.
    auto remainder = sets::subtract(subs[site.from], {p});
    const auto gap = metric::min_set_distance(*cert.space, {p}, remainder);
    if (remainder.empty() || !(gap.value() <= site.node->r)) continue;

    subs[site.from] = std::move(remainder);
    subs[site.to] = sets::unite(subs[site.to], {p});
    m.node_path = site.path;
    return m;
  }
  throw std::logic_error("move_point_mutation: no breaking move found");
}

nlohmann::ordered_json node_to_json(const CertNode& node) {
  if (node.kind == CertNode::Kind::Leaf) {
    return {{"kind", "leaf"}, {"bound", node.bound}};
  }
  nlohmann::ordered_json parts = nlohmann::ordered_json::array();
  for (const auto& part : node.parts) {
    nlohmann::ordered_json u = nlohmann::ordered_json::array();
    for (const auto& sub : part.u_sub) u.push_back(sub);
    nlohmann::ordered_json v = nlohmann::ordered_json::array();
    for (const auto& sub : part.v_sub) v.push_back(sub);
    parts.push_back({{"U", u}, {"V", v}});
  }
  return {{"kind", "split"},
          {"r", node.r},
          {"parts", parts},
          {"uChild", node_to_json(node.children.at(0))},
          {"vChild", node_to_json(node.children.at(1))}};
}

CertNode node_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "leaf") return CertNode::leaf(j.at("bound").get<double>());
  if (kind != "split") throw std::invalid_argument("certificate node kind must be leaf or split");

  std::vector<CertNode::Part> parts;
  for (const auto& pj : j.at("parts")) {
    CertNode::Part part;
    for (const auto& sub : pj.at("U")) {
      part.u_sub.push_back(sets::normalized(sub.get<std::vector<std::uint32_t>>()));
    }
    for (const auto& sub : pj.at("V")) {
      part.v_sub.push_back(sets::normalized(sub.get<std::vector<std::uint32_t>>()));
    }
    parts.push_back(std::move(part));
  }
  return CertNode::split(j.at("r").get<double>(), std::move(parts),
                         node_from_json(j.at("uChild")), node_from_json(j.at("vChild")));
}

nlohmann::ordered_json certificate_to_json(const Certificate& cert) {
  nlohmann::ordered_json family = nlohmann::ordered_json::array();
  for (const auto& member : cert.family) family.push_back(member);
  return {{"space", metric::save_space(*cert.space)},
          {"family", family},
          {"node", node_to_json(cert.root)}};
}

Certificate certificate_from_json(const nlohmann::json& j) {
  Certificate cert;
  cert.space = metric::load_space(j.at("space"));
  for (const auto& member : j.at("family")) {
    auto set = sets::normalized(member.get<std::vector<std::uint32_t>>());
    if (!set.empty() && set.back() >= cert.space->size()) {
      throw std::invalid_argument("certificate family point out of range");
    }
    cert.family.push_back(std::move(set));
  }
  cert.root = node_from_json(j.at("node"));
  return cert;
}

namespace {

void dot_rec(const CertNode& node, std::ostream& out, int& counter, int parent,
             const char* edge) {
  const int self = counter++;
  out << "  n" << self << " [label=\"";
  if (node.kind == CertNode::Kind::Leaf) {
    out << "leaf\\nD = " << node.bound << "\"";
  } else {
    out << "split\\nr = " << node.r << "\\nparts = " << node.parts.size() << "\"";
  }
  out << "];\n";
  if (parent >= 0) out << "  n" << parent << " -> n" << self << " [label=\"" << edge << "\"];\n";
  if (node.kind == CertNode::Kind::Split && node.children.size() == 2) {
    dot_rec(node.children[0], out, counter, self, "U");
    dot_rec(node.children[1], out, counter, self, "V");
  }
}

}  // namespace

std::string certificate_to_dot(const Certificate& cert) {
  std::ostringstream out;
  out << "digraph certificate {\n  node [shape=box];\n";
  int counter = 0;
  dot_rec(cert.root, out, counter, -1, "");
  out << "}\n";
  return out.str();
}

}  // namespace coarsekit::fdc
