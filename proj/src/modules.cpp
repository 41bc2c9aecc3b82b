#include "coarsekit/modules.hpp"

#include <algorithm>
#include <stdexcept>

#include "coarsekit/sets.hpp"

namespace coarsekit::algebra {

IntMatrix IntMatrix::zero(std::size_t rows, std::size_t cols) {
  IntMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.a.assign(rows * cols, 0);
  return m;
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m = zero(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

bool IntMatrix::is_zero() const {
  return std::all_of(a.begin(), a.end(), [](long long x) { return x == 0; });
}

IntMatrix mat_mul(const IntMatrix& x, const IntMatrix& y) {
  if (x.cols != y.rows) throw std::invalid_argument("matrix product shape mismatch");
  IntMatrix out = IntMatrix::zero(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i) {
    for (std::size_t k = 0; k < x.cols; ++k) {
      const long long v = x.at(i, k);
      if (v == 0) continue;
      for (std::size_t j = 0; j < y.cols; ++j) {
        out.at(i, j) += v * y.at(k, j);
      }
    }
  }
  return out;
}

namespace {

IntMatrix combine(const IntMatrix& x, const IntMatrix& y, long long sign) {
  if (x.rows != y.rows || x.cols != y.cols) {
    throw std::invalid_argument("matrix sum shape mismatch");
  }
  IntMatrix out = x;
  for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] += sign * y.a[i];
  return out;
}

}  // namespace

IntMatrix mat_add(const IntMatrix& x, const IntMatrix& y) { return combine(x, y, 1); }
IntMatrix mat_sub(const IntMatrix& x, const IntMatrix& y) { return combine(x, y, -1); }

int GeometricModule::rank_at(std::uint32_t p) const {
  const auto it = ranks.find(p);
  return it == ranks.end() ? 0 : it->second;
}

std::vector<std::uint32_t> GeometricModule::support() const {
  std::vector<std::uint32_t> out;
  out.reserve(ranks.size());
  for (const auto& [p, rank] : ranks) out.push_back(p);
  return out;
}

GeometricModule make_module(metric::SpaceRef space, std::map<std::uint32_t, int> ranks) {
  if (!space) throw std::invalid_argument("make_module: null space");
  for (const auto& [p, rank] : ranks) {
    if (p >= space->size()) throw std::out_of_range("make_module: point out of range");
    if (rank < 1) throw std::invalid_argument("make_module: ranks must be positive");
  }
  GeometricModule m;
  m.space = std::move(space);
  m.ranks = std::move(ranks);
  return m;
}

GeomMorphism make_morphism(GeometricModule source, GeometricModule target,
                           std::map<std::pair<std::uint32_t, std::uint32_t>, IntMatrix> blocks) {
  if (source.space != target.space) {
    throw std::invalid_argument("make_morphism: source and target live on different spaces");
  }
  GeomMorphism phi;
  phi.source = std::move(source);
  phi.target = std::move(target);
  for (auto& [key, block] : blocks) {
    const auto [row, col] = key;
    const int target_rank = phi.target.rank_at(row);
    const int source_rank = phi.source.rank_at(col);
    if (target_rank == 0 || source_rank == 0) {
      throw std::invalid_argument("make_morphism: block between unsupported points");
    }
    if (block.rows != static_cast<std::size_t>(target_rank) ||
        block.cols != static_cast<std::size_t>(source_rank)) {
      throw std::invalid_argument("make_morphism: block shape does not match the ranks");
    }
    if (!block.is_zero()) phi.blocks.emplace(key, std::move(block));
  }
  return phi;
}

GeomMorphism zero_morphism(GeometricModule source, GeometricModule target) {
  return make_morphism(std::move(source), std::move(target), {});
}

GeomMorphism identity_morphism(const GeometricModule& m) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, IntMatrix> blocks;
  for (const auto& [p, rank] : m.ranks) {
    blocks.emplace(std::make_pair(p, p), IntMatrix::identity(static_cast<std::size_t>(rank)));
  }
  return make_morphism(m, m, std::move(blocks));
}

metric::ExtDistance propagation(const GeomMorphism& phi) {
  metric::ExtDistance worst(0.0);
  for (const auto& [key, block] : phi.blocks) {
    worst = std::max(worst, phi.source.space->dist(key.first, key.second));
  }
  return worst;
}

GeomMorphism compose(const GeomMorphism& psi, const GeomMorphism& phi) {
  if (phi.target != psi.source) {
    throw std::invalid_argument("compose: middle modules do not match");
  }
  // Group psi's blocks by source point to walk matching middle points only.
  std::map<std::uint32_t, std::vector<std::pair<std::uint32_t, const IntMatrix*>>> by_middle;
  for (const auto& [key, block] : psi.blocks) {
    by_middle[key.second].push_back({key.first, &block});
  }

  std::map<std::pair<std::uint32_t, std::uint32_t>, IntMatrix> blocks;
  for (const auto& [key, block] : phi.blocks) {
    const auto mid = by_middle.find(key.first);
    if (mid == by_middle.end()) continue;
    for (const auto& [row, left] : mid->second) {
      IntMatrix product = mat_mul(*left, block);
      const auto slot = blocks.find({row, key.second});
      if (slot == blocks.end()) {
        blocks.emplace(std::make_pair(row, key.second), std::move(product));
      } else {
        slot->second = mat_add(slot->second, product);
      }
    }
  }
  return make_morphism(phi.source, psi.target, std::move(blocks));
}

namespace {

GeomMorphism linear_combine(const GeomMorphism& phi, const GeomMorphism& psi, long long sign) {
  if (phi.source != psi.source || phi.target != psi.target) {
    throw std::invalid_argument("morphism sum: endpoints differ");
  }
  auto blocks = phi.blocks;
  for (const auto& [key, block] : psi.blocks) {
    const auto slot = blocks.find(key);
    if (slot == blocks.end()) {
      IntMatrix scaled = block;
      if (sign < 0) {
        for (auto& v : scaled.a) v = -v;
      }
      blocks.emplace(key, std::move(scaled));
    } else {
      slot->second = sign > 0 ? mat_add(slot->second, block) : mat_sub(slot->second, block);
    }
  }
  return make_morphism(phi.source, phi.target, std::move(blocks));
}

}  // namespace

GeomMorphism add(const GeomMorphism& phi, const GeomMorphism& psi) {
  return linear_combine(phi, psi, 1);
}

GeomMorphism subtract(const GeomMorphism& phi, const GeomMorphism& psi) {
  return linear_combine(phi, psi, -1);
}

GeometricModule restrict_module(const GeometricModule& m,
                                const std::vector<std::uint32_t>& subset) {
  const auto keep = sets::normalized(subset);
  GeometricModule out;
  out.space = m.space;
  for (const auto& [p, rank] : m.ranks) {
    if (sets::contains(keep, p)) out.ranks.emplace(p, rank);
  }
  return out;
}

Splitting split_by_subspace(const GeometricModule& m, const std::vector<std::uint32_t>& z) {
  const auto keep = sets::normalized(z);
  Splitting s;
  s.inside = restrict_module(m, keep);
  GeometricModule outside;
  outside.space = m.space;
  for (const auto& [p, rank] : m.ranks) {
    if (!sets::contains(keep, p)) outside.ranks.emplace(p, rank);
  }
  s.outside = std::move(outside);

  const auto embed = [&m](const GeometricModule& part) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, IntMatrix> blocks;
    for (const auto& [p, rank] : part.ranks) {
      blocks.emplace(std::make_pair(p, p), IntMatrix::identity(static_cast<std::size_t>(rank)));
    }
    return blocks;
  };
  s.i1 = make_morphism(s.inside, m, embed(s.inside));
  s.i2 = make_morphism(s.outside, m, embed(s.outside));
  s.p1 = make_morphism(m, s.inside, embed(s.inside));
  s.p2 = make_morphism(m, s.outside, embed(s.outside));
  return s;
}

std::vector<std::uint32_t> row_support(const GeomMorphism& phi) {
  std::vector<std::uint32_t> out;
  for (const auto& [key, block] : phi.blocks) out.push_back(key.first);
  return sets::normalized(std::move(out));
}

std::vector<std::uint32_t> col_support(const GeomMorphism& phi) {
  std::vector<std::uint32_t> out;
  for (const auto& [key, block] : phi.blocks) out.push_back(key.second);
  return sets::normalized(std::move(out));
}

std::optional<Factorization> factors_through_support(const GeomMorphism& phi,
                                                     const std::vector<std::uint32_t>& y,
                                                     double r) {
  const auto hull = metric::closed_neighborhood(*phi.source.space, sets::normalized(y), r);

  if (sets::subset(row_support(phi), hull)) {
    Factorization f;
    f.via = "rows";
    f.mid = restrict_module(phi.target, hull);
    f.alpha = make_morphism(phi.source, f.mid, phi.blocks);
    std::map<std::pair<std::uint32_t, std::uint32_t>, IntMatrix> inclusion;
    for (const auto& [p, rank] : f.mid.ranks) {
      inclusion.emplace(std::make_pair(p, p),
                        IntMatrix::identity(static_cast<std::size_t>(rank)));
    }
    f.beta = make_morphism(f.mid, phi.target, std::move(inclusion));
    return f;
  }

  if (sets::subset(col_support(phi), hull)) {
    Factorization f;
    f.via = "columns";
    f.mid = restrict_module(phi.source, hull);
    std::map<std::pair<std::uint32_t, std::uint32_t>, IntMatrix> projection;
    for (const auto& [p, rank] : f.mid.ranks) {
      projection.emplace(std::make_pair(p, p),
                         IntMatrix::identity(static_cast<std::size_t>(rank)));
    }
    f.alpha = make_morphism(phi.source, f.mid, std::move(projection));
    f.beta = make_morphism(f.mid, phi.target, phi.blocks);
    return f;
  }

  return std::nullopt;
}

bool equivalent_mod_support(const GeomMorphism& phi, const GeomMorphism& psi,
                            const std::vector<AllowedSupport>& allowed) {
  const GeomMorphism diff = subtract(phi, psi);
  if (diff.is_zero()) return true;

  // The difference splits as a direct sum over any partition of its row
  // support, and each summand with rows inside one allowed neighborhood
  // factors through it; so covering the rows point by point suffices.
  for (const std::uint32_t p : row_support(diff)) {
    const bool covered = std::any_of(allowed.begin(), allowed.end(), [&](const auto& entry) {
      const auto hull =
          metric::closed_neighborhood(*diff.source.space, sets::normalized(entry.y), entry.r);
      return sets::contains(hull, p);
    });
    if (!covered) return false;
  }
  return true;
}

nlohmann::ordered_json module_to_json(const GeometricModule& m) {
  nlohmann::ordered_json support = nlohmann::ordered_json::array();
  for (const auto& [p, rank] : m.ranks) {
    support.push_back({{"point", m.space->id(p)}, {"rank", rank}});
  }
  return {{"support", support}};
}

nlohmann::ordered_json morphism_to_json(const GeomMorphism& phi) {
  nlohmann::ordered_json blocks = nlohmann::ordered_json::array();
  for (const auto& [key, block] : phi.blocks) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < block.rows; ++i) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (std::size_t j = 0; j < block.cols; ++j) row.push_back(block.at(i, j));
      rows.push_back(row);
    }
    blocks.push_back({{"row", phi.target.space->id(key.first)},
                      {"col", phi.source.space->id(key.second)},
                      {"matrix", rows}});
  }
  return {{"blocks", blocks}};
}

}  // namespace coarsekit::algebra
