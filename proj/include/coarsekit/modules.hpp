#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "coarsekit/metric_space.hpp"

namespace coarsekit::algebra {

/// Dense integer matrix, row-major. Small blocks only; arithmetic is exact
/// in 64 bits at the scales the checks use.
struct IntMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<long long> a;

  static IntMatrix zero(std::size_t rows, std::size_t cols);
  static IntMatrix identity(std::size_t n);

  long long& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  long long at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
  bool is_zero() const;

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;
};

IntMatrix mat_mul(const IntMatrix& x, const IntMatrix& y);
IntMatrix mat_add(const IntMatrix& x, const IntMatrix& y);
IntMatrix mat_sub(const IntMatrix& x, const IntMatrix& y);

/// Free module spread over points of a metric space: a positive rank at each
/// supported point.
struct GeometricModule {
  metric::SpaceRef space;
  std::map<std::uint32_t, int> ranks;

  int rank_at(std::uint32_t p) const;
  std::vector<std::uint32_t> support() const;

  friend bool operator==(const GeometricModule&, const GeometricModule&) = default;
};

GeometricModule make_module(metric::SpaceRef space, std::map<std::uint32_t, int> ranks);

/// Morphism of geometric modules: sparse blocks indexed by (target point,
/// source point), each of shape (target rank x source rank). Zero blocks are
/// dropped on construction.
struct GeomMorphism {
  GeometricModule source, target;
  std::map<std::pair<std::uint32_t, std::uint32_t>, IntMatrix> blocks;

  bool is_zero() const { return blocks.empty(); }

  friend bool operator==(const GeomMorphism&, const GeomMorphism&) = default;
};

GeomMorphism make_morphism(GeometricModule source, GeometricModule target,
                           std::map<std::pair<std::uint32_t, std::uint32_t>, IntMatrix> blocks);
GeomMorphism zero_morphism(GeometricModule source, GeometricModule target);
GeomMorphism identity_morphism(const GeometricModule& m);

/// Least R with all blocks inside distance R; zero for the zero morphism.
metric::ExtDistance propagation(const GeomMorphism& phi);

/// Matrix composition psi after phi; requires phi.target == psi.source.
GeomMorphism compose(const GeomMorphism& psi, const GeomMorphism& phi);
GeomMorphism add(const GeomMorphism& phi, const GeomMorphism& psi);
GeomMorphism subtract(const GeomMorphism& phi, const GeomMorphism& psi);

/// Support intersected with the subset; ranks preserved there.
GeometricModule restrict_module(const GeometricModule& m,
                                const std::vector<std::uint32_t>& subset);

/// Direct-sum decomposition M = M(Z) + M(complement) with inclusions i and
/// projections p satisfying p1*i1 = id, p2*i2 = id, and
/// i1*p1 + i2*p2 = identity on M, all bit-exact.
struct Splitting {
  GeometricModule inside, outside;
  GeomMorphism i1, i2, p1, p2;
};
Splitting split_by_subspace(const GeometricModule& m, const std::vector<std::uint32_t>& z);

/// Target points (rows) respectively source points (columns) that carry a
/// nonzero block.
std::vector<std::uint32_t> row_support(const GeomMorphism& phi);
std::vector<std::uint32_t> col_support(const GeomMorphism& phi);

/// Support-criterion factorization: when the row support lies in the closed
/// r-neighborhood of Y, phi factors through the restriction of its target to
/// that neighborhood (dually for column support through the source
/// restriction). beta * alpha recomposes phi bit-exactly. Returns nothing
/// when neither support fits; that is "not found", not impossibility.
struct Factorization {
  GeometricModule mid;
  GeomMorphism alpha;  // source -> mid
  GeomMorphism beta;   // mid -> target
  std::string via;     // "rows" or "columns"
};
std::optional<Factorization> factors_through_support(const GeomMorphism& phi,
                                                     const std::vector<std::uint32_t>& y,
                                                     double r);

/// Morphisms identified when their difference factors through the allowed
/// supports: true when every row-support point of phi - psi lies in the
/// closed r-neighborhood of some allowed (Y, r); the difference then splits
/// as a direct sum of factorizations over that partition of its rows.
struct AllowedSupport {
  std::vector<std::uint32_t> y;
  double r = 0.0;
};
bool equivalent_mod_support(const GeomMorphism& phi, const GeomMorphism& psi,
                            const std::vector<AllowedSupport>& allowed);

nlohmann::ordered_json module_to_json(const GeometricModule& m);
nlohmann::ordered_json morphism_to_json(const GeomMorphism& phi);

}  // namespace coarsekit::algebra
