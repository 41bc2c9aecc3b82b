#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <vector>

#include "coarsekit/control.hpp"
#include "coarsekit/metric_space.hpp"
#include "coarsekit/modules.hpp"

using namespace coarsekit;
using algebra::GeometricModule;
using algebra::GeomMorphism;
using algebra::IntMatrix;
using metric::MetricSpace;

namespace {

metric::SpaceRef line(long long lo, long long hi) {
  std::vector<std::vector<long long>> pts;
  for (long long x = lo; x <= hi; ++x) pts.push_back({x});
  return MetricSpace::from_lattice_points("line", pts);
}

IntMatrix scalar(long long v) {
  IntMatrix m = IntMatrix::zero(1, 1);
  m.at(0, 0) = v;
  return m;
}

}  // namespace

TEST_CASE("integer matrices") {
  auto a = IntMatrix::zero(2, 3);
  a.at(0, 0) = 1;
  a.at(1, 2) = -4;
  CHECK_FALSE(a.is_zero());
  CHECK(IntMatrix::zero(2, 3).is_zero());
  CHECK(IntMatrix::identity(2).at(0, 0) == 1);
  CHECK(IntMatrix::identity(2).at(0, 1) == 0);

  auto b = IntMatrix::zero(3, 2);
  b.at(0, 0) = 2;
  b.at(2, 1) = 5;
  const auto prod = algebra::mat_mul(a, b);
  CHECK(prod.rows == 2);
  CHECK(prod.cols == 2);
  CHECK(prod.at(0, 0) == 2);
  CHECK(prod.at(1, 1) == -20);

  CHECK(algebra::mat_add(a, a).at(1, 2) == -8);
  CHECK(algebra::mat_sub(a, a).is_zero());
  CHECK_THROWS_AS(algebra::mat_mul(a, a), std::invalid_argument);
  CHECK_THROWS_AS(algebra::mat_add(a, b), std::invalid_argument);
}

TEST_CASE("module and morphism construction is validated") {
  const auto space = line(0, 4);
  const auto m = algebra::make_module(space, {{0, 1}, {2, 2}});
  CHECK(m.rank_at(0) == 1);
  CHECK(m.rank_at(2) == 2);
  CHECK(m.rank_at(1) == 0);
  CHECK(m.support() == std::vector<std::uint32_t>{0, 2});

  CHECK_THROWS_AS(algebra::make_module(space, {{9, 1}}), std::out_of_range);
  CHECK_THROWS_AS(algebra::make_module(space, {{0, 0}}), std::invalid_argument);

  const auto n = algebra::make_module(space, {{1, 1}});
  CHECK_THROWS_AS(
      algebra::make_morphism(m, n, {{{1, 1}, scalar(3)}}),  // 1 unsupported in source
      std::invalid_argument);
  CHECK_THROWS_AS(
      algebra::make_morphism(m, n, {{{1, 2}, scalar(3)}}),  // wrong shape for rank 2
      std::invalid_argument);
  CHECK_THROWS_AS(algebra::make_morphism(m, algebra::make_module(line(0, 1), {{0, 1}}),
                                         {}),
                  std::invalid_argument);

  // Zero blocks are dropped so the zero morphism has no blocks at all.
  const auto z = algebra::make_morphism(m, n, {{{1, 0}, IntMatrix::zero(1, 1)}});
  CHECK(z.is_zero());
  CHECK(z == algebra::zero_morphism(m, n));
}

TEST_CASE("propagation measures block reach") {
  const auto space = line(0, 9);
  const auto m = algebra::make_module(space, {{0, 1}, {3, 1}, {9, 1}});
  CHECK(algebra::propagation(algebra::identity_morphism(m)).value() == 0.0);
  CHECK(algebra::propagation(algebra::zero_morphism(m, m)).value() == 0.0);

  const auto phi = algebra::make_morphism(
      m, m, {{{0, 3}, scalar(1)}, {{3, 9}, scalar(2)}});
  CHECK(algebra::propagation(phi).value() == 6.0);
}

TEST_CASE("composition matches hand arithmetic and is subadditive") {
  const auto space = line(0, 2);
  const auto m1 = algebra::make_module(space, {{0, 1}});
  const auto m2 = algebra::make_module(space, {{0, 1}, {1, 1}});
  const auto m3 = algebra::make_module(space, {{1, 1}});

  const auto phi = algebra::make_morphism(
      m1, m2, {{{0, 0}, scalar(1)}, {{1, 0}, scalar(2)}});
  const auto psi = algebra::make_morphism(
      m2, m3, {{{1, 0}, scalar(3)}, {{1, 1}, scalar(4)}});

  const auto comp = algebra::compose(psi, phi);
  REQUIRE(comp.blocks.size() == 1);
  CHECK(comp.blocks.at({1, 0}) == scalar(11));  // 3*1 + 4*2
  CHECK(algebra::propagation(comp).value() <=
        algebra::propagation(psi).value() + algebra::propagation(phi).value());

  CHECK_THROWS_AS(algebra::compose(phi, psi), std::invalid_argument);

  const auto diff = algebra::subtract(phi, phi);
  CHECK(diff.is_zero());
  const auto doubled = algebra::add(phi, phi);
  CHECK(doubled.blocks.at({1, 0}) == scalar(4));
  CHECK_THROWS_AS(algebra::add(phi, psi), std::invalid_argument);
}

TEST_CASE("restriction and splitting") {
  const auto space = line(0, 4);
  const auto m = algebra::make_module(space, {{0, 1}, {2, 2}, {4, 1}});

  const auto r = algebra::restrict_module(m, {0, 1, 2});
  CHECK(r.support() == std::vector<std::uint32_t>{0, 2});
  CHECK(r.rank_at(2) == 2);

  const auto check_split = [&](const std::vector<std::uint32_t>& z) {
    const auto sp = algebra::split_by_subspace(m, z);
    CHECK(algebra::compose(sp.p1, sp.i1) == algebra::identity_morphism(sp.inside));
    CHECK(algebra::compose(sp.p2, sp.i2) == algebra::identity_morphism(sp.outside));
    CHECK(algebra::add(algebra::compose(sp.i1, sp.p1), algebra::compose(sp.i2, sp.p2)) ==
          algebra::identity_morphism(m));
    CHECK(algebra::compose(sp.p2, sp.i1).is_zero());
    CHECK(algebra::compose(sp.p1, sp.i2).is_zero());
  };
  check_split({0, 2});
  check_split({1, 3});   // misses the support entirely on one side
  check_split({});       // empty inside
  check_split({0, 1, 2, 3, 4});  // empty outside

  const auto sp = algebra::split_by_subspace(m, {2, 0});  // unsorted input
  CHECK(sp.inside.support() == std::vector<std::uint32_t>{0, 2});
  CHECK(sp.outside.support() == std::vector<std::uint32_t>{4});
}

TEST_CASE("support factorization recomposes exactly") {
  const auto space = line(0, 9);
  const auto src = algebra::make_module(space, {{5, 1}});
  const auto dst = algebra::make_module(space, {{0, 1}, {1, 1}});
  const auto phi = algebra::make_morphism(
      src, dst, {{{0, 5}, scalar(1)}, {{1, 5}, scalar(7)}});

  CHECK(algebra::row_support(phi) == std::vector<std::uint32_t>{0, 1});
  CHECK(algebra::col_support(phi) == std::vector<std::uint32_t>{5});

  SUBCASE("through the rows") {
    const auto f = algebra::factors_through_support(phi, {0}, 1.0);
    REQUIRE(f.has_value());
    CHECK(f->via == "rows");
    CHECK(algebra::compose(f->beta, f->alpha) == phi);
    CHECK(f->mid.support() == std::vector<std::uint32_t>{0, 1});
  }
  SUBCASE("through the columns at margin zero") {
    const auto f = algebra::factors_through_support(phi, {5}, 0.0);
    REQUIRE(f.has_value());
    CHECK(f->via == "columns");
    CHECK(algebra::compose(f->beta, f->alpha) == phi);
    CHECK(f->mid.support() == std::vector<std::uint32_t>{5});
  }
  SUBCASE("no fit reports nothing") {
    CHECK_FALSE(algebra::factors_through_support(phi, {9}, 1.0).has_value());
  }
}

TEST_CASE("equivalence modulo allowed supports") {
  const auto space = line(0, 9);
  const auto m = algebra::make_module(space, {{0, 1}, {4, 1}, {9, 1}});
  const auto phi = algebra::identity_morphism(m);

  auto near4 = phi;
  near4.blocks[{4, 4}] = scalar(3);
  CHECK(algebra::equivalent_mod_support(phi, near4, {{{4}, 0.0}}));
  CHECK(algebra::equivalent_mod_support(phi, near4, {{{5}, 1.0}}));
  CHECK_FALSE(algebra::equivalent_mod_support(phi, near4, {{{0}, 1.0}}));

  // Identical morphisms differ by zero, which needs no support at all.
  CHECK(algebra::equivalent_mod_support(phi, phi, {}));

  auto two = phi;
  two.blocks[{0, 0}] = scalar(2);
  two.blocks[{9, 9}] = scalar(2);
  CHECK(algebra::equivalent_mod_support(phi, two, {{{0}, 0.0}, {{9}, 0.0}}));
  CHECK_FALSE(algebra::equivalent_mod_support(phi, two, {{{0}, 0.0}}));
}

TEST_CASE("module serialization shapes") {
  const auto space = line(0, 2);
  const auto m = algebra::make_module(space, {{0, 1}, {2, 2}});
  const auto mj = algebra::module_to_json(m);
  REQUIRE(mj["support"].size() == 2);
  CHECK(mj["support"][0]["point"] == "(0)");
  CHECK(mj["support"][1]["rank"] == 2);

  const auto phi = algebra::make_morphism(
      m, m, {{{2, 0}, IntMatrix::zero(2, 1)}, {{0, 0}, scalar(5)}});
  const auto pj = algebra::morphism_to_json(phi);
  REQUIRE(pj["blocks"].size() == 1);  // the zero block was dropped
  CHECK(pj["blocks"][0]["row"] == "(0)");
  CHECK(pj["blocks"][0]["col"] == "(0)");
  CHECK(pj["blocks"][0]["matrix"][0][0] == 5);
}

TEST_CASE("time grids") {
  const auto base = line(0, 4);
  const auto grid = algebra::make_grid(base, {0.5, 0.0});
  CHECK(grid.times == std::vector<double>{0.0, 0.5});  // sorted on entry
  CHECK(grid.product->size() == 10);
  const auto p = grid.index_of(2, 1);
  CHECK(grid.base_of(p) == 2);
  CHECK(grid.time_of(p) == 0.5);
  CHECK(grid.product->id(p) == "(2)@0.5");
  CHECK(grid.product->dist_value(grid.index_of(0, 0), grid.index_of(1, 1)) == 1.5);

  CHECK_THROWS_AS(algebra::make_grid(base, {}), std::invalid_argument);
  CHECK_THROWS_AS(algebra::make_grid(base, {0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(algebra::make_grid(base, {-0.1}), std::invalid_argument);
  CHECK_THROWS_AS(algebra::make_grid(base, {0.3, 0.3}), std::invalid_argument);
}

TEST_CASE("boundary control over a grid") {
  const auto base = line(0, 9);
  const auto grid = algebra::make_grid(base, {0.0, 0.5, 0.9, 0.97});
  const std::uint32_t center = base->index_of("(5)").value();

  std::map<std::uint32_t, int> ranks;
  for (std::uint32_t p = 0; p < grid.product->size(); ++p) ranks[p] = 1;
  const auto m = algebra::make_module(grid.product, std::move(ranks));

  const std::vector<algebra::ControlProbe> probes = {{center, 2.0, 0.2}};
  const auto halve = [](double, double eps) { return eps / 2.0; };

  SUBCASE("the identity never crosses the boxes") {
    const auto out =
        algebra::check_control_certificate(algebra::identity_morphism(m), grid, probes, halve);
    CHECK(out.probes == 1);
    CHECK(out.violations == 0);
    CHECK(out.record.status == report::Status::Pass);
    CHECK(out.record.name == "boundary-control");
  }

  SUBCASE("a block out of the inner box is flagged with a witness") {
    auto phi = algebra::identity_morphism(m);
    const auto inner = grid.index_of(center, 3);          // time 0.97
    const auto far = grid.index_of(base->index_of("(0)").value(), 0);
    phi.blocks[{far, inner}] = scalar(1);
    const auto out = algebra::check_control_certificate(phi, grid, probes, halve);
    CHECK(out.violations == 1);
    CHECK(out.record.status == report::Status::Fail);
    CHECK(out.record.details["witnesses"][0]["blockSource"] == "(5)@0.97");
  }

  SUBCASE("delta must shrink and eps must be positive") {
    const auto lazy = [](double, double eps) { return eps; };
    CHECK_THROWS_AS(
        algebra::check_control_certificate(algebra::identity_morphism(m), grid, probes, lazy),
        std::invalid_argument);
    const std::vector<algebra::ControlProbe> bad = {{center, 2.0, 0.0}};
    CHECK_THROWS_AS(
        algebra::check_control_certificate(algebra::identity_morphism(m), grid, bad, halve),
        std::invalid_argument);
  }

  SUBCASE("the morphism must live on the grid") {
    const auto other = algebra::make_module(base, {{0, 1}});
    CHECK_THROWS_AS(algebra::check_control_certificate(
                        algebra::identity_morphism(other), grid, probes, halve),
                    std::invalid_argument);
  }
}
