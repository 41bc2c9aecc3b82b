#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "coarsekit/metric_space.hpp"
#include "coarsekit/rips.hpp"

using namespace coarsekit;
using metric::MetricSpace;

namespace {

metric::SpaceRef line(long long lo, long long hi) {
  std::vector<std::vector<long long>> pts;
  for (long long x = lo; x <= hi; ++x) pts.push_back({x});
  return MetricSpace::from_lattice_points("line", pts);
}

std::uint32_t at(const metric::SpaceRef& space, const std::string& id) {
  return space->index_of(id).value();
}

}  // namespace

TEST_CASE("scale one on a segment is the path graph") {
  const auto space = line(0, 6);
  const auto k = rips::build_rips(space, 1.0);
  CHECK(k.dimension == 1);
  CHECK(k.by_dim[0].size() == 7);
  CHECK(k.by_dim[1].size() == 6);
  CHECK(k.maximal.size() == 6);
  CHECK(rips::skeleton_distance(k, at(space, "(0)"), at(space, "(6)")).value() == 6.0);
  CHECK(rips::skeleton_distance(k, at(space, "(2)"), at(space, "(2)")).value() == 0.0);
  const auto from0 = rips::skeleton_distances_from(k, at(space, "(0)"));
  CHECK(from0.size() == 7);
  for (std::size_t i = 0; i < from0.size(); ++i) {
    // Vertex positions follow point order here, so hops equal l1 distance.
    CHECK(from0[i] == static_cast<long long>(i));
  }
}

TEST_CASE("diameter-two scale turns the unit cross into one simplex") {
  const auto space = MetricSpace::l1_lattice_ball(2, 1);
  const auto k = rips::build_rips(space, 2.0);
  CHECK(k.dimension == 4);
  CHECK(k.maximal.size() == 1);
  CHECK(k.maximal[0].size() == 5);
  REQUIRE(k.by_dim.size() == 5);
  CHECK(k.by_dim[0].size() == 5);
  CHECK(k.by_dim[1].size() == 10);
  CHECK(k.by_dim[2].size() == 10);
  CHECK(k.by_dim[3].size() == 5);
  CHECK(k.by_dim[4].size() == 1);
  CHECK(k.simplex_count() == 31);
  CHECK(k.is_simplex({0, 1, 2}));
  CHECK(k.cofaces_of({0}) == std::vector<std::size_t>{0});
  CHECK_FALSE(k.capped);
  CHECK(rips::rips_constant(k) == rips::comparison_constant(4));
}

TEST_CASE("capping keeps the true dimension but blocks the constant") {
  const auto space = MetricSpace::l1_lattice_ball(2, 1);
  const auto k = rips::build_rips(space, 2.0, 2);
  CHECK(k.capped);
  CHECK(k.dimension == 4);
  REQUIRE(k.by_dim.size() == 3);
  CHECK(k.by_dim[2].size() == 10);
  CHECK_THROWS_AS(rips::rips_constant(k), std::runtime_error);
}

TEST_CASE("comparison constant values") {
  CHECK(rips::comparison_constant(0) == 1.0);
  CHECK(rips::comparison_constant(1) == 1.0);
  CHECK(rips::comparison_constant(2) == 3.8284271247461903);
  CHECK(rips::comparison_constant(3) > rips::comparison_constant(2));
  CHECK_THROWS_AS(rips::comparison_constant(-1), std::invalid_argument);
}

TEST_CASE("building over a point subset") {
  const auto space = line(0, 6);
  const std::vector<std::uint32_t> evens = {at(space, "(0)"), at(space, "(2)"),
                                            at(space, "(4)"), at(space, "(6)")};
  const auto k = rips::build_rips(space, 2.0, 8, rips::default_max_simplices);
  CHECK(k.dimension >= 1);
  const auto sub = rips::build_rips(space, evens, 2.0);
  CHECK(sub.vertices == evens);
  CHECK(sub.dimension == 1);
  CHECK(sub.by_dim[1].size() == 3);
  CHECK_FALSE(sub.has_vertex(at(space, "(1)")));
  CHECK_THROWS_AS(rips::build_rips(space, std::vector<std::uint32_t>{99}, 1.0),
                  std::out_of_range);
  CHECK_THROWS_AS(rips::build_rips(space, 0.0), std::invalid_argument);
}

TEST_CASE("relative complex admits long simplices only inside family members") {
  const auto space = line(0, 5);
  const std::vector<std::uint32_t> z = {at(space, "(0)"), at(space, "(1)"),
                                        at(space, "(2)"), at(space, "(3)")};
  const std::vector<std::uint32_t> w = {at(space, "(3)"), at(space, "(4)"),
                                        at(space, "(5)")};
  const auto k = rips::build_relative_rips(space, z, {w}, 1.0, 2.0);

  CHECK(k.relative);
  CHECK(k.scale == 1.0);
  CHECK(k.scale_large == 2.0);
  // The member contributes vertices beyond z.
  CHECK(k.has_vertex(at(space, "(4)")));
  CHECK(k.has_vertex(at(space, "(5)")));
  CHECK(k.vertices.size() == 6);
  // Condition one: z edges at scale one only.
  CHECK(k.is_simplex({at(space, "(1)"), at(space, "(2)")}));
  CHECK_FALSE(k.is_simplex({at(space, "(0)"), at(space, "(3)")}));
  // Condition two: the whole member spans a triangle at the large scale.
  CHECK(k.is_simplex(w));
  CHECK(k.is_privileged(w));
  CHECK_FALSE(k.is_privileged({at(space, "(1)"), at(space, "(2)")}));
  CHECK(k.privileged_sets.size() == 1);

  CHECK_THROWS_AS(rips::build_relative_rips(space, z, {w}, 2.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("face enumeration respects the simplex budget") {
  const auto space = MetricSpace::l1_lattice_ball(2, 2);
  CHECK_THROWS_AS(rips::build_rips(space, 4.0, 8, 10), std::runtime_error);
}

TEST_CASE("complex serialization groups simplices by dimension") {
  const auto space = MetricSpace::l1_lattice_ball(2, 1);
  const auto j = rips::complex_to_json(rips::build_rips(space, 2.0));
  CHECK(j["dimension"] == 4);
  CHECK(j["capped"] == false);
  CHECK(j["scale"] == 2.0);
  CHECK(j["simplices"]["0"].size() == 5);
  CHECK(j["simplices"]["4"].size() == 1);
  CHECK(j["simplices"]["4"][0].size() == 5);

  const auto rel = rips::build_relative_rips(space, {0, 1}, {{2, 3}}, 1.0, 2.0);
  const auto rj = rips::complex_to_json(rel);
  CHECK(rj["scale_large"] == 2.0);
  CHECK(rj["privileged"].size() == 1);

  const auto dot = rips::complex_to_dot(rel);
  CHECK(dot.find("graph skeleton") != std::string::npos);
  CHECK(dot.find("--") != std::string::npos);
}
