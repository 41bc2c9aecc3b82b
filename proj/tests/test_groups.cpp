#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "coarsekit/groups.hpp"

using namespace coarsekit;
using groups::GroupSpec;

TEST_CASE("word ball sizes match hand counts") {
  CHECK(groups::cayley_ball(GroupSpec::free_abelian(1), 3).space->size() == 7);
  CHECK(groups::cayley_ball(GroupSpec::free_abelian(2), 2).space->size() == 13);
  CHECK(groups::cayley_ball(GroupSpec::free_group(2), 2).space->size() == 17);
  CHECK(groups::cayley_ball(groups::heisenberg_spec(), 1).space->size() == 5);
  CHECK(groups::cayley_ball(groups::heisenberg_spec(), 2).space->size() == 17);
}

TEST_CASE("depths equal exact word distances to the identity") {
  for (const auto& spec : {GroupSpec::free_abelian(2), GroupSpec::free_group(2),
                           groups::heisenberg_spec()}) {
    const auto ball = groups::cayley_ball(spec, 2);
    REQUIRE(ball.space->size() == ball.depth.size());
    CHECK(ball.depth[0] == 0);
    for (std::uint32_t i = 0; i < ball.space->size(); ++i) {
      CHECK(ball.space->dist_value(0, i) == static_cast<double>(ball.depth[i]));
      CHECK(ball.depth[i] <= ball.radius);
    }
  }
}

TEST_CASE("free abelian distances are l1 differences") {
  const auto ball = groups::cayley_ball(GroupSpec::free_abelian(2), 2);
  const auto at = [&](const char* id) { return ball.space->index_of(id).value(); };
  CHECK(ball.space->dist_value(at("(1,1)"), at("(-1,-1)")) == 4.0);
  CHECK(ball.space->dist_value(at("(2,0)"), at("(0,2)")) == 4.0);
  CHECK(ball.space->dist_value(at("(1,0)"), at("(1,1)")) == 1.0);
}

TEST_CASE("free group distances use reduced words") {
  const auto ball = groups::cayley_ball(GroupSpec::free_group(2), 2);
  const auto at = [&](const char* id) { return ball.space->index_of(id).value(); };
  // a and aB share the prefix a, so they are adjacent; a and bA differ
  // everywhere, so the path goes through much of both words.
  CHECK(ball.space->dist_value(at("a"), at("aB")) == 1.0);
  CHECK(ball.space->dist_value(at("ab"), at("aB")) == 2.0);
  CHECK(ball.space->dist_value(at("a"), at("bA")) == 3.0);
  CHECK(ball.space->dist_value(at("ab"), at("ba")) == 4.0);
}

TEST_CASE("heisenberg spec coincides with its explicit matrix form") {
  const GroupSpec explicit_form = GroupSpec::integer_matrix({
      {{1, 1, 0}, {0, 1, 0}, {0, 0, 1}},
      {{1, 0, 0}, {0, 1, 1}, {0, 0, 1}},
  });
  const auto a = groups::cayley_ball(groups::heisenberg_spec(), 2);
  const auto b = groups::cayley_ball(explicit_form, 2);
  REQUIRE(a.space->size() == b.space->size());
  for (std::uint32_t i = 0; i < a.space->size(); ++i) {
    CHECK(a.space->id(i) == b.space->id(i));
    CHECK(a.depth[i] == b.depth[i]);
  }
  // The generators do not commute: ab != ba as matrix products.
  const auto ab = a.space->index_of("1,1,1;0,1,1;0,0,1");
  const auto ba = a.space->index_of("1,1,0;0,1,1;0,0,1");
  REQUIRE(ab.has_value());
  REQUIRE(ba.has_value());
  CHECK(*ab != *ba);
}

TEST_CASE("node cap aborts runaway exploration") {
  CHECK_THROWS_WITH_AS(groups::cayley_ball(GroupSpec::free_group(2), 6, 100),
                       doctest::Contains("COARSEKIT_NODE_CAP"), std::runtime_error);
  CHECK(groups::default_node_cap() >= 100);
}

TEST_CASE("matrix generators must be invertible over the integers") {
  const auto ball = [](GroupSpec spec) { return groups::cayley_ball(spec, 1); };
  CHECK_THROWS_AS(ball(GroupSpec::integer_matrix({{{2, 0}, {0, 1}}})),
                  std::invalid_argument);
  CHECK_THROWS_AS(ball(GroupSpec::integer_matrix({{{0, 0}, {0, 0}}})),
                  std::invalid_argument);
  CHECK_THROWS_AS(ball(GroupSpec::integer_matrix({{{1, 0, 0}, {0, 1, 0}}})),
                  std::invalid_argument);
  CHECK_THROWS_AS(ball(GroupSpec::integer_matrix({})), std::invalid_argument);
  // det -1 generators are fine: this is the swap matrix, giving a 2-element orbit.
  CHECK_NOTHROW(ball(GroupSpec::integer_matrix({{{0, 1}, {1, 0}}})));
}

TEST_CASE("rank validation") {
  CHECK_THROWS_AS(groups::cayley_ball(GroupSpec::free_abelian(0), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(groups::cayley_ball(GroupSpec::free_group(-1), 1),
                  std::invalid_argument);
}
