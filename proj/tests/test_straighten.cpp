#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "coarsekit/barycentric.hpp"
#include "coarsekit/metric_checks.hpp"
#include "coarsekit/metric_space.hpp"
#include "coarsekit/path_sampler.hpp"
#include "coarsekit/rips.hpp"
#include "coarsekit/rng.hpp"
#include "coarsekit/straighten.hpp"

using namespace coarsekit;
using metric::MetricSpace;
using rips::BarycentricPoint;

namespace {

const double kTol = rips::geometric_tolerance;
const double kStepFactor = 2.0 * std::sqrt(2.0) + 1.0;

rips::SimplicialComplex cross_complex() {
  return rips::build_rips(MetricSpace::l1_lattice_ball(2, 1), 2.0);
}

}  // namespace

TEST_CASE("barycentric points validate their coordinates") {
  const auto v = BarycentricPoint::vertex(3);
  CHECK(v.is_vertex());
  CHECK(v.coord_of(3) == 1.0);
  CHECK(v.coord_of(4) == 0.0);

  const auto mid = BarycentricPoint::make({1, 2}, {0.5, 0.5});
  CHECK_FALSE(mid.is_vertex());
  CHECK(mid.coord_of(2) == 0.5);

  CHECK_THROWS_AS(BarycentricPoint::make({1, 2}, {0.5}), std::invalid_argument);
  CHECK_THROWS_AS(BarycentricPoint::make({2, 1}, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(BarycentricPoint::make({1, 2}, {0.7, 0.7}), std::invalid_argument);
  CHECK_THROWS_AS(BarycentricPoint::make({1, 2}, {1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(BarycentricPoint::make({1, 1}, {0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("segment lengths in the unit-diameter embedding") {
  const auto a = BarycentricPoint::vertex(0);
  const auto b = BarycentricPoint::vertex(1);
  const auto m = BarycentricPoint::make({0, 1}, {0.5, 0.5});
  CHECK(segment_length(a, b) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(segment_length(a, m) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(segment_length(m, m) == 0.0);

  // Any two points of one simplex are at most one apart.
  Rng rng(11);
  const auto k = cross_complex();
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> ca(5), cb(5);
    double sa = 0.0, sb = 0.0;
    for (int i = 0; i < 5; ++i) {
      ca[i] = rng.in_range(0.01, 1.0);
      cb[i] = rng.in_range(0.01, 1.0);
      sa += ca[i];
      sb += cb[i];
    }
    for (int i = 0; i < 5; ++i) {
      ca[i] /= sa;
      cb[i] /= sb;
    }
    const auto support = k.maximal[0];
    const auto pa = BarycentricPoint::make(support, ca);
    const auto pb = BarycentricPoint::make(support, cb);
    CHECK(segment_length(pa, pb) <= 1.0 + kTol);
  }
}

TEST_CASE("path construction validates supports and carriers") {
  const auto k = cross_complex();
  const auto& top = k.maximal[0];
  const auto a = BarycentricPoint::vertex(top[0]);
  const auto b = BarycentricPoint::vertex(top[4]);

  const auto path = rips::PLPath::make(k, {a, b});
  CHECK(path.segments() == 1);
  CHECK(rips::path_length(path) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rips::path_dimension(path) == 1);

  const auto single = rips::PLPath::make(k, {a});
  CHECK(single.segments() == 0);
  CHECK(rips::path_length(single) == 0.0);
  CHECK(rips::path_dimension(single) == -1);

  // A carrier must be a simplex containing both endpoints of its segment.
  CHECK_THROWS_AS(rips::PLPath::make(k, {a, b}, {{top[0]}}), std::invalid_argument);
  CHECK_THROWS_AS(rips::PLPath::make(k, {a, b}, {{top[0], top[1]}}),
                  std::invalid_argument);
  // Support must be a simplex of the complex.
  CHECK_THROWS_AS(rips::PLPath::make(k, {BarycentricPoint::vertex(9999)}),
                  std::exception);
  CHECK_THROWS_AS(rips::PLPath::make(k, {}), std::invalid_argument);

  const auto j = rips::path_to_json(path);
  REQUIRE(j["points"].size() == 2);
  CHECK(j["points"][0]["support"].size() == 1);
  CHECK(j["points"][0]["coords"][0] == 1.0);
}

TEST_CASE("one projection step obeys the insertion bounds") {
  // A ball with several maximal cliques: walks that hop between cliques keep
  // their higher-dimensional breakpoints after normalization.
  const auto k = rips::build_rips(MetricSpace::l1_lattice_ball(2, 2), 2.0);
  Rng rng(23);

  int engaged = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const auto walk =
        rips::random_vertex_walk(k, k.vertices[rng.index(k.vertices.size())], rng, {});
    // The step normalizes before projecting, so gate on the dimension the
    // path has after normalization, not on the raw walk.
    if (rips::straighten_full(walk).start_dim < 2) continue;
    ++engaged;
    const auto step = rips::straighten_step(walk);
    const auto& rec = step.record;
    CHECK(rec.seg_len >= 0.0);
    CHECK(rec.left_len <= std::sqrt(2.0) * rec.seg_len + kTol);
    CHECK(rec.right_len <= std::sqrt(2.0) * rec.seg_len + kTol);
    CHECK(rec.mid_len <= rec.seg_len + kTol);
    CHECK(rec.left_len + rec.mid_len + rec.right_len <= kStepFactor * rec.seg_len + kTol);
    // Endpoints survive.
    CHECK(step.path.points.front().support == walk.points.front().support);
    CHECK(step.path.points.back().support == walk.points.back().support);
  }
  CHECK(engaged > 10);
}

TEST_CASE("straightening lands on the skeleton with controlled length") {
  const auto k = rips::build_rips(MetricSpace::l1_lattice_ball(2, 2), 2.0);
  Rng rng(29);

  int straightened = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto walk = rips::random_vertex_walk(k, k.vertices[rng.index(k.vertices.size())], rng, {});
    const auto out = rips::straighten_full(walk);
    CHECK(out.normalized_length <= out.input_length + kTol);
    CHECK(out.final_length == doctest::Approx(static_cast<double>(out.edge_count)));
    for (const auto& p : out.path.points) CHECK(p.is_vertex());
    CHECK(out.path.points.front().support == walk.points.front().support);
    CHECK(out.path.points.back().support == walk.points.back().support);
    if (out.start_dim >= 1) {
      const double budget =
          std::pow(kStepFactor, out.start_dim - 1) * out.normalized_length;
      CHECK(out.final_length <= budget + kTol);
    }
    // The final walk certifies a skeleton path, so the hop metric is below it.
    const auto hops = rips::skeleton_distance(k, walk.points.front().support[0],
                                              walk.points.back().support[0]);
    CHECK(hops.value() <= out.final_length + kTol);
    if (out.start_dim >= 2) ++straightened;

    // Straightening an already straight path only normalizes it.
    const auto again = rips::straighten_full(out.path);
    CHECK(again.replacements.empty());
    CHECK(again.final_length <= out.final_length + kTol);
  }
  CHECK(straightened > 10);
}

TEST_CASE("budget walks certify simplicial distance") {
  const auto space = MetricSpace::l1_lattice_ball(2, 2);
  const auto k = rips::build_rips(space, 2.0);
  Rng rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const std::uint32_t start = k.vertices[rng.index(k.vertices.size())];
    const int budget = rng.int_in(1, 3);
    const auto walk = rips::random_budget_walk(k, start, budget, rng, {});
    CHECK(walk.points.front().support == std::vector<std::uint32_t>{start});
    REQUIRE(walk.points.back().is_vertex());
    CHECK(rips::path_length(walk) <= static_cast<double>(budget) + kTol);
    // Straightening the certificate turns it into a skeleton walk whose
    // length bounds the hop distance between the endpoints.
    const auto out = rips::straighten_full(walk);
    const auto hops = rips::skeleton_distance(k, start, walk.points.back().support[0]);
    CHECK(hops.value() <= out.final_length + kTol);
  }
}
