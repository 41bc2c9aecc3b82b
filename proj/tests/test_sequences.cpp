#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "coarsekit/metric_space.hpp"
#include "coarsekit/sequences.hpp"
#include "coarsekit/sets.hpp"

using namespace coarsekit;
using metric::MetricSpace;
using seq::DecomposedSequence;
using seq::SequenceCover;

namespace {

metric::SpaceRef line(long long lo, long long hi) {
  std::vector<std::vector<long long>> pts;
  for (long long x = lo; x <= hi; ++x) pts.push_back({x});
  return MetricSpace::from_lattice_points("line", pts);
}

std::vector<std::uint32_t> span(const metric::SpaceRef& space, long long lo, long long hi) {
  std::vector<std::uint32_t> out;
  for (long long x = lo; x <= hi; ++x) {
    out.push_back(space->index_of(MetricSpace::lattice_id({x})).value());
  }
  return out;
}

/// One level, one part: Z = [0, 9], U = [0, 5], V = [4, 9].
SequenceCover overlap_cover(const metric::SpaceRef& space) {
  SequenceCover cover;
  cover.z.space = cover.u.space = cover.v.space = space;
  cover.z.levels = {{span(space, 0, 9)}};
  cover.u.levels = {{span(space, 0, 5)}};
  cover.v.levels = {{span(space, 4, 9)}};
  return cover;
}

}  // namespace

TEST_CASE("sequence levels union their parts") {
  const auto space = line(0, 9);
  DecomposedSequence z;
  z.space = space;
  z.levels = {{span(space, 0, 3), span(space, 6, 9)}, {span(space, 0, 9)}};
  CHECK(z.level_count() == 2);
  CHECK(z.level_union(0) == sets::unite(span(space, 0, 3), span(space, 6, 9)));
  CHECK(z.level_union(1) == span(space, 0, 9));
}

TEST_CASE("cover validation") {
  const auto space = line(0, 9);
  auto cover = overlap_cover(space);
  CHECK_NOTHROW(seq::validate_cover(cover));

  SUBCASE("shape mismatch") {
    cover.u.levels.push_back({});
    CHECK_THROWS_AS(seq::validate_cover(cover), std::invalid_argument);
  }
  SUBCASE("different spaces") {
    cover.u.space = line(0, 3);
    CHECK_THROWS_AS(seq::validate_cover(cover), std::invalid_argument);
  }
  SUBCASE("union short of z") {
    cover.u.levels[0][0] = span(space, 0, 2);
    cover.v.levels[0][0] = span(space, 5, 9);
    CHECK_THROWS_AS(seq::validate_cover(cover), std::invalid_argument);
  }
  SUBCASE("union beyond z") {
    cover.z.levels[0][0] = span(space, 0, 8);
    CHECK_THROWS_AS(seq::validate_cover(cover), std::invalid_argument);
  }
}

TEST_CASE("piece complexes are built per level and part") {
  const auto space = line(0, 9);
  DecomposedSequence z;
  z.space = space;
  z.levels = {{span(space, 0, 3), span(space, 6, 9)}, {span(space, 0, 9)}};

  const auto complex = seq::build_sequence_rips(z, {1.0, 2.0});
  REQUIRE(complex.piece_count() == 3);
  CHECK(complex.pieces[0].level == 0);
  CHECK(complex.pieces[0].part == 0);
  CHECK(complex.pieces[1].part == 1);
  CHECK(complex.pieces[2].level == 1);
  CHECK(complex.pieces[0].complex.scale == 1.0);
  CHECK(complex.pieces[2].complex.scale == 2.0);
  CHECK(complex.simplex_count() > 0);

  CHECK_THROWS_AS(seq::build_sequence_rips(z, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(seq::build_sequence_rips(z, {2.0, 1.0}), std::invalid_argument);
}

TEST_CASE("cover checking finds orphaned simplices") {
  const auto space = line(0, 9);
  const auto cover = overlap_cover(space);

  const auto good = seq::check_cover(cover, {1.0});
  CHECK(good.ok);
  CHECK(good.simplices_checked > 0);

  SUBCASE("orphaned point is pinned to a simplex") {
    auto broken = cover;
    // Point 7 leaves both colors: the union misses it.
    const auto victim = space->index_of("(7)").value();
    broken.u.levels[0][0] = sets::subtract(broken.u.levels[0][0], {victim});
    broken.v.levels[0][0] = sets::subtract(broken.v.levels[0][0], {victim});
    const auto res = seq::check_cover(broken, {1.0});
    REQUIRE_FALSE(res.ok);
    CHECK(res.witness["level"] == 0);
    CHECK(res.witness["part"] == 0);
    CHECK(res.witness["vertex"] == "(7)");
    CHECK(res.witness["simplex"].size() >= 1);
    CHECK(res.witness["simplex"][0] == "(7)");
  }

  SUBCASE("multi-level witnesses carry their coordinates") {
    SequenceCover two;
    two.z.space = two.u.space = two.v.space = space;
    two.z.levels = {{span(space, 0, 3)}, {span(space, 0, 9), span(space, 2, 5)}};
    two.u.levels = {{span(space, 0, 3)}, {span(space, 0, 9), span(space, 2, 5)}};
    two.v.levels = {{span(space, 0, 0)}, {span(space, 0, 0), span(space, 2, 2)}};
    REQUIRE(seq::check_cover(two, {1.0, 1.0}).ok);
    auto broken = two;
    const auto victim = space->index_of("(4)").value();
    broken.u.levels[1][1] = sets::subtract(broken.u.levels[1][1], {victim});
    const auto res = seq::check_cover(broken, {1.0, 1.0});
    REQUIRE_FALSE(res.ok);
    CHECK(res.witness["level"] == 1);
    CHECK(res.witness["part"] == 1);
    CHECK(res.witness["vertex"] == "(4)");
  }
}

TEST_CASE("intersection families on a segment") {
  const auto space = line(0, 9);

  SUBCASE("overlapping colors meet in the middle") {
    seq::RefinedCover refined;
    refined.cover = overlap_cover(space);
    refined.u_sub = {{{span(space, 0, 5)}}};
    refined.v_sub = {{{span(space, 4, 9)}}};
    const auto fams = seq::intersection_families(refined, {1.0}, {1.0}, {1.0});
    REQUIRE(fams.families[0][0].size() == 1);
    CHECK(fams.families[0][0][0] == span(space, 3, 6));
    CHECK(fams.omitted_empty == 0);

    const auto& report = fams.refinement_report[0];
    CHECK(report["level"] == 0);
    CHECK(report["T"] == 1.0);
    // Single sub-parts per color: gaps are vacuously infinite.
    CHECK(report["subPartGapU"] == "inf");
    CHECK(report["subPartThreshold"] == 2.0);
    CHECK(report["subPartSatisfied"] == true);
    CHECK(report["enlargedThreshold"] == 4.0);
    CHECK(report["enlargedSatisfied"] == true);
  }

  SUBCASE("distant colors are omitted as empty") {
    SequenceCover cover;
    cover.z.space = cover.u.space = cover.v.space = space;
    cover.z.levels = {{sets::unite(span(space, 0, 1), span(space, 8, 9))}};
    cover.u.levels = {{span(space, 0, 1)}};
    cover.v.levels = {{span(space, 8, 9)}};
    seq::RefinedCover refined;
    refined.cover = cover;
    refined.u_sub = {{{span(space, 0, 1)}}};
    refined.v_sub = {{{span(space, 8, 9)}}};
    const auto fams = seq::intersection_families(refined, {1.0}, {1.0}, {1.0});
    CHECK(fams.families[0][0].empty());
    CHECK(fams.omitted_empty == 1);
  }

  SUBCASE("sub-part gaps are measured within a color") {
    SequenceCover cover;
    cover.z.space = cover.u.space = cover.v.space = space;
    cover.z.levels = {{span(space, 0, 9)}};
    cover.u.levels = {{sets::unite(span(space, 0, 1), span(space, 4, 5))}};
    cover.v.levels = {{sets::normalized(
        sets::unite(span(space, 2, 3), span(space, 6, 9)))}};
    seq::RefinedCover refined;
    refined.cover = cover;
    refined.u_sub = {{{span(space, 0, 1), span(space, 4, 5)}}};
    refined.v_sub = {{{cover.v.levels[0][0]}}};
    const auto fams = seq::intersection_families(refined, {1.0}, {1.0}, {1.0});
    CHECK(fams.refinement_report[0]["subPartGapU"] == 3.0);
    CHECK(fams.refinement_report[0]["subPartSatisfied"] == true);
    CHECK(fams.families[0][0].size() == 2);
  }

  SUBCASE("the enlargement margin must be positive") {
    seq::RefinedCover refined;
    refined.cover = overlap_cover(space);
    refined.u_sub = {{{span(space, 0, 5)}}};
    refined.v_sub = {{{span(space, 4, 9)}}};
    CHECK_THROWS_AS(seq::intersection_families(refined, {0.0}, {1.0}, {1.0}),
                    std::invalid_argument);
  }

  SUBCASE("sub-parts must recompose their color") {
    seq::RefinedCover refined;
    refined.cover = overlap_cover(space);
    refined.u_sub = {{{span(space, 0, 4)}}};  // misses point 5
    refined.v_sub = {{{span(space, 4, 9)}}};
    CHECK_THROWS_AS(seq::intersection_families(refined, {1.0}, {1.0}, {1.0}),
                    std::invalid_argument);
  }
}

TEST_CASE("cover serialization round trips") {
  const auto space = line(0, 9);
  const auto cover = overlap_cover(space);
  const auto j = seq::cover_to_json(cover);
  CHECK(j.contains("space"));
  CHECK(j.contains("z"));
  CHECK(j.contains("u"));
  CHECK(j.contains("v"));
  const auto back = seq::cover_from_json(j);
  CHECK(seq::cover_to_json(back) == j);
  CHECK_NOTHROW(seq::validate_cover(back));

  seq::RefinedCover refined;
  refined.cover = cover;
  refined.u_sub = {{{span(space, 0, 2), span(space, 3, 5)}}};
  refined.v_sub = {{{span(space, 4, 9)}}};
  const auto rj = seq::refined_cover_to_json(refined);
  const auto rback = seq::refined_cover_from_json(rj);
  CHECK(seq::refined_cover_to_json(rback) == rj);
  CHECK(rback.u_sub[0][0].size() == 2);

  // Without explicit refinements every color is its own single sub-part.
  auto plain = rj;
  plain.erase("uSub");
  plain.erase("vSub");
  const auto defaulted = seq::refined_cover_from_json(plain);
  CHECK(defaulted.u_sub[0][0].size() == 1);
  CHECK(defaulted.u_sub[0][0][0] == span(space, 0, 5));
  CHECK(defaulted.v_sub[0][0].size() == 1);
}
