#include "coarsekit/metric_checks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "coarsekit/sets.hpp"

namespace coarsekit::rips {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInflation = 2.0 * kSqrt2 + 1.0;

double ratio_or_zero(double num, double den) { return den > 1e-12 ? num / den : 0.0; }

}  // namespace

double ambient_constant(const metric::SpaceRef& space, const std::vector<std::uint32_t>& points,
                        double s) {
  // dim_cap 1 skips face enumeration; the true dimension is still recorded.
  auto ambient = build_rips(space, points, s, 1);
  return comparison_constant(std::max(ambient.dimension, 0));
}

double ambient_constant(const metric::SpaceRef& space, double s) {
  std::vector<std::uint32_t> all(space->size());
  for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
  return ambient_constant(space, all, s);
}

StepBoundsOutcome check_straighten_bounds(const SimplicialComplex& k, int paths, Rng& rng,
                                          const WalkParams& params) {
  StepBoundsOutcome out;
  out.record.name = "straighten-step-bounds";
  nlohmann::ordered_json witnesses = nlohmann::ordered_json::array();

  for (int i = 0; i < paths; ++i) {
    const auto start = k.vertices[rng.index(k.vertices.size())];
    PLPath path = random_vertex_walk(k, start, rng, params);
    StraightenOutcome result = straighten_full(path);
    ++out.paths;

    for (const auto& rec : result.replacements) {
      ++out.replacements;
      const double tol = geometric_tolerance;
      const double sub_path = rec.left_len + rec.mid_len + rec.right_len;
      const bool ok = rec.left_len <= kSqrt2 * rec.seg_len + tol &&
                      rec.right_len <= kSqrt2 * rec.seg_len + tol &&
                      rec.mid_len <= rec.seg_len + tol &&
                      sub_path <= kInflation * rec.seg_len + tol;
      out.worst_projection =
          std::max({out.worst_projection, ratio_or_zero(rec.left_len, kSqrt2 * rec.seg_len),
                    ratio_or_zero(rec.right_len, kSqrt2 * rec.seg_len)});
      out.worst_subpath =
          std::max(out.worst_subpath, ratio_or_zero(sub_path, kInflation * rec.seg_len));
      if (!ok) {
        ++out.failures;
        if (witnesses.size() < 5) {
          witnesses.push_back({{"path", i},
                               {"segment", rec.segment},
                               {"dim", rec.dim},
                               {"segmentLength", rec.seg_len},
                               {"left", rec.left_len},
                               {"mid", rec.mid_len},
                               {"right", rec.right_len}});
        }
      }
    }
  }

  out.record.status = out.failures == 0 ? report::Status::Pass : report::Status::Fail;
  out.record.details = {{"paths", out.paths},
                        {"replacements", out.replacements},
                        {"failures", out.failures},
                        {"worstProjectionRatio", out.worst_projection},
                        {"worstSubPathRatio", out.worst_subpath}};
  if (!witnesses.empty()) out.record.details["witnesses"] = witnesses;
  return out;
}

ComparisonOutcome check_metric_comparison(const SimplicialComplex& k, int samples, Rng& rng,
                                          const metric::MetricSpace* eval_space,
                                          const WalkParams& params) {
  ComparisonOutcome out;
  out.record.name = "metric-comparison";
  nlohmann::ordered_json witnesses = nlohmann::ordered_json::array();
  const metric::MetricSpace& eval = eval_space ? *eval_space : *k.space;
  const double s = k.scale;

  for (int i = 0; i < samples; ++i) {
    const auto start = k.vertices[rng.index(k.vertices.size())];
    PLPath path = random_vertex_walk(k, start, rng, params);
    const std::uint32_t x = path.points.front().support.front();
    const std::uint32_t y = path.points.back().support.front();
    const double raw_length = path_length(path);
    const int dim = std::max(path_dimension(path), 0);

    StraightenOutcome result = straighten_full(path);
    const double d = eval.dist_value(x, y);
    const double bound_raw = s * comparison_constant(dim) * raw_length;
    const double bound_straight = s * result.final_length;
    ++out.samples;
    out.max_ratio = std::max(out.max_ratio, ratio_or_zero(d, bound_raw));
    out.max_straight_ratio = std::max(out.max_straight_ratio, ratio_or_zero(d, bound_straight));

    const bool endpoints_kept = result.path.points.front().support.front() == x &&
                                result.path.points.back().support.front() == y;
    const bool ok = endpoints_kept && d <= bound_raw + geometric_tolerance &&
                    d <= bound_straight + geometric_tolerance;
    if (!ok) {
      ++out.failures;
      if (witnesses.size() < 5) {
        witnesses.push_back({{"sample", i},
                             {"x", k.space->id(x)},
                             {"y", k.space->id(y)},
                             {"distance", d},
                             {"pathLength", raw_length},
                             {"pathDim", dim},
                             {"rawBound", bound_raw},
                             {"straightenedBound", bound_straight},
                             {"endpointsKept", endpoints_kept}});
      }
    }
  }

  out.record.status = out.failures == 0 ? report::Status::Pass : report::Status::Fail;
  out.record.details = {{"samples", out.samples},
                        {"failures", out.failures},
                        {"maxRatio", out.max_ratio},
                        {"maxStraightenedRatio", out.max_straight_ratio},
                        {"scale", s},
                        {"complexDim", k.dimension}};
  if (!witnesses.empty()) out.record.details["witnesses"] = witnesses;
  return out;
}

RelNbhdOutcome check_rel_nbhd(const metric::SpaceRef& space, const std::vector<std::uint32_t>& z,
                              const std::vector<std::vector<std::uint32_t>>& w_family, double s,
                              double s_large, double t, int samples, Rng& rng,
                              double constant_factor) {
  RelNbhdOutcome out;
  out.record.name = "relative-neighborhood-bound";
  nlohmann::ordered_json witnesses = nlohmann::ordered_json::array();

  SimplicialComplex k = build_relative_rips(space, z, w_family, s, s_large);
  std::vector<std::uint32_t> w_union;
  for (const auto& w : w_family) w_union = sets::unite(w_union, sets::normalized(w));

  const double constant = ambient_constant(space, s);
  const double bound = (t + 1.0) * constant * s * constant_factor;

  if (!w_union.empty()) {
    for (int i = 0; i < samples; ++i) {
      const std::uint32_t w = w_union[rng.index(w_union.size())];
      // Walks from a privileged vertex, read backwards, certify that the end
      // vertex is within simplicial distance t of the privileged subcomplex.
      PLPath walk = random_budget_walk(k, w, t, rng);
      const std::uint32_t x = walk.points.back().support.front();
      const double measured = metric::min_set_distance(*space, {x}, w_union).value();
      ++out.witnesses;
      out.max_ratio = std::max(out.max_ratio, ratio_or_zero(measured, bound));
      if (measured > bound + geometric_tolerance) {
        ++out.failures;
        if (witnesses.size() < 5) {
          witnesses.push_back({{"sample", i},
                               {"vertex", space->id(x)},
                               {"from", space->id(w)},
                               {"walkLength", path_length(walk)},
                               {"distanceToFamily", measured},
                               {"bound", bound}});
        }
      }
    }
  }

  out.record.status = out.failures == 0 ? report::Status::Pass : report::Status::Fail;
  out.record.details = {{"witnesses", out.witnesses},
                        {"failures", out.failures},
                        {"bound", bound},
                        {"constant", constant},
                        {"maxRatio", out.max_ratio}};
  if (!witnesses.empty()) out.record.details["failureWitnesses"] = witnesses;
  return out;
}

RelSeparationOutcome check_rel_separation(const metric::SpaceRef& space,
                                          const std::vector<std::uint32_t>& x1,
                                          const std::vector<std::uint32_t>& x2,
                                          const std::vector<std::vector<std::uint32_t>>& w1,
                                          const std::vector<std::vector<std::uint32_t>>& w2,
                                          double s, double s_large, double path_budget,
                                          int probes, Rng& rng) {
  RelSeparationOutcome out;
  out.record.name = "relative-separation";

  std::vector<std::uint32_t> v1 = sets::normalized(x1);
  for (const auto& w : w1) v1 = sets::unite(v1, sets::normalized(w));
  std::vector<std::uint32_t> v2 = sets::normalized(x2);
  for (const auto& w : w2) v2 = sets::unite(v2, sets::normalized(w));
  const auto z_full = sets::unite(sets::normalized(x1), sets::normalized(x2));

  const double constant = ambient_constant(space, z_full, s);
  out.threshold = (path_budget + 2.0) * s * constant;
  out.separation = metric::min_set_distance(*space, v1, v2).value();
  out.hypothesis_held = out.separation > out.threshold;

  if (!out.hypothesis_held) {
    out.record.status = report::Status::SkippedHypothesis;
    out.record.details = {{"reason", "pieces are not separated beyond (L+2)*s*C"},
                          {"separation", out.separation},
                          {"threshold", out.threshold}};
    return out;
  }

  std::vector<std::vector<std::uint32_t>> family;
  family.reserve(w1.size() + w2.size());
  for (const auto& w : w1) family.push_back(w);
  for (const auto& w : w2) family.push_back(w);
  SimplicialComplex k = build_relative_rips(space, z_full, family, s, s_large);

  nlohmann::ordered_json witness;
  for (int i = 0; i < probes && witness.is_null(); ++i) {
    if (v1.empty()) break;
    const std::uint32_t start = v1[rng.index(v1.size())];
    PLPath walk = random_budget_walk(k, start, path_budget, rng);
    ++out.probes;
    double reached_at = 0.0;
    for (std::size_t p = 1; p < walk.points.size(); ++p) {
      reached_at += segment_length(walk.points[p - 1], walk.points[p]);
      if (sets::subset(walk.points[p].support, v2)) {
        witness = {{"probe", i},
                   {"from", space->id(start)},
                   {"reached", space->id(walk.points[p].support.front())},
                   {"pathLength", reached_at}};
        break;
      }
    }
  }

  out.record.status = witness.is_null() ? report::Status::Pass : report::Status::Fail;
  out.record.details = {{"probes", out.probes},
                        {"separation", out.separation},
                        {"threshold", out.threshold}};
  if (!witness.is_null()) out.record.details["witness"] = witness;
  return out;
}

}  // namespace coarsekit::rips
