#include "coarsekit/suite.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "coarsekit/control.hpp"
#include "coarsekit/fdc.hpp"
#include "coarsekit/groups.hpp"
#include "coarsekit/modules.hpp"
#include "coarsekit/sequences.hpp"
#include "coarsekit/sets.hpp"

namespace coarsekit::suite {

namespace {

using nlohmann::ordered_json;
using report::CheckRecord;
using report::Status;

metric::SpaceRef thin_lattice(const metric::MetricSpace& ball, Rng& rng, double keep,
                              std::string label) {
  std::vector<std::vector<long long>> pts;
  for (std::uint32_t i = 0; i < ball.size(); ++i) {
    if (!rng.chance(keep)) continue;
    const long long* c = ball.coords(i);
    pts.emplace_back(c, c + ball.lattice_dim());
  }
  if (pts.size() < 6) return nullptr;
  return metric::MetricSpace::from_lattice_points(std::move(label), std::move(pts));
}

/// Evenly spread `total` draws over `slots`, front-loading the remainder.
int share_of(int total, int slots, int slot) {
  return total / slots + (slot < total % slots ? 1 : 0);
}

std::vector<std::uint32_t> all_points(const metric::MetricSpace& space) {
  std::vector<std::uint32_t> out(space.size());
  for (std::uint32_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

std::vector<std::uint32_t> random_subset(std::size_t n, Rng& rng, double keep) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t p = 0; p < n; ++p) {
    if (rng.chance(keep)) out.push_back(p);
  }
  if (out.empty()) out.push_back(static_cast<std::uint32_t>(rng.index(n)));
  return out;
}

/// Same metric scaled by `factor`; metric axioms survive scaling. Used as the
/// deliberately wrong evaluation space in negative controls.
metric::SpaceRef inflated_copy(const metric::MetricSpace& space, double factor) {
  const std::size_t n = space.size();
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) rows[i][j] = space.dist_value(i, j) * factor;
  }
  return metric::MetricSpace::from_matrix(space.label() + "-inflated", space.ids(), rows);
}

}  // namespace

GeometryInstance random_rips_instance(Rng& rng) {
  for (int attempt = 0; attempt < 32; ++attempt) {
    metric::SpaceRef space;
    double s = 0.0;
    switch (rng.index(4)) {
      case 0: {
        const auto ball = metric::MetricSpace::l1_lattice_ball(2, rng.int_in(2, 3));
        space = thin_lattice(*ball, rng, rng.in_range(0.6, 0.95), "plane-patch");
        s = rng.chance(0.5) ? 2.0 : 3.0;
        break;
      }
      case 1: {
        const auto ball = metric::MetricSpace::l1_lattice_ball(3, 2);
        space = thin_lattice(*ball, rng, rng.in_range(0.35, 0.6), "grid3-patch");
        s = 2.0;
        break;
      }
      case 2: {
        space = groups::cayley_ball(groups::GroupSpec::free_group(2), 2).space;
        s = 2.0;
        break;
      }
      default: {
        space = groups::cayley_ball(groups::GroupSpec::free_abelian(2), rng.int_in(2, 3)).space;
        s = 2.0;
        break;
      }
    }
    if (!space) continue;
    auto k = rips::build_rips(space, s, 6);
    if (!k.capped && k.dimension >= 2 && k.dimension <= 5) {
      return {std::move(space), s, std::move(k)};
    }
  }
  // Every draw was degenerate; fall back to a fixed instance of dimension 4.
  auto space = metric::MetricSpace::l1_lattice_ball(2, 2);
  auto k = rips::build_rips(space, 2.0, 6);
  return {std::move(space), 2.0, std::move(k)};
}

void battery_straighten_bounds(report::RunReport& rep, Rng rng, int paths) {
  const int instances = std::clamp(paths / 50, 2, 12);
  std::size_t done = 0, replacements = 0, failures = 0;
  double worst_projection = 0.0, worst_subpath = 0.0;
  ordered_json witness;
  for (int i = 0; i < instances; ++i) {
    auto inst = random_rips_instance(rng);
    const auto out =
        rips::check_straighten_bounds(inst.complex, share_of(paths, instances, i), rng);
    done += out.paths;
    replacements += out.replacements;
    failures += out.failures;
    worst_projection = std::max(worst_projection, out.worst_projection);
    worst_subpath = std::max(worst_subpath, out.worst_subpath);
    if (out.failures > 0 && witness.is_null()) witness = out.record.details;
  }
  CheckRecord rec;
  rec.name = "straighten-step-bounds";
  // A run with zero replacements never exercised the projection bounds at
  // all, so vacuous passes count as failures.
  rec.status = (failures == 0 && replacements > 0) ? Status::Pass : Status::Fail;
  rec.details = {{"instances", instances},
                 {"paths", done},
                 {"replacements", replacements},
                 {"failures", failures},
                 {"worstProjectionRatio", worst_projection},
                 {"worstSubpathRatio", worst_subpath}};
  if (!witness.is_null()) rec.details["witness"] = witness;
  rep.add(std::move(rec));
}

void battery_metric_comparison(report::RunReport& rep, Rng rng, int samples) {
  const int instances = std::clamp(samples / 50, 2, 12);
  std::size_t done = 0, failures = 0;
  double max_ratio = 0.0, max_straight_ratio = 0.0;
  ordered_json witness;
  for (int i = 0; i < instances; ++i) {
    auto inst = random_rips_instance(rng);
    const auto out =
        rips::check_metric_comparison(inst.complex, share_of(samples, instances, i), rng);
    done += out.samples;
    failures += out.failures;
    max_ratio = std::max(max_ratio, out.max_ratio);
    max_straight_ratio = std::max(max_straight_ratio, out.max_straight_ratio);
    if (out.failures > 0 && witness.is_null()) witness = out.record.details;
  }
  CheckRecord rec;
  rec.name = "metric-comparison";
  rec.status = failures == 0 ? Status::Pass : Status::Fail;
  rec.details = {{"instances", instances},
                 {"samples", done},
                 {"failures", failures},
                 {"maxRatio", max_ratio},
                 {"maxStraightenedRatio", max_straight_ratio}};
  if (!witness.is_null()) rec.details["witness"] = witness;
  rep.add(std::move(rec));

  // Negative control: evaluate the same comparison against a tenfold copy of
  // the metric. Short walks keep path lengths small, so the inflated
  // distances must overshoot the bound somewhere.
  auto inst = random_rips_instance(rng);
  const auto corrupt = inflated_copy(*inst.space, 10.0);
  const rips::WalkParams tight{2, 0.6, 0.5};
  const int control_samples = std::max(50, samples / 10);
  const auto out =
      rips::check_metric_comparison(inst.complex, control_samples, rng, corrupt.get(), tight);
  CheckRecord control;
  control.name = "metric-comparison-inflated-metric";
  control.status = out.failures >= 1 ? Status::Pass : Status::Fail;
  control.details = {{"samples", out.samples},
                     {"failuresDetected", out.failures},
                     {"maxRatio", out.max_ratio},
                     {"expected", "at least one comparison failure"}};
  rep.add(std::move(control));
}

void battery_lattice_fdc(report::RunReport& rep, Rng rng, int mutations) {
  for (int dim = 1; dim <= 3; ++dim) {
    const auto cert = fdc::decompose_lattice(dim, 20, std::vector<double>(dim, 5.0));
    const auto verdict = fdc::verify_certificate(cert);
    const int depth = fdc::certificate_depth(cert.root);

    CheckRecord rec;
    rec.name = "lattice-slab-certificate-dim" + std::to_string(dim);
    rec.status = (verdict.ok && depth == dim) ? Status::Pass : Status::Fail;
    rec.details = {{"points", cert.space->size()},
                   {"depth", depth},
                   {"expectedDepth", dim},
                   {"verified", verdict.ok}};
    if (!verdict.ok) {
      rec.details["witness"] = {{"nodePath", verdict.node_path},
                                {"clause", verdict.clause},
                                {"detail", verdict.witness}};
    }
    rep.add(std::move(rec));

    int rejected = 0;
    ordered_json bad;
    for (int m = 0; m < mutations; ++m) {
      const auto mut = fdc::move_point_mutation(cert, rng);
      const auto v = fdc::verify_certificate(mut.cert);
      bool good = !v.ok && v.clause == "disjointness" && v.node_path == mut.node_path;
      if (good) {
        // Replay the reported pair through the metric.
        const auto pa = cert.space->index_of(v.witness.at("pointA").get<std::string>());
        const auto pb = cert.space->index_of(v.witness.at("pointB").get<std::string>());
        const double r = v.witness.at("r").get<double>();
        good = pa.has_value() && pb.has_value() && cert.space->dist_value(*pa, *pb) <= r;
      }
      if (good) {
        ++rejected;
      } else if (bad.is_null()) {
        bad = {{"mutation", m},
               {"mutatedPath", mut.node_path},
               {"reportedPath", v.node_path},
               {"clause", v.clause},
               {"verifyOk", v.ok}};
      }
    }
    CheckRecord muts;
    muts.name = "lattice-slab-mutations-dim" + std::to_string(dim);
    muts.status = rejected == mutations ? Status::Pass : Status::Fail;
    muts.details = {{"mutations", mutations}, {"rejectedWithWitness", rejected}};
    if (!bad.is_null()) muts.details["witness"] = bad;
    rep.add(std::move(muts));
  }
}

void battery_weaken(report::RunReport& rep, Rng rng, int pairs) {
  int verified = 0;
  ordered_json bad;
  for (int i = 0; i < pairs; ++i) {
    const int dim = 1 + static_cast<int>(rng.index(2));
    const long long radius = rng.int_in(5, 9);
    std::vector<double> schedule;
    double min_r = 1e300;
    for (int k = 0; k < dim; ++k) {
      const double r = static_cast<double>(rng.int_in(3, 6));
      schedule.push_back(r);
      min_r = std::min(min_r, r);
    }
    const auto cert = fdc::decompose_lattice(dim, radius, schedule);
    const double t = rng.chance(0.15) ? 0.0 : rng.in_range(0.0, 0.95 * min_r / 2.0);

    const std::size_t n_targets = 1 + rng.index(3);
    std::vector<std::vector<std::uint32_t>> targets;
    const double keep = rng.in_range(0.3, 0.9);
    for (std::size_t b = 0; b < n_targets; ++b) {
      targets.push_back(sets::normalized(random_subset(cert.space->size(), rng, keep)));
    }
    const std::vector<std::size_t> assignment(n_targets, 0);

    const auto weak = fdc::weaken_to_subneighborhoods(cert, t, targets, assignment);
    const auto v = fdc::verify_certificate(weak);
    const bool good = v.ok && weak.family.size() == n_targets &&
                      fdc::certificate_depth(weak.root) == fdc::certificate_depth(cert.root);
    if (good) {
      ++verified;
    } else if (bad.is_null()) {
      bad = {{"pair", i},       {"dim", dim},
             {"t", t},          {"minR", min_r},
             {"ok", v.ok},      {"nodePath", v.node_path},
             {"clause", v.clause}, {"detail", v.witness}};
    }
  }
  CheckRecord rec;
  rec.name = "weaken-within-margin";
  rec.status = verified == pairs ? Status::Pass : Status::Fail;
  rec.details = {{"pairs", pairs}, {"verified", verified}};
  if (!bad.is_null()) rec.details["witness"] = bad;
  rep.add(std::move(rec));

  // Past the margin the disjointness radii are exhausted and the rebuild
  // must refuse.
  const int error_cases = std::max(5, pairs / 10);
  int refused = 0;
  ordered_json leak;
  for (int i = 0; i < error_cases; ++i) {
    const double r = static_cast<double>(rng.int_in(3, 6));
    const auto cert = fdc::decompose_lattice(1, 6, {r});
    const double t = r / 2.0 + rng.in_range(0.0, 2.0);
    const std::vector<std::vector<std::uint32_t>> targets = {all_points(*cert.space)};
    try {
      static_cast<void>(fdc::weaken_to_subneighborhoods(cert, t, targets, {0}));
      if (leak.is_null()) leak = {{"case", i}, {"r", r}, {"t", t}, {"outcome", "no error raised"}};
    } catch (const std::invalid_argument& e) {
      if (std::string(e.what()).find("disjointness exhausted") != std::string::npos) {
        ++refused;
      } else if (leak.is_null()) {
        leak = {{"case", i}, {"r", r}, {"t", t}, {"outcome", e.what()}};
      }
    }
  }
  CheckRecord err;
  err.name = "weaken-margin-exhausted";
  err.status = refused == error_cases ? Status::Pass : Status::Fail;
  err.details = {{"cases", error_cases}, {"refused", refused}};
  if (!leak.is_null()) err.details["witness"] = leak;
  rep.add(std::move(err));
}

void battery_sequence_cover(report::RunReport& rep, Rng rng, int covers) {
  int genuine = 0, orphaned = 0;
  std::size_t simplices = 0;
  ordered_json bad_genuine, bad_orphan;

  for (int i = 0; i < covers; ++i) {
    const int dim = 1 + static_cast<int>(rng.index(2));
    const auto space = dim == 1 ? metric::MetricSpace::l1_lattice_ball(1, rng.int_in(4, 8))
                                : metric::MetricSpace::l1_lattice_ball(2, rng.int_in(2, 3));
    const std::size_t n = space->size();
    const std::size_t levels = 1 + rng.index(3);

    std::vector<double> s_schedule;
    double s = 1.0 + static_cast<double>(rng.index(2));
    for (std::size_t r = 0; r < levels; ++r) {
      s_schedule.push_back(s);
      if (rng.chance(0.4)) s += 1.0;
    }

    seq::SequenceCover cover;
    cover.z.space = cover.u.space = cover.v.space = space;
    for (std::size_t r = 0; r < levels; ++r) {
      cover.z.levels.emplace_back();
      cover.u.levels.emplace_back();
      cover.v.levels.emplace_back();
      const std::size_t parts = 1 + rng.index(2);
      for (std::size_t a = 0; a < parts; ++a) {
        auto zp = random_subset(n, rng, 0.5);
        std::vector<std::uint32_t> up, vp;
        for (const auto p : zp) {
          switch (rng.index(3)) {
            case 0: up.push_back(p); break;
            case 1: vp.push_back(p); break;
            default:
              up.push_back(p);
              vp.push_back(p);
              break;
          }
        }
        cover.z.levels[r].push_back(std::move(zp));
        cover.u.levels[r].push_back(std::move(up));
        cover.v.levels[r].push_back(std::move(vp));
      }
    }

    const auto check = seq::check_cover(cover, s_schedule);
    simplices += check.simplices_checked;
    if (check.ok) {
      ++genuine;
    } else if (bad_genuine.is_null()) {
      bad_genuine = check.witness;
    }

    // Orphan one covered point and the scan must name it.
    auto mutated = cover;
    const std::size_t mr = rng.index(levels);
    const std::size_t ma = rng.index(mutated.z.levels[mr].size());
    const auto& zvec = mutated.z.levels[mr][ma];
    const std::uint32_t victim = zvec[rng.index(zvec.size())];
    const auto erase_point = [victim](std::vector<std::uint32_t>& v) {
      v.erase(std::remove(v.begin(), v.end(), victim), v.end());
    };
    erase_point(mutated.u.levels[mr][ma]);
    erase_point(mutated.v.levels[mr][ma]);

    const auto broken = seq::check_cover(mutated, s_schedule);
    const bool caught = !broken.ok && broken.witness.at("level").get<std::size_t>() == mr &&
                        broken.witness.at("part").get<std::size_t>() == ma &&
                        broken.witness.at("vertex").get<std::string>() == space->id(victim);
    if (caught) {
      ++orphaned;
    } else if (bad_orphan.is_null()) {
      bad_orphan = {{"cover", i},
                    {"level", mr},
                    {"part", ma},
                    {"orphan", space->id(victim)},
                    {"ok", broken.ok},
                    {"witness", broken.witness}};
    }
  }

  CheckRecord rec;
  rec.name = "sequence-cover-genuine";
  rec.status = genuine == covers ? Status::Pass : Status::Fail;
  rec.details = {{"covers", covers}, {"passed", genuine}, {"simplicesChecked", simplices}};
  if (!bad_genuine.is_null()) rec.details["witness"] = bad_genuine;
  rep.add(std::move(rec));

  CheckRecord orp;
  orp.name = "sequence-cover-orphan-detection";
  orp.status = orphaned == covers ? Status::Pass : Status::Fail;
  orp.details = {{"mutations", covers}, {"caughtWithWitness", orphaned}};
  if (!bad_orphan.is_null()) orp.details["witness"] = bad_orphan;
  rep.add(std::move(orp));
}

void battery_rel_nbhd(report::RunReport& rep, Rng rng, int instances) {
  std::size_t witnesses = 0, failures = 0;
  double max_ratio = 0.0;
  ordered_json bad;
  for (int i = 0; i < instances; ++i) {
    auto inst = random_rips_instance(rng);
    const std::size_t n = inst.space->size();
    auto z = random_subset(n, rng, 0.85);
    if (z.size() < 4) z = all_points(*inst.space);

    const std::size_t members = 1 + rng.index(2);
    std::vector<std::vector<std::uint32_t>> w_family;
    for (std::size_t m = 0; m < members; ++m) {
      std::vector<std::uint32_t> w;
      for (const auto p : z) {
        if (rng.chance(0.4)) w.push_back(p);
      }
      if (w.empty()) w.push_back(z[rng.index(z.size())]);
      w_family.push_back(std::move(w));
    }

    const double s_large = inst.scale * (rng.chance(0.5) ? 1.0 : 2.0);
    const double t = rng.pick(std::vector<double>{1.0, 1.5, 2.0, 3.0});
    const auto out =
        rips::check_rel_nbhd(inst.space, z, w_family, inst.scale, s_large, t, 10, rng);
    witnesses += out.witnesses;
    failures += out.failures;
    max_ratio = std::max(max_ratio, out.max_ratio);
    if (out.failures > 0 && bad.is_null()) bad = out.record.details;
  }
  CheckRecord rec;
  rec.name = "relative-neighborhood-bound";
  rec.status = failures == 0 ? Status::Pass : Status::Fail;
  rec.details = {{"instances", instances},
                 {"witnesses", witnesses},
                 {"failures", failures},
                 {"maxRatio", max_ratio}};
  if (!bad.is_null()) rec.details["witness"] = bad;
  rep.add(std::move(rec));

  // Negative control: the same walk harness against a bound scaled down
  // fiftyfold must find witnesses past it. A line at scale 1 keeps the
  // ambient comparison constant at exactly 1, so the corrupted bound drops
  // below the minimum positive distance and any walk that moves at all
  // overshoots it.
  std::vector<std::vector<long long>> line_pts;
  for (long long x = 0; x <= 12; ++x) line_pts.push_back({x});
  const auto line = metric::MetricSpace::from_lattice_points("control-line", line_pts);
  const auto z = all_points(*line);
  const std::vector<std::uint32_t> w = {0};
  const auto out = rips::check_rel_nbhd(line, z, {w}, 1.0, 2.0, 3.0, 40, rng, 0.02);
  CheckRecord control;
  control.name = "relative-neighborhood-bound-corrupted-constant";
  control.status = out.failures >= 1 ? Status::Pass : Status::Fail;
  control.details = {{"witnesses", out.witnesses},
                     {"failuresDetected", out.failures},
                     {"constantFactor", 0.02},
                     {"expected", "at least one bound failure"}};
  rep.add(std::move(control));
}

void battery_rel_separation(report::RunReport& rep, Rng rng, int instances) {
  int held = 0;
  ordered_json bad;
  for (int i = 0; i < instances; ++i) {
    const long long len = rng.int_in(3, 6);
    const long long gap = rng.int_in(8, 14);
    std::vector<std::vector<long long>> pts;
    for (long long x = 0; x <= len; ++x) pts.push_back({x});
    for (long long x = 0; x <= len; ++x) pts.push_back({len + gap + x});
    const auto space = metric::MetricSpace::from_lattice_points("separated-line", pts);

    std::vector<std::uint32_t> x1, x2;
    for (std::uint32_t p = 0; p < static_cast<std::uint32_t>(len + 1); ++p) x1.push_back(p);
    for (std::uint32_t p = static_cast<std::uint32_t>(len + 1); p < space->size(); ++p) {
      x2.push_back(p);
    }
    std::vector<std::uint32_t> w1, w2;
    for (const auto p : x1) {
      if (rng.chance(0.5)) w1.push_back(p);
    }
    if (w1.empty()) w1.push_back(x1[0]);
    for (const auto p : x2) {
      if (rng.chance(0.5)) w2.push_back(p);
    }
    if (w2.empty()) w2.push_back(x2[0]);

    const double budget = rng.chance(0.5) ? 2.0 : 3.0;
    const auto out =
        rips::check_rel_separation(space, x1, x2, {w1}, {w2}, 1.0, 2.0, budget, 20, rng);
    if (out.record.status == Status::Pass && out.hypothesis_held) {
      ++held;
    } else if (bad.is_null()) {
      bad = {{"instance", i},
             {"gap", gap},
             {"separation", out.separation},
             {"threshold", out.threshold},
             {"status", report::status_name(out.record.status)},
             {"detail", out.record.details}};
    }
  }
  CheckRecord rec;
  rec.name = "relative-separation";
  rec.status = held == instances ? Status::Pass : Status::Fail;
  rec.details = {{"instances", instances}, {"held", held}};
  if (!bad.is_null()) rec.details["witness"] = bad;
  rep.add(std::move(rec));

  // When the pieces are close the hypothesis fails and the check must skip
  // rather than assert anything.
  std::vector<std::vector<long long>> pts;
  for (long long x = 0; x <= 4; ++x) pts.push_back({x});
  for (long long x = 0; x <= 4; ++x) pts.push_back({6 + x});
  const auto space = metric::MetricSpace::from_lattice_points("adjacent-line", pts);
  std::vector<std::uint32_t> x1, x2;
  for (std::uint32_t p = 0; p < 5; ++p) x1.push_back(p);
  for (std::uint32_t p = 5; p < 10; ++p) x2.push_back(p);
  const auto out = rips::check_rel_separation(space, x1, x2, {{x1[0]}}, {{x2[0]}}, 1.0, 2.0,
                                              3.0, 5, rng);
  CheckRecord gate;
  gate.name = "relative-separation-hypothesis-gate";
  gate.status =
      out.record.status == Status::SkippedHypothesis ? Status::Pass : Status::Fail;
  gate.details = {{"separation", out.separation},
                  {"threshold", out.threshold},
                  {"reported", report::status_name(out.record.status)}};
  rep.add(std::move(gate));
}

namespace {

algebra::GeometricModule random_module(const metric::SpaceRef& space, Rng& rng,
                                       double keep = 0.5) {
  std::map<std::uint32_t, int> ranks;
  const std::size_t n = space->size();
  for (std::uint32_t p = 0; p < n; ++p) {
    if (rng.chance(keep)) ranks[p] = 1 + static_cast<int>(rng.index(3));
  }
  if (ranks.empty()) ranks[static_cast<std::uint32_t>(rng.index(n))] = 1;
  return algebra::make_module(space, std::move(ranks));
}

algebra::GeomMorphism random_morphism(const algebra::GeometricModule& src,
                                      const algebra::GeometricModule& tgt, Rng& rng,
                                      double density = 0.3) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, algebra::IntMatrix> blocks;
  for (const auto& [tp, tr] : tgt.ranks) {
    for (const auto& [sp, sr] : src.ranks) {
      if (!rng.chance(density)) continue;
      auto m = algebra::IntMatrix::zero(static_cast<std::size_t>(tr),
                                        static_cast<std::size_t>(sr));
      for (auto& cell : m.a) cell = rng.int_in(-3, 3);
      if (!m.is_zero()) blocks.emplace(std::make_pair(tp, sp), std::move(m));
    }
  }
  return algebra::make_morphism(src, tgt, std::move(blocks));
}

metric::SpaceRef random_module_space(Rng& rng) {
  const int dim = 1 + static_cast<int>(rng.index(2));
  return metric::MetricSpace::l1_lattice_ball(dim, dim == 1 ? rng.int_in(3, 8)
                                                            : rng.int_in(2, 3));
}

}  // namespace

void battery_algebra(report::RunReport& rep, Rng rng, int pairs, int splits, int factors) {
  // Propagation is subadditive under composition.
  int subadditive = 0;
  ordered_json bad_prop;
  metric::SpaceRef space = random_module_space(rng);
  for (int i = 0; i < pairs; ++i) {
    if (i % 25 == 0) space = random_module_space(rng);
    const auto m1 = random_module(space, rng);
    const auto m2 = random_module(space, rng);
    const auto m3 = random_module(space, rng);
    const auto phi = random_morphism(m1, m2, rng);
    const auto psi = random_morphism(m2, m3, rng);
    const auto comp = algebra::compose(psi, phi);
    const auto lhs = algebra::propagation(comp);
    const auto rhs = algebra::propagation(psi) + algebra::propagation(phi);
    if (lhs <= rhs) {
      ++subadditive;
    } else if (bad_prop.is_null()) {
      bad_prop = {{"pair", i},
                  {"composite", lhs.is_infinite() ? -1.0 : lhs.value()},
                  {"sum", rhs.is_infinite() ? -1.0 : rhs.value()}};
    }
  }
  CheckRecord prop;
  prop.name = "propagation-subadditive";
  prop.status = subadditive == pairs ? Status::Pass : Status::Fail;
  prop.details = {{"pairs", pairs}, {"verified", subadditive}};
  if (!bad_prop.is_null()) prop.details["witness"] = bad_prop;
  rep.add(std::move(prop));

  // Splitting along a subspace reassembles the identity bit for bit.
  int reassembled = 0;
  ordered_json bad_split;
  for (int i = 0; i < splits; ++i) {
    if (i % 25 == 0) space = random_module_space(rng);
    const auto m = random_module(space, rng);
    // Edge shares: sometimes empty, sometimes everything.
    std::vector<std::uint32_t> z;
    if (!rng.chance(0.1)) {
      z = rng.chance(0.1) ? all_points(*space) : random_subset(space->size(), rng, 0.5);
    }
    const auto sp = algebra::split_by_subspace(m, z);
    const bool good =
        algebra::add(algebra::compose(sp.i1, sp.p1), algebra::compose(sp.i2, sp.p2)) ==
            algebra::identity_morphism(m) &&
        algebra::compose(sp.p1, sp.i1) == algebra::identity_morphism(sp.inside) &&
        algebra::compose(sp.p2, sp.i2) == algebra::identity_morphism(sp.outside) &&
        algebra::compose(sp.p2, sp.i1).is_zero() && algebra::compose(sp.p1, sp.i2).is_zero();
    if (good) {
      ++reassembled;
    } else if (bad_split.is_null()) {
      bad_split = {{"split", i}, {"insideSupport", sp.inside.support().size()}};
    }
  }
  CheckRecord split;
  split.name = "module-splitting";
  split.status = reassembled == splits ? Status::Pass : Status::Fail;
  split.details = {{"splits", splits}, {"reassembled", reassembled}};
  if (!bad_split.is_null()) split.details["witness"] = bad_split;
  rep.add(std::move(split));

  // Support factorizations recompose exactly; engineered instances must be
  // found, random ones may or may not fit.
  int found = 0, recomposed = 0, engineered = 0, engineered_found = 0;
  ordered_json bad_factor;
  for (int i = 0; i < factors; ++i) {
    if (i % 25 == 0) space = random_module_space(rng);
    const auto src = random_module(space, rng);
    const auto tgt = random_module(space, rng);
    const double r = static_cast<double>(rng.index(3));
    const auto y = sets::normalized(random_subset(space->size(), rng, 0.3));

    algebra::GeomMorphism phi = algebra::zero_morphism(src, tgt);
    bool forced = false;
    if (rng.chance(0.5)) {
      // Rows confined to the hull of y, so the rows criterion must fire.
      forced = true;
      ++engineered;
      const auto hull = metric::closed_neighborhood(*space, y, r);
      std::map<std::pair<std::uint32_t, std::uint32_t>, algebra::IntMatrix> blocks;
      for (const auto& [tp, tr] : tgt.ranks) {
        if (!sets::contains(hull, tp)) continue;
        for (const auto& [sp2, sr] : src.ranks) {
          if (!rng.chance(0.4)) continue;
          auto mat = algebra::IntMatrix::zero(static_cast<std::size_t>(tr),
                                              static_cast<std::size_t>(sr));
          for (auto& cell : mat.a) cell = rng.int_in(-3, 3);
          if (!mat.is_zero()) blocks.emplace(std::make_pair(tp, sp2), std::move(mat));
        }
      }
      phi = algebra::make_morphism(src, tgt, std::move(blocks));
    } else {
      phi = random_morphism(src, tgt, rng);
    }

    const auto f = algebra::factors_through_support(phi, y, r);
    if (forced && !f.has_value()) {
      if (bad_factor.is_null()) {
        bad_factor = {{"trial", i}, {"outcome", "engineered instance not factored"}};
      }
      continue;
    }
    if (!f.has_value()) continue;
    ++found;
    if (forced) ++engineered_found;
    if (algebra::compose(f->beta, f->alpha) == phi) {
      ++recomposed;
    } else if (bad_factor.is_null()) {
      bad_factor = {{"trial", i}, {"via", f->via}, {"outcome", "recomposition differs"}};
    }
  }
  CheckRecord fact;
  fact.name = "support-factorization";
  fact.status = (recomposed == found && engineered_found == engineered &&
                 (found > 0 || factors == 0))
                    ? Status::Pass
                    : Status::Fail;
  fact.details = {{"trials", factors},
                  {"found", found},
                  {"recomposedExactly", recomposed},
                  {"engineered", engineered},
                  {"engineeredFound", engineered_found}};
  if (!bad_factor.is_null()) fact.details["witness"] = bad_factor;
  rep.add(std::move(fact));

  // Equivalence modulo allowed supports: adding a hull-supported difference
  // keeps morphisms equivalent, an off-hull block breaks it.
  int equiv_ok = 0;
  const int equiv_trials = factors > 0 ? std::max(10, factors / 10) : 0;
  ordered_json bad_equiv;
  for (int i = 0; i < equiv_trials; ++i) {
    if (i % 10 == 0) space = random_module_space(rng);
    const auto src = random_module(space, rng, 0.6);
    const auto tgt = random_module(space, rng, 0.6);
    const double r = 1.0;
    const auto y = sets::normalized(random_subset(space->size(), rng, 0.25));
    const auto hull = metric::closed_neighborhood(*space, y, r);

    const auto phi = random_morphism(src, tgt, rng);
    std::map<std::pair<std::uint32_t, std::uint32_t>, algebra::IntMatrix> delta_blocks;
    for (const auto& [tp, tr] : tgt.ranks) {
      if (!sets::contains(hull, tp)) continue;
      for (const auto& [sp2, sr] : src.ranks) {
        if (!rng.chance(0.3)) continue;
        auto mat = algebra::IntMatrix::zero(static_cast<std::size_t>(tr),
                                            static_cast<std::size_t>(sr));
        for (auto& cell : mat.a) cell = rng.int_in(-2, 2);
        if (!mat.is_zero()) delta_blocks.emplace(std::make_pair(tp, sp2), std::move(mat));
      }
    }
    const auto delta = algebra::make_morphism(src, tgt, std::move(delta_blocks));
    const auto psi = algebra::add(phi, delta);
    bool good = algebra::equivalent_mod_support(phi, psi, {{y, r}});

    // Off-hull counterexample when the hull leaves room for one.
    std::uint32_t outside = 0;
    bool have_outside = false;
    for (const auto& [tp, tr] : tgt.ranks) {
      if (!sets::contains(hull, tp)) {
        outside = tp;
        have_outside = true;
        break;
      }
    }
    if (good && have_outside && !src.ranks.empty()) {
      const auto sp2 = src.ranks.begin()->first;
      auto mat = algebra::IntMatrix::zero(
          static_cast<std::size_t>(tgt.rank_at(outside)),
          static_cast<std::size_t>(src.rank_at(sp2)));
      mat.at(0, 0) = 1;
      std::map<std::pair<std::uint32_t, std::uint32_t>, algebra::IntMatrix> one;
      one.emplace(std::make_pair(outside, sp2), std::move(mat));
      const auto stray = algebra::make_morphism(src, tgt, std::move(one));
      good = !algebra::equivalent_mod_support(phi, algebra::add(psi, stray), {{y, r}});
    }
    if (good) {
      ++equiv_ok;
    } else if (bad_equiv.is_null()) {
      bad_equiv = {{"trial", i}, {"hullSize", hull.size()}};
    }
  }
  CheckRecord equiv;
  equiv.name = "support-equivalence";
  equiv.status = equiv_ok == equiv_trials ? Status::Pass : Status::Fail;
  equiv.details = {{"trials", equiv_trials}, {"verified", equiv_ok}};
  if (!bad_equiv.is_null()) equiv.details["witness"] = bad_equiv;
  rep.add(std::move(equiv));
}

void battery_control(report::RunReport& rep, Rng rng, int instances) {
  int clean = 0, flagged = 0;
  bool shrink_guard = false;
  ordered_json bad;
  for (int i = 0; i < instances; ++i) {
    const auto base = metric::MetricSpace::l1_lattice_ball(1, rng.int_in(3, 5));
    const auto grid = algebra::make_grid(base, {0.0, 0.5, 0.9, 0.97});
    std::map<std::uint32_t, int> ranks;
    for (std::uint32_t p = 0; p < grid.product->size(); ++p) ranks[p] = 1;
    const auto m = algebra::make_module(grid.product, std::move(ranks));

    std::vector<algebra::ControlProbe> probes;
    const std::size_t n_probes = 2 + rng.index(3);
    for (std::size_t p = 0; p < n_probes; ++p) {
      probes.push_back({static_cast<std::uint32_t>(rng.index(base->size())),
                        rng.in_range(1.0, 3.0), rng.in_range(0.1, 0.3)});
    }
    const algebra::DeltaFn delta = [](double, double eps) { return eps / 2.0; };

    // The identity never crosses a box boundary: both endpoints coincide.
    const auto good = algebra::check_control_certificate(algebra::identity_morphism(m), grid,
                                                         probes, delta);
    if (good.violations == 0 && good.record.status == Status::Pass) {
      ++clean;
    } else if (bad.is_null()) {
      bad = {{"instance", i}, {"outcome", "identity flagged"}, {"detail", good.record.details}};
    }

    // A block from deep inside the first probe's box to a base point outside
    // its radius must be flagged.
    const auto& probe = probes[0];
    const std::uint32_t v_point = grid.index_of(probe.center, grid.times.size() - 1);
    std::uint32_t far_base = probe.center;
    double far_dist = 0.0;
    for (std::uint32_t b = 0; b < base->size(); ++b) {
      const double d = base->dist_value(probe.center, b);
      if (d > far_dist) {
        far_dist = d;
        far_base = b;
      }
    }
    auto blocks = algebra::identity_morphism(m).blocks;
    auto stray = algebra::IntMatrix::zero(1, 1);
    stray.at(0, 0) = 1;
    blocks.emplace(std::make_pair(grid.index_of(far_base, 0), v_point), std::move(stray));
    const auto phi_bad = algebra::make_morphism(m, m, std::move(blocks));
    const auto caught = algebra::check_control_certificate(phi_bad, grid, probes, delta);
    if (caught.violations >= 1 && far_dist > probe.rho) {
      ++flagged;
    } else if (bad.is_null()) {
      bad = {{"instance", i},
             {"outcome", "stray block not flagged"},
             {"farDist", far_dist},
             {"rho", probe.rho}};
    }

    if (i == 0) {
      try {
        const algebra::DeltaFn lazy = [](double, double eps) { return eps; };
        algebra::check_control_certificate(algebra::identity_morphism(m), grid, probes, lazy);
      } catch (const std::invalid_argument&) {
        shrink_guard = true;
      }
    }
  }
  CheckRecord rec;
  rec.name = "boundary-control";
  rec.status =
      (clean == instances && flagged == instances && shrink_guard) ? Status::Pass : Status::Fail;
  rec.details = {{"instances", instances},
                 {"cleanCertificates", clean},
                 {"strayBlocksFlagged", flagged},
                 {"shrinkGuard", shrink_guard}};
  if (!bad.is_null()) rec.details["witness"] = bad;
  rep.add(std::move(rec));
}

report::RunReport run_suite(const SuiteOptions& opts) {
  if (opts.profile != "quick" && opts.profile != "full") {
    throw std::invalid_argument("suite: unknown profile '" + opts.profile +
                                "' (expected quick or full)");
  }
  const int unit = opts.profile == "full" ? 2 : 1;

  report::RunReport rep;
  rep.command = "suite --profile " + opts.profile + " --seed " + std::to_string(opts.seed);
  rep.seed = opts.seed;

  const Rng rng(opts.seed);
  const auto t0 = std::chrono::steady_clock::now();
  battery_straighten_bounds(rep, rng.fork("straighten"), 500 * unit);
  battery_metric_comparison(rep, rng.fork("comparison"), 500 * unit);
  battery_lattice_fdc(rep, rng.fork("lattice-fdc"), 20 * unit);
  battery_weaken(rep, rng.fork("weaken"), 100 * unit);
  battery_sequence_cover(rep, rng.fork("cover"), 50 * unit);
  battery_rel_nbhd(rep, rng.fork("rel-nbhd"), 50 * unit);
  battery_rel_separation(rep, rng.fork("rel-separation"), 8 * unit);
  battery_algebra(rep, rng.fork("algebra"), 500 * unit, 200 * unit, 200 * unit);
  battery_control(rep, rng.fork("control"), 3 * unit);
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace coarsekit::suite
