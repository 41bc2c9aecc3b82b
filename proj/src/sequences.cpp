#include "coarsekit/sequences.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "coarsekit/sets.hpp"
#include "coarsekit/space_io.hpp"

namespace coarsekit::seq {

namespace {

std::string at_level(std::size_t r, std::size_t a) {
  std::ostringstream out;
  out << "level " << r << ", part " << a;
  return out.str();
}

nlohmann::ordered_json finite_or_inf(const metric::ExtDistance& d) {
  if (d.is_infinite()) return "inf";
  return d.value();
}

void require_schedule(const std::vector<double>& schedule, std::size_t levels,
                      const char* what) {
  if (schedule.size() < levels) {
    throw std::invalid_argument(std::string(what) + " schedule shorter than the sequence");
  }
}

}  // namespace

std::vector<std::uint32_t> DecomposedSequence::level_union(std::size_t r) const {
  std::vector<std::uint32_t> all;
  for (const auto& part : levels.at(r)) all = sets::unite(all, sets::normalized(part));
  return all;
}

namespace {

// Shape agreement only: one space, equal level and part counts. Cover
// equality is deliberately not enforced here so that check_cover can scan a
// broken cover and report the orphaned simplex instead of throwing.
void validate_cover_shapes(const SequenceCover& cover) {
  if (!cover.z.space || cover.z.space != cover.u.space || cover.z.space != cover.v.space) {
    throw std::invalid_argument("cover: the three sequences must share one space");
  }
  if (cover.u.levels.size() != cover.z.levels.size() ||
      cover.v.levels.size() != cover.z.levels.size()) {
    throw std::invalid_argument("cover: level counts differ");
  }
  for (std::size_t r = 0; r < cover.z.levels.size(); ++r) {
    if (cover.u.levels[r].size() != cover.z.levels[r].size() ||
        cover.v.levels[r].size() != cover.z.levels[r].size()) {
      throw std::invalid_argument("cover: part counts differ at level " + std::to_string(r));
    }
  }
}

}  // namespace

void validate_cover(const SequenceCover& cover) {
  validate_cover_shapes(cover);
  for (std::size_t r = 0; r < cover.z.levels.size(); ++r) {
    for (std::size_t a = 0; a < cover.z.levels[r].size(); ++a) {
      const auto z = sets::normalized(cover.z.levels[r][a]);
      const auto u = sets::normalized(cover.u.levels[r][a]);
      const auto v = sets::normalized(cover.v.levels[r][a]);
      if (sets::unite(u, v) != z) {
        throw std::invalid_argument("cover: U and V do not cover Z exactly at " +
                                    at_level(r, a));
      }
    }
  }
}

std::size_t SequenceComplex::simplex_count() const {
  std::size_t total = 0;
  for (const auto& piece : pieces) total += piece.complex.simplex_count();
  return total;
}

SequenceComplex build_sequence_rips(const DecomposedSequence& z,
                                    const std::vector<double>& s_schedule, int dim_cap) {
  if (!z.space) throw std::invalid_argument("build_sequence_rips: null space");
  require_schedule(s_schedule, z.levels.size(), "scale");
  for (std::size_t r = 1; r < z.levels.size(); ++r) {
    if (s_schedule[r] < s_schedule[r - 1]) {
      throw std::invalid_argument("build_sequence_rips: decreasing scale schedule at level " +
                                  std::to_string(r));
    }
  }

  SequenceComplex out;
  for (std::size_t r = 0; r < z.levels.size(); ++r) {
    for (std::size_t a = 0; a < z.levels[r].size(); ++a) {
      out.pieces.push_back(
          {r, a, rips::build_rips(z.space, z.levels[r][a], s_schedule[r], dim_cap)});
    }
  }
  return out;
}

CoverCheck check_cover(const SequenceCover& cover, const std::vector<double>& s_schedule,
                       int dim_cap) {
  validate_cover_shapes(cover);
  require_schedule(s_schedule, cover.z.levels.size(), "scale");

  CoverCheck out;
  for (std::size_t r = 0; r < cover.z.levels.size() && out.ok; ++r) {
    for (std::size_t a = 0; a < cover.z.levels[r].size() && out.ok; ++a) {
      const auto u = sets::normalized(cover.u.levels[r][a]);
      const auto v = sets::normalized(cover.v.levels[r][a]);
      const auto k = rips::build_rips(cover.z.space, cover.z.levels[r][a], s_schedule[r], dim_cap);
      for (const auto& simplices : k.by_dim) {
        for (const auto& simplex : simplices) {
          ++out.simplices_checked;
          const std::uint32_t first = simplex.front();
          if (sets::contains(u, first) || sets::contains(v, first)) continue;
          nlohmann::ordered_json ids = nlohmann::ordered_json::array();
          for (auto p : simplex) ids.push_back(cover.z.space->id(p));
          out.ok = false;
          out.witness = {{"level", r},
                         {"part", a},
                         {"simplex", ids},
                         {"vertex", cover.z.space->id(first)}};
          break;
        }
        if (!out.ok) break;
      }
    }
  }
  return out;
}

namespace {

void validate_refinement(const RefinedCover& refined) {
  validate_cover(refined.cover);
  const auto& z = refined.cover.z;
  if (refined.u_sub.size() != z.levels.size() || refined.v_sub.size() != z.levels.size()) {
    throw std::invalid_argument("refinement: level counts differ from the cover");
  }
  for (std::size_t r = 0; r < z.levels.size(); ++r) {
    if (refined.u_sub[r].size() != z.levels[r].size() ||
        refined.v_sub[r].size() != z.levels[r].size()) {
      throw std::invalid_argument("refinement: part counts differ at level " +
                                  std::to_string(r));
    }
    for (std::size_t a = 0; a < z.levels[r].size(); ++a) {
      std::vector<std::uint32_t> u_all, v_all;
      for (const auto& sub : refined.u_sub[r][a]) u_all = sets::unite(u_all, sets::normalized(sub));
      for (const auto& sub : refined.v_sub[r][a]) v_all = sets::unite(v_all, sets::normalized(sub));
      if (u_all != sets::normalized(refined.cover.u.levels[r][a]) ||
          v_all != sets::normalized(refined.cover.v.levels[r][a])) {
        throw std::invalid_argument("refinement: sub-parts do not recompose the color at " +
                                    at_level(r, a));
      }
    }
  }
}

metric::ExtDistance family_gap(const metric::MetricSpace& space,
                               const std::vector<std::vector<std::uint32_t>>& sets) {
  metric::ExtDistance gap = metric::ExtDistance::infinity();
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      gap = std::min(gap, metric::min_set_distance(space, sets[i], sets[j]));
    }
  }
  return gap;
}

}  // namespace

IntersectionFamilies intersection_families(const RefinedCover& refined,
                                           const std::vector<double>& t_schedule,
                                           const std::vector<double>& s_schedule,
                                           const std::vector<double>& c_schedule) {
  validate_refinement(refined);
  const auto& space = *refined.cover.z.space;
  const std::size_t levels = refined.cover.z.levels.size();
  require_schedule(t_schedule, levels, "T");
  require_schedule(s_schedule, levels, "scale");
  require_schedule(c_schedule, levels, "C");
  for (std::size_t r = 0; r < levels; ++r) {
    if (!(t_schedule[r] > 0.0)) {
      throw std::invalid_argument("intersection families need T > 0 at level " +
                                  std::to_string(r));
    }
  }

  IntersectionFamilies out;
  out.families.resize(levels);
  nlohmann::ordered_json report = nlohmann::ordered_json::array();

  for (std::size_t r = 0; r < levels; ++r) {
    const double t = t_schedule[r];
    out.families[r].resize(refined.cover.z.levels[r].size());

    // Per color, the refined sub-parts enlarged by the intersection sets
    // they participate in; their gaps drive the refinement inequalities.
    std::vector<std::vector<std::uint32_t>> u_enlarged, v_enlarged, u_plain, v_plain;

    for (std::size_t a = 0; a < refined.cover.z.levels[r].size(); ++a) {
      const auto z = sets::normalized(refined.cover.z.levels[r][a]);
      const auto& u_subs = refined.u_sub[r][a];
      const auto& v_subs = refined.v_sub[r][a];

      std::vector<std::vector<std::uint32_t>> u_hulls, v_hulls;
      u_hulls.reserve(u_subs.size());
      for (const auto& sub : u_subs) {
        u_hulls.push_back(metric::closed_neighborhood(space, sub, t));
      }
      v_hulls.reserve(v_subs.size());
      for (const auto& sub : v_subs) {
        v_hulls.push_back(metric::closed_neighborhood(space, sub, t));
      }

      std::vector<std::vector<std::uint32_t>> u_extra(u_subs.size()), v_extra(v_subs.size());
      for (std::size_t i = 0; i < u_subs.size(); ++i) {
        for (std::size_t j = 0; j < v_subs.size(); ++j) {
          auto w = sets::intersect(sets::intersect(u_hulls[i], v_hulls[j]), z);
          if (w.empty()) {
            ++out.omitted_empty;
            continue;
          }
          u_extra[i] = sets::unite(u_extra[i], w);
          v_extra[j] = sets::unite(v_extra[j], w);
          out.families[r][a].push_back(std::move(w));
        }
      }

      for (std::size_t i = 0; i < u_subs.size(); ++i) {
        u_plain.push_back(sets::normalized(u_subs[i]));
        u_enlarged.push_back(sets::unite(u_plain.back(), u_extra[i]));
      }
      for (std::size_t j = 0; j < v_subs.size(); ++j) {
        v_plain.push_back(sets::normalized(v_subs[j]));
        v_enlarged.push_back(sets::unite(v_plain.back(), v_extra[j]));
      }
    }

    const double plain_threshold = (t + 1.0) * s_schedule[r] * c_schedule[r];
    const double enlarged_threshold = (2.0 * t + 2.0) * s_schedule[r] * c_schedule[r];
    const auto u_sub_gap = family_gap(space, u_plain);
    const auto v_sub_gap = family_gap(space, v_plain);
    const auto u_enl_gap = family_gap(space, u_enlarged);
    const auto v_enl_gap = family_gap(space, v_enlarged);
    report.push_back({{"level", r},
                      {"T", t},
                      {"subPartGapU", finite_or_inf(u_sub_gap)},
                      {"subPartGapV", finite_or_inf(v_sub_gap)},
                      {"subPartThreshold", plain_threshold},
                      {"subPartSatisfied", u_sub_gap > metric::ExtDistance(plain_threshold) &&
                                               v_sub_gap > metric::ExtDistance(plain_threshold)},
                      {"enlargedGapU", finite_or_inf(u_enl_gap)},
                      {"enlargedGapV", finite_or_inf(v_enl_gap)},
                      {"enlargedThreshold", enlarged_threshold},
                      {"enlargedSatisfied",
                       u_enl_gap > metric::ExtDistance(enlarged_threshold) &&
                           v_enl_gap > metric::ExtDistance(enlarged_threshold)}});
  }

  out.refinement_report = std::move(report);
  return out;
}

namespace {

nlohmann::ordered_json levels_to_json(const DecomposedSequence& seq) {
  nlohmann::ordered_json levels = nlohmann::ordered_json::array();
  for (const auto& level : seq.levels) {
    nlohmann::ordered_json parts = nlohmann::ordered_json::array();
    for (const auto& part : level) parts.push_back(part);
    levels.push_back(parts);
  }
  return levels;
}

std::vector<std::vector<std::vector<std::uint32_t>>> levels_from_json(
    const nlohmann::json& j, const metric::MetricSpace& space) {
  std::vector<std::vector<std::vector<std::uint32_t>>> levels;
  for (const auto& level : j) {
    std::vector<std::vector<std::uint32_t>> parts;
    for (const auto& part : level) {
      auto set = sets::normalized(part.get<std::vector<std::uint32_t>>());
      if (!set.empty() && set.back() >= space.size()) {
        throw std::invalid_argument("sequence point out of range");
      }
      parts.push_back(std::move(set));
    }
    levels.push_back(std::move(parts));
  }
  return levels;
}

}  // namespace

nlohmann::ordered_json cover_to_json(const SequenceCover& cover) {
  return {{"space", metric::save_space(*cover.z.space)},
          {"z", levels_to_json(cover.z)},
          {"u", levels_to_json(cover.u)},
          {"v", levels_to_json(cover.v)}};
}

SequenceCover cover_from_json(const nlohmann::json& j) {
  SequenceCover cover;
  auto space = metric::load_space(j.at("space"));
  cover.z.space = cover.u.space = cover.v.space = space;
  cover.z.levels = levels_from_json(j.at("z"), *space);
  cover.u.levels = levels_from_json(j.at("u"), *space);
  cover.v.levels = levels_from_json(j.at("v"), *space);
  return cover;
}

nlohmann::ordered_json refined_cover_to_json(const RefinedCover& refined) {
  auto j = cover_to_json(refined.cover);
  nlohmann::ordered_json u_sub = nlohmann::ordered_json::array();
  nlohmann::ordered_json v_sub = nlohmann::ordered_json::array();
  for (const auto& level : refined.u_sub) u_sub.push_back(level);
  for (const auto& level : refined.v_sub) v_sub.push_back(level);
  j["uSub"] = u_sub;
  j["vSub"] = v_sub;
  return j;
}

RefinedCover refined_cover_from_json(const nlohmann::json& j) {
  RefinedCover refined;
  refined.cover = cover_from_json(j);

  const auto parse = [&](const char* key,
                         std::vector<std::vector<std::vector<std::vector<std::uint32_t>>>>& out,
                         const DecomposedSequence& color) {
    if (!j.contains(key)) {
      // No refinement supplied: each color part is its own single sub-part.
      for (const auto& level : color.levels) {
        std::vector<std::vector<std::vector<std::uint32_t>>> parts;
        for (const auto& part : level) parts.push_back({part});
        out.push_back(std::move(parts));
      }
      return;
    }
    for (const auto& level : j.at(key)) {
      std::vector<std::vector<std::vector<std::uint32_t>>> parts;
      for (const auto& part : level) {
        std::vector<std::vector<std::uint32_t>> subs;
        for (const auto& sub : part) {
          subs.push_back(sets::normalized(sub.get<std::vector<std::uint32_t>>()));
        }
        parts.push_back(std::move(subs));
      }
      out.push_back(std::move(parts));
    }
  };
  parse("uSub", refined.u_sub, refined.cover.u);
  parse("vSub", refined.v_sub, refined.cover.v);
  return refined;
}

}  // namespace coarsekit::seq
