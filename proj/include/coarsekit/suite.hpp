#pragma once

#include <cstdint>
#include <string>

#include "coarsekit/metric_checks.hpp"
#include "coarsekit/report.hpp"
#include "coarsekit/rng.hpp"

namespace coarsekit::suite {

/// Randomized geometry instance for the check batteries: a small space (a
/// lattice patch or a word-metric ball) together with a scale whose complex
/// has dimension between two and five and is fully enumerated.
struct GeometryInstance {
  metric::SpaceRef space;
  double scale = 0.0;
  rips::SimplicialComplex complex;
};

GeometryInstance random_rips_instance(Rng& rng);

/// Check batteries. Each appends one or more records to the report and is
/// deterministic in the generator it is handed; run_suite forks a labeled
/// stream per battery so profile changes do not shift sibling batteries.
/// The sizes are the knobs the profiles and the acceptance harness turn.
void battery_straighten_bounds(report::RunReport& rep, Rng rng, int paths);
void battery_metric_comparison(report::RunReport& rep, Rng rng, int samples);
void battery_lattice_fdc(report::RunReport& rep, Rng rng, int mutations);
void battery_weaken(report::RunReport& rep, Rng rng, int pairs);
void battery_sequence_cover(report::RunReport& rep, Rng rng, int covers);
void battery_rel_nbhd(report::RunReport& rep, Rng rng, int instances);
void battery_rel_separation(report::RunReport& rep, Rng rng, int instances);
void battery_algebra(report::RunReport& rep, Rng rng, int pairs, int splits, int factors);
void battery_control(report::RunReport& rep, Rng rng, int instances);

struct SuiteOptions {
  std::string profile = "quick";  // quick | full
  std::uint64_t seed = 7;
};

/// Runs every battery at the profile's sizes. The JSON rendering of the
/// result is byte-identical across runs with the same options.
report::RunReport run_suite(const SuiteOptions& opts);

}  // namespace coarsekit::suite
