#pragma once

#include "coarsekit/path_sampler.hpp"
#include "coarsekit/report.hpp"
#include "coarsekit/rips.hpp"
#include "coarsekit/straighten.hpp"

namespace coarsekit::rips {

/// Absolute tolerance on every geometric inequality.
inline constexpr double geometric_tolerance = 1e-9;

/// Comparison constant of the ambient complex at scale s over the given
/// points, computed from maximal cliques only (no face enumeration).
double ambient_constant(const metric::SpaceRef& space, const std::vector<std::uint32_t>& points,
                        double s);
double ambient_constant(const metric::SpaceRef& space, double s);

/// Audits every projection replacement over randomly sampled paths: each
/// inserted projection segment stays within sqrt(2) of the replaced segment
/// length, the middle never exceeds it, and the replacing sub-path stays
/// within (2*sqrt(2)+1) of it.
struct StepBoundsOutcome {
  report::CheckRecord record;
  std::size_t paths = 0;
  std::size_t replacements = 0;
  std::size_t failures = 0;
  double worst_projection = 0.0;  // max (insertion length) / (sqrt(2) * segment)
  double worst_subpath = 0.0;     // max (sub-path length) / ((2*sqrt(2)+1) * segment)
};

StepBoundsOutcome check_straighten_bounds(const SimplicialComplex& k, int paths, Rng& rng,
                                          const WalkParams& params = {});

/// Samples PL paths gamma between vertex pairs (x, y) and asserts the metric
/// comparison: d(x,y) <= s * (2*sqrt(2)+1)^(dim gamma - 1) * l(gamma) and
/// d(x,y) <= s * l(straighten_full(gamma)), both with tolerance. `eval_space`
/// substitutes the metric used for d(x,y) only; passing a deliberately
/// inflated copy of the space is the negative control.
struct ComparisonOutcome {
  report::CheckRecord record;
  std::size_t samples = 0;
  std::size_t failures = 0;
  double max_ratio = 0.0;           // d(x,y) / (s * C_dim * l(gamma))
  double max_straight_ratio = 0.0;  // d(x,y) / (s * straightened length)
};

ComparisonOutcome check_metric_comparison(const SimplicialComplex& k, int samples, Rng& rng,
                                          const metric::MetricSpace* eval_space = nullptr,
                                          const WalkParams& params = {});

/// Relative-complex neighborhood bound. Generates witnesses by walking from
/// privileged vertices with length budget t inside P_{s,s'}(Z, W) and
/// reversing; every reached vertex x is a certified member of the
/// t-neighborhood of the privileged subcomplex and must satisfy
///   d(x, union W) <= (t+1) * C(s, X) * s * constant_factor + tolerance,
/// where C comes from the full-space complex at scale s. `constant_factor`
/// rescales the bound; values below one form the negative control.
struct RelNbhdOutcome {
  report::CheckRecord record;
  std::size_t witnesses = 0;
  std::size_t failures = 0;
  double max_ratio = 0.0;  // measured distance / bound
};

RelNbhdOutcome check_rel_nbhd(const metric::SpaceRef& space, const std::vector<std::uint32_t>& z,
                              const std::vector<std::vector<std::uint32_t>>& w_family, double s,
                              double s_large, double t, int samples, Rng& rng,
                              double constant_factor = 1.0);

/// Contrapositive separation probe. With V_i = X_i joined with its privileged
/// family members, the separation bound says pieces at space distance above
/// (L+2)*s*C cannot be joined by a PL path of length at most L in the
/// relative complex. When the distance hypothesis holds, randomized budget
/// walks from piece one must never reach piece two; otherwise the check is
/// skipped (hypothesis not met).
struct RelSeparationOutcome {
  report::CheckRecord record;
  std::size_t probes = 0;
  bool hypothesis_held = false;
  double separation = 0.0;  // d(V1, V2), +inf possible
  double threshold = 0.0;   // (L+2) * s * C
};

RelSeparationOutcome check_rel_separation(const metric::SpaceRef& space,
                                          const std::vector<std::uint32_t>& x1,
                                          const std::vector<std::uint32_t>& x2,
                                          const std::vector<std::vector<std::uint32_t>>& w1,
                                          const std::vector<std::vector<std::uint32_t>>& w2,
                                          double s, double s_large, double path_budget,
                                          int probes, Rng& rng);

}  // namespace coarsekit::rips
