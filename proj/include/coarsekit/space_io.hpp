#pragma once

#include <string>

#include <json.hpp>

#include "coarsekit/metric_space.hpp"

namespace coarsekit::metric {

/// Parses a space description. Supported metric kinds:
///   {"kind": "matrix", "rows": [[num | "inf", ...], ...]}  with "points"
///   {"kind": "l1_lattice", "dim": n, "radius": R}           full l1 ball
///   {"kind": "l1_lattice", "dim": n} with "points" ["(a,b)", ...]  subset
///   {"kind": "word", "group": {...}, "radius": R}           Cayley ball
/// Group descriptions: {"kind": "free" | "free_abelian", "rank": n} or
/// {"kind": "integer_matrix", "generators": [[[int, ...], ...], ...]}.
SpaceRef load_space(const nlohmann::json& j);

/// Reads and parses a space file; propagates parse errors with file context.
SpaceRef load_space_file(const std::string& path);

/// Serializes a space. Matrix-backed spaces emit explicit rows (with "inf"
/// sentinels); lattice-backed spaces emit their coordinates.
nlohmann::ordered_json save_space(const MetricSpace& space);

/// Parses "(a,b,...)" into coordinates.
std::vector<long long> parse_lattice_id(const std::string& id);

}  // namespace coarsekit::metric
