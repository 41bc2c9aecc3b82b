#include "coarsekit/space_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "coarsekit/groups.hpp"

namespace coarsekit::metric {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) {
  throw std::invalid_argument("space description: " + what);
}

double parse_distance_cell(const json& cell) {
  if (cell.is_string()) {
    if (cell.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
    bad("matrix cells must be numbers or \"inf\"");
  }
  if (!cell.is_number()) bad("matrix cells must be numbers or \"inf\"");
  return cell.get<double>();
}

groups::GroupSpec parse_group(const json& g) {
  if (!g.is_object() || !g.contains("kind")) bad("group description needs a \"kind\"");
  const std::string kind = g.at("kind").get<std::string>();
  if (kind == "free" || kind == "free_abelian") {
    if (!g.contains("rank")) bad("group description needs a \"rank\"");
    const int rank = g.at("rank").get<int>();
    return kind == "free" ? groups::GroupSpec::free_group(rank)
                          : groups::GroupSpec::free_abelian(rank);
  }
  if (kind == "integer_matrix") {
    if (!g.contains("generators")) bad("integer_matrix group needs \"generators\"");
    auto gens = g.at("generators").get<std::vector<std::vector<std::vector<long long>>>>();
    return groups::GroupSpec::integer_matrix(std::move(gens));
  }
  if (kind == "heisenberg") return groups::heisenberg_spec();
  bad("unknown group kind '" + kind + "'");
}

}  // namespace

std::vector<long long> parse_lattice_id(const std::string& id) {
  if (id.size() < 2 || id.front() != '(' || id.back() != ')') {
    bad("lattice point id must look like \"(a,b)\", got '" + id + "'");
  }
  std::vector<long long> out;
  std::istringstream is(id.substr(1, id.size() - 2));
  std::string tok;
  while (std::getline(is, tok, ',')) {
    std::size_t used = 0;
    out.push_back(std::stoll(tok, &used));
    if (used != tok.size()) bad("bad coordinate '" + tok + "' in lattice id '" + id + "'");
  }
  return out;
}

SpaceRef load_space(const json& j) {
  if (!j.is_object()) bad("top level must be an object");
  if (!j.contains("metric")) bad("missing \"metric\"");
  const json& m = j.at("metric");
  if (!m.is_object() || !m.contains("kind")) bad("metric needs a \"kind\"");
  const std::string kind = m.at("kind").get<std::string>();
  const std::string label = j.value("label", std::string("space"));

  if (kind == "matrix") {
    if (!j.contains("points")) bad("matrix metric needs \"points\"");
    auto ids = j.at("points").get<std::vector<std::string>>();
    if (!m.contains("rows")) bad("matrix metric needs \"rows\"");
    const json& rows_j = m.at("rows");
    std::vector<std::vector<double>> rows;
    rows.reserve(rows_j.size());
    for (const json& row : rows_j) {
      std::vector<double> r;
      r.reserve(row.size());
      for (const json& cell : row) r.push_back(parse_distance_cell(cell));
      rows.push_back(std::move(r));
    }
    return MetricSpace::from_matrix(label, std::move(ids), std::move(rows));
  }

  if (kind == "l1_lattice") {
    if (!m.contains("dim")) bad("l1_lattice metric needs \"dim\"");
    const int dim = m.at("dim").get<int>();
    if (j.contains("points")) {
      auto ids = j.at("points").get<std::vector<std::string>>();
      std::vector<std::vector<long long>> pts;
      pts.reserve(ids.size());
      for (const auto& id : ids) {
        auto p = parse_lattice_id(id);
        if (static_cast<int>(p.size()) != dim) {
          bad("lattice point '" + id + "' does not have dimension " + std::to_string(dim));
        }
        pts.push_back(std::move(p));
      }
      return MetricSpace::from_lattice_points(label, std::move(pts));
    }
    if (!m.contains("radius")) bad("l1_lattice metric needs \"radius\" or explicit \"points\"");
    return MetricSpace::l1_lattice_ball(dim, m.at("radius").get<long long>());
  }

  if (kind == "word") {
    if (!m.contains("group")) bad("word metric needs \"group\"");
    if (!m.contains("radius")) bad("word metric needs \"radius\"");
    const auto spec = parse_group(m.at("group"));
    return groups::cayley_ball(spec, m.at("radius").get<int>()).space;
  }

  bad("unknown metric kind '" + kind + "'");
}

SpaceRef load_space_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open space file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("malformed JSON in '" + path + "': " + e.what());
  }
  return load_space(j);
}

nlohmann::ordered_json save_space(const MetricSpace& space) {
  nlohmann::ordered_json out;
  out["label"] = space.label();
  out["points"] = space.ids();
  if (space.backend() == MetricSpace::Backend::L1) {
    out["metric"] = {{"kind", "l1_lattice"}, {"dim", space.lattice_dim()}};
    return out;
  }
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  const std::size_t n = space.size();
  for (std::uint32_t i = 0; i < n; ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (std::uint32_t j2 = 0; j2 < n; ++j2) {
      const double v = space.dist_value(i, j2);
      if (std::isinf(v)) {
        row.push_back("inf");
      } else {
        row.push_back(v);
      }
    }
    rows.push_back(std::move(row));
  }
  out["metric"] = {{"kind", "matrix"}, {"rows", std::move(rows)}};
  return out;
}

}  // namespace coarsekit::metric
