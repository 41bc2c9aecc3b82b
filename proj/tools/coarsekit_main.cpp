#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coarsekit/fdc.hpp"
#include "coarsekit/groups.hpp"
#include "coarsekit/metric_checks.hpp"
#include "coarsekit/report.hpp"
#include "coarsekit/rips.hpp"
#include "coarsekit/sequences.hpp"
#include "coarsekit/simplicial.hpp"
#include "coarsekit/space_io.hpp"
#include "coarsekit/suite.hpp"

namespace {

using namespace coarsekit;

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  try {
    return nlohmann::json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    // e.what() carries the byte offset of the syntax error.
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << content;
}

std::vector<double> parse_schedule(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw std::runtime_error(std::string(what) + ": cannot parse '" + item +
                               "' as a number");
    }
  }
  if (out.empty()) throw std::runtime_error(std::string(what) + ": empty list");
  return out;
}

/// Writes the JSON rendering when asked, always prints the human rendering,
/// and maps the outcome to the process exit code.
int emit_report(const report::RunReport& rep, const std::string& json_path) {
  if (!json_path.empty()) {
    write_output(json_path, report::report_to_json(rep).dump(2) + "\n");
  }
  std::cout << report::report_to_text(rep);
  return rep.all_passed() ? 0 : 1;
}

groups::GroupSpec group_from_name(const std::string& name, const std::string& file) {
  if (name == "heisenberg") return groups::heisenberg_spec();
  if (name == "matrix") {
    if (file.empty()) {
      throw std::runtime_error("--group matrix needs --file with generator matrices");
    }
    const auto j = load_json_file(file);
    const auto& gens_j = j.is_object() && j.contains("generators") ? j.at("generators") : j;
    return groups::GroupSpec::integer_matrix(
        gens_j.get<std::vector<std::vector<std::vector<long long>>>>());
  }
  const auto rank_after = [&name](std::string_view prefix) -> std::optional<int> {
    if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) {
      return std::nullopt;
    }
    const std::string digits = name.substr(prefix.size());
    if (digits.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
    return std::stoi(digits);
  };
  if (const auto r = rank_after("free_abelian")) return groups::GroupSpec::free_abelian(*r);
  if (const auto r = rank_after("abelian")) return groups::GroupSpec::free_abelian(*r);
  if (const auto r = rank_after("free")) return groups::GroupSpec::free_group(*r);
  throw std::runtime_error("unknown group '" + name +
                           "' (expected freeN, abelianN, heisenberg, or matrix)");
}

std::vector<std::uint32_t> ids_to_points(const metric::MetricSpace& space,
                                         const nlohmann::json& ids, const char* what) {
  std::vector<std::uint32_t> out;
  for (const auto& id : ids) {
    const auto p = space.index_of(id.get<std::string>());
    if (!p) {
      throw std::runtime_error(std::string(what) + ": unknown point id '" +
                               id.get<std::string>() + "'");
    }
    out.push_back(*p);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rips complexes, comparison constants, decomposition certificates, and "
               "geometric modules over finite metric spaces"};
  app.require_subcommand(1);
  int rc = 0;

  // ---- space gen ----
  auto* space_cmd = app.add_subcommand("space", "Metric space generation");
  space_cmd->require_subcommand(1);
  auto* space_gen = space_cmd->add_subcommand("gen", "Generate a word-metric ball");
  std::string sg_group;
  std::string sg_file, sg_out;
  int sg_radius = 2;
  space_gen->add_option("--group", sg_group, "freeN | abelianN | heisenberg | matrix")
      ->required();
  space_gen->add_option("--radius", sg_radius, "Ball radius in the word metric");
  space_gen->add_option("--file", sg_file, "Generator matrices (JSON) for --group matrix");
  space_gen->add_option("--out", sg_out, "Output file (stdout when omitted)");
  space_gen->callback([&] {
    const auto spec = group_from_name(sg_group, sg_file);
    const auto ball = groups::cayley_ball(spec, sg_radius);
    auto j = metric::save_space(*ball.space);
    j["generated"] = {{"group", sg_group}, {"radius", sg_radius}};
    write_output(sg_out, j.dump(2) + "\n");
  });

  auto* space_lattice =
      space_cmd->add_subcommand("lattice", "Generate an l1 ball in the integer lattice");
  std::string sl_out;
  int sl_dim = 1;
  long long sl_radius = 4;
  space_lattice->add_option("--dim", sl_dim, "Lattice dimension");
  space_lattice->add_option("--radius", sl_radius, "Ball radius in the l1 metric");
  space_lattice->add_option("--out", sl_out, "Output file (stdout when omitted)");
  space_lattice->callback([&] {
    const auto space = metric::MetricSpace::l1_lattice_ball(sl_dim, sl_radius);
    auto j = metric::save_space(*space);
    j["generated"] = {{"lattice_dim", sl_dim}, {"radius", sl_radius}};
    write_output(sl_out, j.dump(2) + "\n");
  });

  // ---- rips ----
  auto* rips_cmd = app.add_subcommand("rips", "Rips complexes and metric comparison checks");
  rips_cmd->require_subcommand(1);

  auto* rips_build = rips_cmd->add_subcommand("build", "Build a complex and write it as JSON");
  std::string rb_space, rb_out;
  double rb_scale = 1.0;
  int rb_dim_cap = 8;
  rips_build->add_option("--space", rb_space, "Space file")->required();
  rips_build->add_option("--scale", rb_scale, "Rips scale s")->required();
  rips_build->add_option("--dim-cap", rb_dim_cap, "Face enumeration cap");
  rips_build->add_option("--out", rb_out, "Output file (stdout when omitted)");
  rips_build->callback([&] {
    const auto space = metric::load_space_file(rb_space);
    const auto k = rips::build_rips(space, rb_scale, rb_dim_cap);
    write_output(rb_out, rips::complex_to_json(k).dump(2) + "\n");
  });

  auto* rips_check = rips_cmd->add_subcommand(
      "check-metric", "Straightening bounds and metric comparison on sampled paths");
  std::string rc_space, rc_json;
  double rc_scale = 1.0;
  int rc_dim_cap = 8, rc_samples = 200;
  std::uint64_t rc_seed = 7;
  rips_check->add_option("--space", rc_space, "Space file")->required();
  rips_check->add_option("--scale", rc_scale, "Rips scale s")->required();
  rips_check->add_option("--dim-cap", rc_dim_cap, "Face enumeration cap");
  rips_check->add_option("--samples", rc_samples, "Paths per check");
  rips_check->add_option("--seed", rc_seed, "Generator seed");
  rips_check->add_option("--json", rc_json, "Write the JSON report here");
  rips_check->callback([&] {
    const auto space = metric::load_space_file(rc_space);
    const auto k = rips::build_rips(space, rc_scale, rc_dim_cap);
    report::RunReport rep;
    rep.command = "rips check-metric --scale " + std::to_string(rc_scale) + " --samples " +
                  std::to_string(rc_samples) + " --seed " + std::to_string(rc_seed);
    rep.seed = rc_seed;
    const Rng rng(rc_seed);
    const auto t0 = std::chrono::steady_clock::now();
    Rng walk_rng = rng.fork("straighten");
    rep.add(rips::check_straighten_bounds(k, rc_samples, walk_rng).record);
    Rng cmp_rng = rng.fork("comparison");
    rep.add(rips::check_metric_comparison(k, rc_samples, cmp_rng).record);
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rc = emit_report(rep, rc_json);
  });

  auto* rips_dot = rips_cmd->add_subcommand("dot", "Graphviz rendering of the 1-skeleton");
  std::string rd_space, rd_out;
  double rd_scale = 1.0;
  int rd_dim_cap = 8;
  rips_dot->add_option("--space", rd_space, "Space file")->required();
  rips_dot->add_option("--scale", rd_scale, "Rips scale s")->required();
  rips_dot->add_option("--dim-cap", rd_dim_cap, "Face enumeration cap");
  rips_dot->add_option("--out", rd_out, "Output file (stdout when omitted)");
  rips_dot->callback([&] {
    const auto space = metric::load_space_file(rd_space);
    const auto k = rips::build_rips(space, rd_scale, rd_dim_cap);
    write_output(rd_out, rips::complex_to_dot(k));
  });

  // ---- fdc ----
  auto* fdc_cmd = app.add_subcommand("fdc", "Decomposition certificates");
  fdc_cmd->require_subcommand(1);

  auto* fdc_decompose =
      fdc_cmd->add_subcommand("decompose", "Slab certificate for a lattice space");
  std::string fd_space, fd_schedule = "5", fd_out;
  fdc_decompose->add_option("--space", fd_space, "Lattice space file")->required();
  fdc_decompose->add_option("--schedule", fd_schedule,
                            "Comma-separated disjointness radii, one per depth");
  fdc_decompose->add_option("--out", fd_out, "Output file (stdout when omitted)");
  fdc_decompose->callback([&] {
    const auto space = metric::load_space_file(fd_space);
    const auto cert =
        fdc::decompose_lattice_points(space, parse_schedule(fd_schedule, "--schedule"));
    write_output(fd_out, fdc::certificate_to_json(cert).dump(2) + "\n");
  });

  auto* fdc_verify = fdc_cmd->add_subcommand("verify", "Check every clause of a certificate");
  std::string fv_cert, fv_json;
  fdc_verify->add_option("--cert", fv_cert, "Certificate file")->required();
  fdc_verify->add_option("--json", fv_json, "Write the JSON report here");
  fdc_verify->callback([&] {
    const auto cert = fdc::certificate_from_json(load_json_file(fv_cert));
    const auto t0 = std::chrono::steady_clock::now();
    const auto v = fdc::verify_certificate(cert);
    report::RunReport rep;
    rep.command = "fdc verify --cert " + fv_cert;
    report::CheckRecord rec;
    rec.name = "certificate-verify";
    rec.status = v.ok ? report::Status::Pass : report::Status::Fail;
    rec.details = {{"family", cert.family.size()},
                   {"depth", fdc::certificate_depth(cert.root)}};
    if (!v.ok) {
      rec.details["witness"] = {{"nodePath", v.node_path},
                                {"clause", v.clause},
                                {"detail", v.witness}};
    }
    rep.add(std::move(rec));
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rc = emit_report(rep, fv_json);
  });

  auto* fdc_weaken = fdc_cmd->add_subcommand(
      "weaken", "Rebuild a certificate for subsets of t-neighborhoods of its family");
  std::string fw_cert, fw_targets, fw_out;
  double fw_t = 0.0;
  fdc_weaken->add_option("--cert", fw_cert, "Certificate file")->required();
  fdc_weaken->add_option("--t", fw_t, "Neighborhood radius t")->required();
  fdc_weaken
      ->add_option("--targets", fw_targets,
                   "JSON {\"targets\": [[point ids]...], \"assignment\": [indices]}")
      ->required();
  fdc_weaken->add_option("--out", fw_out, "Output file (stdout when omitted)");
  fdc_weaken->callback([&] {
    const auto cert = fdc::certificate_from_json(load_json_file(fw_cert));
    const auto tj = load_json_file(fw_targets);
    if (!tj.is_object() || !tj.contains("targets")) {
      throw std::runtime_error(fw_targets + ": expected an object with \"targets\"");
    }
    std::vector<std::vector<std::uint32_t>> targets;
    for (const auto& ids : tj.at("targets")) {
      targets.push_back(ids_to_points(*cert.space, ids, "--targets"));
    }
    std::vector<std::size_t> assignment(targets.size(), 0);
    if (tj.contains("assignment")) {
      assignment = tj.at("assignment").get<std::vector<std::size_t>>();
    }
    const auto weak = fdc::weaken_to_subneighborhoods(cert, fw_t, targets, assignment);
    write_output(fw_out, fdc::certificate_to_json(weak).dump(2) + "\n");
  });

  auto* fdc_dot = fdc_cmd->add_subcommand("dot", "Graphviz rendering of a certificate tree");
  std::string fdot_cert, fdot_out;
  fdc_dot->add_option("--cert", fdot_cert, "Certificate file")->required();
  fdc_dot->add_option("--out", fdot_out, "Output file (stdout when omitted)");
  fdc_dot->callback([&] {
    const auto cert = fdc::certificate_from_json(load_json_file(fdot_cert));
    write_output(fdot_out, fdc::certificate_to_dot(cert));
  });

  // ---- seq ----
  auto* seq_cmd = app.add_subcommand("seq", "Decomposed sequences and covers");
  seq_cmd->require_subcommand(1);

  auto* seq_check = seq_cmd->add_subcommand(
      "cover-check", "Scan the sequence complex for simplices missed by the cover");
  std::string sc_cover, sc_scales, sc_json;
  int sc_dim_cap = 8;
  seq_check->add_option("--cover", sc_cover, "Cover file")->required();
  seq_check->add_option("--scales", sc_scales, "Comma-separated scale per level")->required();
  seq_check->add_option("--dim-cap", sc_dim_cap, "Face enumeration cap");
  seq_check->add_option("--json", sc_json, "Write the JSON report here");
  seq_check->callback([&] {
    const auto cover = seq::cover_from_json(load_json_file(sc_cover));
    const auto scales = parse_schedule(sc_scales, "--scales");
    const auto t0 = std::chrono::steady_clock::now();
    const auto check = seq::check_cover(cover, scales, sc_dim_cap);
    report::RunReport rep;
    rep.command = "seq cover-check --cover " + sc_cover + " --scales " + sc_scales;
    report::CheckRecord rec;
    rec.name = "sequence-cover";
    rec.status = check.ok ? report::Status::Pass : report::Status::Fail;
    rec.details = {{"simplicesChecked", check.simplices_checked}};
    if (!check.ok) rec.details["witness"] = check.witness;
    rep.add(std::move(rec));
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rc = emit_report(rep, sc_json);
  });

  auto* seq_wfam = seq_cmd->add_subcommand(
      "wfam", "Intersection families of a refined cover, with the refinement report");
  std::string sw_cover, sw_t, sw_scales, sw_constants, sw_out;
  seq_wfam->add_option("--cover", sw_cover, "Refined cover file")->required();
  seq_wfam->add_option("--t", sw_t, "Comma-separated neighborhood radius per level")
      ->required();
  seq_wfam->add_option("--scales", sw_scales, "Comma-separated scale per level")->required();
  seq_wfam->add_option("--constants", sw_constants,
                       "Comparison constant per level (computed from the space when omitted)");
  seq_wfam->add_option("--out", sw_out, "Output file (stdout when omitted)");
  seq_wfam->callback([&] {
    const auto refined = seq::refined_cover_from_json(load_json_file(sw_cover));
    const auto t_schedule = parse_schedule(sw_t, "--t");
    const auto s_schedule = parse_schedule(sw_scales, "--scales");
    std::vector<double> c_schedule;
    if (!sw_constants.empty()) {
      c_schedule = parse_schedule(sw_constants, "--constants");
    } else {
      for (const auto s : s_schedule) {
        c_schedule.push_back(rips::ambient_constant(refined.cover.z.space, s));
      }
    }
    const auto fams = seq::intersection_families(refined, t_schedule, s_schedule, c_schedule);
    nlohmann::ordered_json out;
    out["omittedEmpty"] = fams.omitted_empty;
    nlohmann::ordered_json families = nlohmann::ordered_json::array();
    const auto& space = *refined.cover.z.space;
    for (const auto& level : fams.families) {
      nlohmann::ordered_json level_j = nlohmann::ordered_json::array();
      for (const auto& part : level) {
        nlohmann::ordered_json part_j = nlohmann::ordered_json::array();
        for (const auto& w : part) {
          nlohmann::ordered_json ids = nlohmann::ordered_json::array();
          for (const auto p : w) ids.push_back(space.id(p));
          part_j.push_back(std::move(ids));
        }
        level_j.push_back(std::move(part_j));
      }
      families.push_back(std::move(level_j));
    }
    out["families"] = std::move(families);
    out["refinementReport"] = fams.refinement_report;
    write_output(sw_out, out.dump(2) + "\n");
  });

  // ---- algebra ----
  auto* algebra_cmd = app.add_subcommand("algebra", "Geometric modules and morphisms");
  algebra_cmd->require_subcommand(1);
  auto* algebra_check =
      algebra_cmd->add_subcommand("check", "Randomized identities over small modules");
  std::string ac_suite = "all", ac_json;
  std::uint64_t ac_seed = 7;
  int ac_trials = 0;
  algebra_check->add_option("--suite", ac_suite, "propagation | split | factor | all");
  algebra_check->add_option("--seed", ac_seed, "Generator seed");
  algebra_check->add_option("--trials", ac_trials, "Override the per-suite trial counts");
  algebra_check->add_option("--json", ac_json, "Write the JSON report here");
  algebra_check->callback([&] {
    const bool all = ac_suite == "all";
    if (!all && ac_suite != "propagation" && ac_suite != "split" && ac_suite != "factor") {
      throw std::runtime_error("--suite must be propagation, split, factor, or all");
    }
    const int pairs = (all || ac_suite == "propagation") ? (ac_trials > 0 ? ac_trials : 500) : 0;
    const int splits = (all || ac_suite == "split") ? (ac_trials > 0 ? ac_trials : 200) : 0;
    const int factors = (all || ac_suite == "factor") ? (ac_trials > 0 ? ac_trials : 200) : 0;

    report::RunReport rep;
    rep.command = "algebra check --suite " + ac_suite + " --seed " + std::to_string(ac_seed);
    rep.seed = ac_seed;
    const auto t0 = std::chrono::steady_clock::now();
    suite::battery_algebra(rep, Rng(ac_seed).fork("algebra"), pairs, splits, factors);
    if (!all) {
      std::erase_if(rep.records, [&](const report::CheckRecord& r) {
        if (ac_suite == "propagation") return r.name != "propagation-subadditive";
        if (ac_suite == "split") return r.name != "module-splitting";
        return r.name != "support-factorization" && r.name != "support-equivalence";
      });
    }
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rc = emit_report(rep, ac_json);
  });

  // ---- suite ----
  auto* suite_cmd = app.add_subcommand("suite", "Run every check battery");
  std::string su_profile = "quick", su_json;
  std::uint64_t su_seed = 7;
  suite_cmd->add_option("--profile", su_profile, "quick | full");
  suite_cmd->add_option("--seed", su_seed, "Generator seed");
  suite_cmd->add_option("--json", su_json, "Write the JSON report here");
  suite_cmd->callback([&] {
    const auto rep = suite::run_suite({su_profile, su_seed});
    rc = emit_report(rep, su_json);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
