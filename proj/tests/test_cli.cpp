#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "coarsekit/fdc.hpp"
#include "coarsekit/metric_space.hpp"
#include "coarsekit/rng.hpp"
#include "coarsekit/sequences.hpp"
#include "coarsekit/sets.hpp"
#include "coarsekit/space_io.hpp"

using namespace coarsekit;
using metric::MetricSpace;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string output;
};

const char* binary() {
  const char* bin = std::getenv("COARSEKIT_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "COARSEKIT_BIN must point at the CLI binary");
  return bin;
}

RunResult run(const std::string& args) {
  const std::string cmd = std::string("\"") + binary() + "\" " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult res;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) {
    res.output.append(buf.data(), n);
  }
  const int status = pclose(pipe);
  res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "coarsekit-cli-test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const auto path = scratch_dir() / name;
  std::ofstream out(path);
  out << text;
  out.close();
  return path.string();
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("help and argument errors") {
  const auto help = run("--help");
  CHECK(help.code == 0);
  CHECK(help.output.find("suite") != std::string::npos);
  CHECK(help.output.find("rips") != std::string::npos);

  CHECK(run("").code == 2);
  CHECK(run("rips build --scale 2").code == 2);        // missing --space
  CHECK(run("suite --no-such-flag").code == 2);
  CHECK(run("suite --profile leisurely --seed 1").code == 2);  // unknown profile
}

TEST_CASE("space generation") {
  const auto out = (scratch_dir() / "free2.json").string();
  const auto gen = run("space gen --group free2 --radius 2 --out " + out);
  CHECK(gen.code == 0);
  const auto space = metric::load_space_file(out);
  CHECK(space->size() == 17);

  const auto small = (scratch_dir() / "z1.json").string();
  CHECK(run("space gen --group abelian1 --radius 3 --out " + small).code == 0);
  CHECK(metric::load_space_file(small)->size() == 7);
  const auto j = read_json(small);
  CHECK(j["generated"]["radius"] == 3);

  CHECK(run("space gen --group matrix --radius 1").code == 2);  // matrix needs --file
  CHECK(run("space gen --group what --radius 1").code == 2);
}

TEST_CASE("rips subcommands on a lattice file") {
  const auto ball = metric::save_space(*MetricSpace::l1_lattice_ball(2, 1));
  const auto space_path = write_file("cross.json", ball.dump());

  const auto built = (scratch_dir() / "cross-rips.json").string();
  const auto build =
      run("rips build --space " + space_path + " --scale 2 --out " + built);
  CHECK(build.code == 0);
  const auto kj = read_json(built);
  CHECK(kj["dimension"] == 4);
  CHECK(kj["simplices"]["4"].size() == 1);

  const auto check =
      run("rips check-metric --space " + space_path + " --scale 2 --samples 40 --seed 3");
  CHECK(check.code == 0);
  CHECK(check.output.find("straighten-step-bounds") != std::string::npos);
  CHECK(check.output.find("metric-comparison") != std::string::npos);
  CHECK(check.output.find("OK:") != std::string::npos);

  const auto dot = run("rips dot --space " + space_path + " --scale 2");
  CHECK(dot.code == 0);
  CHECK(dot.output.find("graph skeleton") != std::string::npos);

  CHECK(run("rips build --space " + space_path + " --scale 0").code == 2);
}

TEST_CASE("certificate pipeline through files") {
  const auto segment = metric::save_space(*MetricSpace::l1_lattice_ball(1, 10));
  const auto space_path = write_file("segment.json", segment.dump());
  const auto cert_path = (scratch_dir() / "cert.json").string();

  CHECK(run("fdc decompose --space " + space_path + " --schedule 5 --out " + cert_path)
            .code == 0);
  const auto verify = run("fdc verify --cert " + cert_path);
  CHECK(verify.code == 0);
  CHECK(verify.output.find("certificate-verify") != std::string::npos);

  SUBCASE("a corrupted certificate fails with the clause in the output") {
    const auto cert = fdc::decompose_lattice(1, 10, {5.0});
    Rng rng(17);
    const auto mut = fdc::move_point_mutation(cert, rng);
    const auto mut_path =
        write_file("mutated.json", fdc::certificate_to_json(mut.cert).dump());
    const auto bad = run("fdc verify --cert " + mut_path);
    CHECK(bad.code == 1);
    CHECK(bad.output.find("disjointness") != std::string::npos);
    CHECK(bad.output.find("FAILED:") != std::string::npos);
  }

  SUBCASE("weakening produces a verifiable certificate") {
    const auto space = MetricSpace::l1_lattice_ball(1, 10);
    nlohmann::json targets;
    targets["targets"] = nlohmann::json::array();
    nlohmann::json ids = nlohmann::json::array();
    for (long long x = -3; x <= 3; ++x) ids.push_back(MetricSpace::lattice_id({x}));
    targets["targets"].push_back(ids);
    const auto targets_path = write_file("targets.json", targets.dump());
    const auto weak_path = (scratch_dir() / "weak.json").string();

    CHECK(run("fdc weaken --cert " + cert_path + " --t 2 --targets " + targets_path +
              " --out " + weak_path)
              .code == 0);
    CHECK(run("fdc verify --cert " + weak_path).code == 0);
    const auto weak = fdc::certificate_from_json(read_json(weak_path));
    CHECK(weak.root.r == 1.0);

    // Exhausting the margin is a usage error, not a verification failure.
    const auto exhausted = run("fdc weaken --cert " + cert_path + " --t 3 --targets " +
                               targets_path + " --out " + weak_path);
    CHECK(exhausted.code == 2);
    CHECK(exhausted.output.find("disjointness exhausted") != std::string::npos);
  }

  SUBCASE("certificate dot rendering") {
    const auto dot = run("fdc dot --cert " + cert_path);
    CHECK(dot.code == 0);
    CHECK(dot.output.find("digraph certificate") != std::string::npos);
  }
}

TEST_CASE("sequence cover checking through files") {
  const auto space = MetricSpace::from_lattice_points(
      "line", {{0}, {1}, {2}, {3}, {4}, {5}, {6}, {7}, {8}, {9}});
  const auto span = [&](long long lo, long long hi) {
    std::vector<std::uint32_t> out;
    for (long long x = lo; x <= hi; ++x) {
      out.push_back(space->index_of(MetricSpace::lattice_id({x})).value());
    }
    return out;
  };
  seq::SequenceCover cover;
  cover.z.space = cover.u.space = cover.v.space = space;
  cover.z.levels = {{span(0, 9)}};
  cover.u.levels = {{span(0, 5)}};
  cover.v.levels = {{span(4, 9)}};

  const auto good_path = write_file("cover.json", seq::cover_to_json(cover).dump());
  const auto good = run("seq cover-check --cover " + good_path + " --scales 1");
  CHECK(good.code == 0);
  CHECK(good.output.find("sequence-cover") != std::string::npos);

  auto broken = cover;
  const auto victim = space->index_of("(7)").value();
  broken.u.levels[0][0] = sets::subtract(broken.u.levels[0][0], {victim});
  broken.v.levels[0][0] = sets::subtract(broken.v.levels[0][0], {victim});
  const auto bad_path = write_file("cover-broken.json", seq::cover_to_json(broken).dump());
  const auto bad = run("seq cover-check --cover " + bad_path + " --scales 1");
  CHECK(bad.code == 1);
  CHECK(bad.output.find("(7)") != std::string::npos);

  SUBCASE("intersection families from a refined cover") {
    seq::RefinedCover refined;
    refined.cover = cover;
    refined.u_sub = {{{span(0, 5)}}};
    refined.v_sub = {{{span(4, 9)}}};
    const auto refined_path =
        write_file("refined.json", seq::refined_cover_to_json(refined).dump());
    const auto wf_path = (scratch_dir() / "families.json").string();
    const auto wf = run("seq wfam --cover " + refined_path +
                        " --t 1 --scales 1 --constants 1 --out " + wf_path);
    CHECK(wf.code == 0);
    const auto fj = read_json(wf_path);
    CHECK(fj["omittedEmpty"] == 0);
    REQUIRE(fj["families"].size() == 1);
    CHECK(fj["families"][0][0].size() == 1);
    CHECK(fj["families"][0][0][0].size() == 4);  // ids (3), (4), (5), (6)
    CHECK(fj["refinementReport"][0]["subPartSatisfied"] == true);
  }
}

TEST_CASE("algebra check subcommand") {
  const auto res = run("algebra check --suite propagation --trials 50 --seed 5");
  CHECK(res.code == 0);
  CHECK(res.output.find("propagation-subadditive") != std::string::npos);
  CHECK(res.output.find("module-splitting") == std::string::npos);

  const auto all = run("algebra check --trials 20 --seed 5");
  CHECK(all.code == 0);
  CHECK(all.output.find("module-splitting") != std::string::npos);
  CHECK(all.output.find("support-factorization") != std::string::npos);
}

TEST_CASE("file errors carry the path and exit with usage failure") {
  const auto missing = run("fdc verify --cert /nonexistent/cert.json");
  CHECK(missing.code == 2);
  CHECK(missing.output.find("error:") != std::string::npos);

  const auto mangled_path = write_file("broken.json", "{ nope");
  const auto mangled = run("rips build --space " + mangled_path + " --scale 2");
  CHECK(mangled.code == 2);
  CHECK(mangled.output.find("broken.json") != std::string::npos);
}

TEST_CASE("json report flag writes a machine-readable copy") {
  const auto segment = metric::save_space(*MetricSpace::l1_lattice_ball(1, 6));
  const auto space_path = write_file("seg6.json", segment.dump());
  const auto report_path = (scratch_dir() / "report.json").string();
  const auto res = run("rips check-metric --space " + space_path +
                       " --scale 2 --samples 20 --seed 11 --json " + report_path);
  CHECK(res.code == 0);
  const auto rj = read_json(report_path);
  CHECK(rj["seed"] == 11);
  CHECK(rj["passed"] == true);
  CHECK(rj["checks"].size() == 2);
  CHECK(rj["checks"][0]["status"] == "pass");
  CHECK_FALSE(rj.contains("wallSeconds"));
}
