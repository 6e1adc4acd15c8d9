#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "redahd/cop/serialize.hpp"
#include "redahd/evolution/engine.hpp"
#include "redahd/util/digest.hpp"
#include "redahd/util/files.hpp"

using namespace redahd;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Invocation {
  int code;
  std::string out, err;
};

Invocation redahd_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::main(args, out, err);
  return {code, out.str(), err.str()};
}

// A fresh scratch directory per test case.
struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name)
      : dir(fs::temp_directory_path() / ("redahd_cli_" + std::to_string(::getpid()) + "_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string operator/(const std::string& f) const { return (dir / f).string(); }
};

const std::string kTriangle =
    "NAME : tri\nTYPE : TSP\nDIMENSION : 3\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n"
    "1 0 0\n2 3 0\n3 0 4\nEOF\n";

std::string bundle_json(const std::string& heuristic_marker) {
  evolution::Bundle b;
  b.kind = cop::CopKind::Tsp;
  b.heuristic.id = "H-1";
  b.heuristic.lr_id = "LR-1";
  b.heuristic.description = "nearest neighbor";
  b.heuristic.code = "# native: " + heuristic_marker + "\ndef solve_B(d):\n    return None\n";
  b.heuristic.status = evolution::EvalStatus::Ok;
  b.heuristic.fitness = -12.0;
  b.problem_b_description = "Problem B1 involves a tour.";
  b.reduction_code =
      "# native: tsp.identity\ndef convert_input_A_to_B(c, d):\n    return d\n"
      "def convert_solution_B_to_A(solution_B):\n    return solution_B\n";
  b.code_template = "def solve_B(d):\n    pass\n";
  return to_json(b).dump(2);
}

std::string kp_run_config(const Scratch& s) {
  REQUIRE(redahd_cli({"gen-data", "--kind", "kp", "--n", "20", "--count", "8", "--seed", "1", "--out",
                      s / "kp.jsonl"})
              .code == 0);
  util::write_file(s / "run.json",
                   R"({"evolution": {"kind": "kp", "population_size": 6, "active_lrs": 2, "generations": 3},
                       "llm": {"backend": "mock"}, "dataset": "kp.jsonl"})");
  return s / "run.json";
}

}  // namespace

TEST_CASE("cli: gen-data writes a reproducible dataset and prints its digest") {
  Scratch s("gen");
  const auto a = redahd_cli({"gen-data", "--kind", "tsp", "--n", "10", "--count", "4", "--seed", "7",
                             "--out", s / "a.jsonl"});
  REQUIRE(a.code == 0);
  const auto bytes = util::read_file(s / "a.jsonl");
  CHECK(a.out.find("sha256 " + util::sha256_hex(bytes)) != std::string::npos);
  const auto d = cop::read_dataset(s / "a.jsonl");
  CHECK(d.instances.size() == 4);

  const auto b = redahd_cli({"gen-data", "--kind", "tsp", "--n", "10", "--count", "4", "--seed", "7",
                             "--out", s / "b.jsonl"});
  CHECK(util::read_file(s / "b.jsonl") == bytes);

  // Existing output needs --force.
  CHECK(redahd_cli({"gen-data", "--kind", "tsp", "--count", "1", "--out", s / "a.jsonl"}).code == 2);
  CHECK(util::read_file(s / "a.jsonl") == bytes);
  CHECK(redahd_cli({"gen-data", "--kind", "tsp", "--count", "1", "--out", s / "a.jsonl", "--force"}).code == 0);

  CHECK(redahd_cli({"gen-data", "--kind", "kp", "--count", "0", "--out", s / "c.jsonl"}).code != 0);
  CHECK(redahd_cli({"gen-data", "--kind", "nope", "--count", "1", "--out", s / "c.jsonl"}).code != 0);
  CHECK(redahd_cli({"gen-data", "--count", "1", "--out", s / "c.jsonl"}).code == 2);
}

TEST_CASE("cli: eval of nearest neighbor on the 3-4-5 triangle") {
  Scratch s("eval");
  util::write_file(s / "tri.tsp", kTriangle);
  util::write_file(s / "nn.json", bundle_json("tsp.nearest_neighbor"));
  const auto r = redahd_cli({"eval", "--bundle", s / "nn.json", "--dataset", s / "tri.tsp", "--out",
                             s / "report.json"});
  CHECK(r.code == 0);
  CHECK(r.out.find("mean objective: -12\n") != std::string::npos);
  CHECK(r.out.find("valid: 1/1") != std::string::npos);
  const auto report = json::parse(util::read_file(s / "report.json"));
  CHECK(report["mean_objective"].get<double>() == -12.0);

  SUBCASE("invalid solutions exit nonzero") {
    util::write_file(s / "skip.json", bundle_json("tsp.skip_last"));
    const auto bad = redahd_cli({"eval", "--bundle", s / "skip.json", "--dataset", s / "tri.tsp"});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("valid: 0/1") != std::string::npos);
  }
  SUBCASE("corrupted bundle exits nonzero") {
    auto text = util::read_file(s / "nn.json");
    util::write_file(s / "broken.json", text.substr(0, text.size() / 2));
    CHECK(redahd_cli({"eval", "--bundle", s / "broken.json", "--dataset", s / "tri.tsp"}).code == 2);
    util::write_file(s / "partial.json", R"({"kind": "tsp"})");
    CHECK(redahd_cli({"eval", "--bundle", s / "partial.json", "--dataset", s / "tri.tsp"}).code == 2);
  }
  SUBCASE("kind mismatch") {
    redahd_cli({"gen-data", "--kind", "kp", "--count", "1", "--out", s / "kp.jsonl"});
    CHECK(redahd_cli({"eval", "--bundle", s / "nn.json", "--dataset", s / "kp.jsonl"}).code == 2);
  }
  SUBCASE("missing dataset") {
    CHECK(redahd_cli({"eval", "--bundle", s / "nn.json", "--dataset", s / "none.tsp"}).code == 2);
  }
}

TEST_CASE("cli: eval on eil51 reports a gap against the known optimum") {
  Scratch s("eil");
  util::write_file(s / "nn.json", bundle_json("tsp.nearest_neighbor"));
  util::write_file(s / "optima.txt", "eil51 426\n");
  const auto r = redahd_cli({"eval", "--bundle", s / "nn.json", "--dataset",
                             std::string(REDAHD_TEST_DATA_DIR) + "/eil51.tsp", "--optima", s / "optima.txt",
                             "--out", s / "report.json"});
  CHECK(r.code == 0);
  CHECK(r.out.find("mean gap %: ") != std::string::npos);
  const auto report = json::parse(util::read_file(s / "report.json"));
  const double q = report["mean_objective"].get<double>();
  CHECK(report["mean_gap_percent"].get<double>() == doctest::Approx(100.0 * (-q - 426.0) / 426.0));
}

TEST_CASE("cli: baselines table") {
  Scratch s("baselines");
  util::write_file(s / "tri.tsp", kTriangle);
  const auto r = redahd_cli({"baselines", "--dataset", s / "tri.tsp", "--out", s / "b.json"});
  CHECK(r.code == 0);
  CHECK(r.out.find("nearest_neighbor\t-12\t12\t-") != std::string::npos);
  const auto j = json::parse(util::read_file(s / "b.json"));
  CHECK(j["baselines"][0]["mean_objective"].get<double>() == -12.0);

  redahd_cli({"gen-data", "--kind", "bpp", "--n", "30", "--count", "3", "--out", s / "bpp.jsonl"});
  const auto bpp = redahd_cli({"baselines", "--dataset", s / "bpp.jsonl"});
  CHECK(bpp.code == 0);
  CHECK(bpp.out.find("best_fit") != std::string::npos);
  CHECK(bpp.out.find("first_fit") != std::string::npos);
}

TEST_CASE("cli: run with the mock backend, then replay it") {
  Scratch s("run");
  const auto config = kp_run_config(s);
  const auto r = redahd_cli({"run", "--config", config, "--out", s / "rec"});
  REQUIRE(r.code == 0);
  for (const char* f : {"run_result.json", "checkpoint.json", "lr_archive.json", "best_heuristic.json",
                        "transcript.jsonl"})
    CHECK(fs::exists(fs::path(s / "rec") / f));
  const auto recorded = util::read_file(s / "rec/run_result.json");
  CHECK(r.out.find("sha256 " + util::sha256_hex(recorded)) != std::string::npos);
  CHECK(r.err.find("generation 3:") != std::string::npos);

  // The bundle evaluates to the fitness the run reported.
  const auto best = json::parse(util::read_file(s / "rec/best_heuristic.json"));
  const auto e = redahd_cli({"eval", "--bundle", s / "rec/best_heuristic.json", "--dataset", s / "kp.jsonl",
                             "--out", s / "eval.json"});
  CHECK(e.code == 0);
  CHECK(json::parse(util::read_file(s / "eval.json"))["mean_objective"] == best["heuristic"]["fitness"]);

  CHECK(redahd_cli({"run", "--config", config, "--out", s / "rec"}).code == 2);

  for (const char* out : {"replay1", "replay2"}) {
    const auto p = redahd_cli({"run", "--config", config, "--out", s / out, "--backend", "replay",
                               "--transcript", s / "rec/transcript.jsonl"});
    REQUIRE(p.code == 0);
    CHECK(util::read_file(s / out + std::string("/run_result.json")) == recorded);
  }

  SUBCASE("resume from the final checkpoint reproduces the result") {
    const auto p = redahd_cli({"run", "--config", config, "--out", s / "replay1", "--backend", "replay",
                               "--transcript", s / "rec/transcript.jsonl", "--resume"});
    CHECK(p.code == 0);
    CHECK(util::read_file(s / "replay1/run_result.json") == recorded);
  }
  SUBCASE("workers do not change the result") {
    CHECK(redahd_cli({"run", "--config", config, "--out", s / "w4", "--workers", "4"}).code == 0);
    CHECK(util::read_file(s / "w4/run_result.json") == recorded);
  }
  SUBCASE("replay without a transcript is a usage error") {
    CHECK(redahd_cli({"run", "--config", config, "--out", s / "x", "--backend", "replay"}).code == 2);
  }
}

TEST_CASE("cli: repeated runs use consecutive seeds") {
  Scratch s("repeat");
  const auto config = kp_run_config(s);
  const auto r = redahd_cli({"run", "--config", config, "--out", s / "multi", "--repeat", "2", "--seed", "5"});
  REQUIRE(r.code == 0);
  const auto summary = json::parse(util::read_file(s / "multi/repeat_summary.json"));
  REQUIRE(summary["runs"].size() == 2);
  CHECK(summary["runs"][0]["seed"] == 5);
  CHECK(summary["runs"][1]["seed"] == 6);
  const auto second = json::parse(util::read_file(s / "multi/run-2/run_result.json"));
  CHECK(second["config"]["seed"] == 6);
}

TEST_CASE("cli: run config errors") {
  Scratch s("config");
  kp_run_config(s);
  CHECK(redahd_cli({"run", "--config", s / "missing.json"}).code == 2);
  util::write_file(s / "unknown.json",
                   R"({"evolution": {"kind": "kp"}, "dataset": "kp.jsonl", "colour": "blue"})");
  const auto u = redahd_cli({"run", "--config", s / "unknown.json", "--out", s / "o"});
  CHECK(u.code == 2);
  CHECK(u.err.find("colour") != std::string::npos);
  util::write_file(s / "bad.json", R"({"evolution": {"kind": "kp", "population_size": 0}, "dataset": "kp.jsonl"})");
  CHECK(redahd_cli({"run", "--config", s / "bad.json", "--out", s / "o"}).code == 2);
  CHECK_FALSE(fs::exists(s / "o"));
}

TEST_CASE("cli: live backend pre-flight names the missing key variable") {
  Scratch s("live");
  kp_run_config(s);
  ::unsetenv("REDAHD_TEST_UNSET_KEY");
  util::write_file(s / "live.json", R"({"evolution": {"kind": "kp"}, "dataset": "kp.jsonl",
      "llm": {"backend": "live", "endpoint": "http://127.0.0.1:9/v1/chat/completions",
              "api_key_env": "REDAHD_TEST_UNSET_KEY"}})");
  const auto r = redahd_cli({"run", "--config", s / "live.json", "--out", s / "o"});
  CHECK(r.code != 0);
  CHECK(r.err.find("REDAHD_TEST_UNSET_KEY") != std::string::npos);
  CHECK_FALSE(fs::exists(s / "o"));
}
