#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "redahd/cop/generate.hpp"
#include "redahd/cop/serialize.hpp"
#include "redahd/fixtures/natives.hpp"
#include "redahd/sandbox/native.hpp"
#include "redahd/sandbox/subprocess.hpp"
#include "redahd/util/random.hpp"

using namespace redahd;
using namespace redahd::sandbox;

namespace {

std::string reduction(const std::string& marker) {
  return "import numpy as np\n# native: " + marker +
         "\ndef convert_input_A_to_B(*args):\n    return args\n"
         "def convert_solution_B_to_A(solution_B):\n    return solution_B\n";
}

std::string heuristic(const std::string& marker) {
  return "# native: " + marker + "\ndef solve_B(*input_B):\n    return None\n";
}

ExecRequest tsp_request(const std::string& red, const std::string& heur, std::size_t count = 3,
                        std::size_t n = 3) {
  ExecRequest r;
  r.request_id = "r1";
  r.kind = cop::CopKind::Tsp;
  r.reduction_code = reduction(red);
  r.heuristic_code = heuristic(heur);
  r.instances = cop::generate_instances(cop::CopKind::Tsp, {.n = n}, 5, count).instances;
  return r;
}

std::filesystem::path script(const std::string& name, const std::string& body) {
  auto path = std::filesystem::temp_directory_path() /
              ("redahd_runner_" + std::to_string(::getpid()) + "_" + name);
  std::ofstream(path) << body;
  std::filesystem::permissions(path, std::filesystem::perms::owner_all);
  return path;
}

}  // namespace

TEST_CASE("native marker parsing") {
  auto m = find_native_marker("x = 1\n  # native: kp.noisy_ratio seed=4 jitter=0.25\n");
  REQUIRE(m.has_value());
  CHECK(m->name == "kp.noisy_ratio");
  CHECK(m->params.at("seed") == "4");
  CHECK(param_or(m->params, "jitter", 0) == 0.25);
  CHECK(param_or(m->params, "missing", 7) == 7);
  CHECK_FALSE(find_native_marker("def solve_B(): pass").has_value());
}

TEST_CASE("native sandbox") {
  NativeSandbox sb(fixtures::native_registry());

  SUBCASE("identity reduction + index order on 3 TSP instances") {
    auto resp = sb.execute(tsp_request("tsp.identity", "tsp.index_order"));
    CHECK(resp.outcome == BatchOutcome::Completed);
    REQUIRE(resp.results.size() == 3);
    for (const auto& o : resp.results) CHECK(*o.solution == nlohmann::json({0, 1, 2}));
  }
  SUBCASE("exception on instance 2 of 3 is isolated") {
    auto resp = sb.execute(tsp_request("tsp.identity", "fail.raise_on index=1"));
    CHECK(resp.outcome == BatchOutcome::Completed);
    REQUIRE(resp.results.size() == 3);
    CHECK(resp.results[0].solution.has_value());
    REQUIRE(resp.results[1].error.has_value());
    CHECK(resp.results[1].error->error_class == ErrorClass::Exception);
    CHECK(resp.results[2].solution.has_value());
  }
  SUBCASE("61 simulated seconds against a 60 second budget") {
    auto req = tsp_request("tsp.identity", "tsp.nearest_neighbor cost=61", 1);
    auto resp = sb.execute(req);
    CHECK(resp.outcome == BatchOutcome::Timeout);
    CHECK(resp.results.empty());
  }
  SUBCASE("budget is for the whole batch") {
    auto resp = sb.execute(tsp_request("tsp.identity", "tsp.nearest_neighbor cost=25", 3));
    CHECK(resp.outcome == BatchOutcome::Timeout);
    resp = sb.execute(tsp_request("tsp.identity", "tsp.nearest_neighbor cost=19", 3));
    CHECK(resp.outcome == BatchOutcome::Completed);
  }
  SUBCASE("load errors crash the batch") {
    auto req = tsp_request("tsp.identity", "tsp.index_order");
    req.heuristic_code = "def solve_A(x):\n    return x\n";
    CHECK(sb.execute(req).outcome == BatchOutcome::Crashed);
    req = tsp_request("tsp.unknown", "tsp.index_order");
    auto resp = sb.execute(req);
    CHECK(resp.outcome == BatchOutcome::Crashed);
    CHECK(resp.error.find("tsp.unknown") != std::string::npos);
  }
  SUBCASE("online packing scorers") {
    ExecRequest req;
    req.request_id = "o";
    req.kind = cop::CopKind::Obpp;
    req.reduction_code = reduction("obpp.identity");
    req.instances = {cop::ObppInstance{{6, 6, 3}, 10}};
    req.heuristic_code = heuristic("obpp.best_fit");
    auto resp = sb.execute(req);
    CHECK(*resp.results[0].solution == nlohmann::json({0, 1, 0}));
    REQUIRE(resp.results.size() == 1);
    req.heuristic_code = heuristic("obpp.bad_shape");
    resp = sb.execute(req);
    REQUIRE(resp.results[0].error.has_value());
    CHECK(resp.results[0].error->error_class == ErrorClass::BadShape);
    req.heuristic_code = heuristic("obpp.nan");
    resp = sb.execute(req);
    CHECK(resp.results[0].error->error_class == ErrorClass::NonFinite);
  }
}

TEST_CASE("protocol round trip is numerically lossless") {
  util::Rng rng(123);
  for (int trial = 0; trial < 2000; ++trial) {
    cop::KpInstance kp;
    for (int j = 0; j < 5; ++j) {
      kp.weights.push_back(rng.uniform01() * std::pow(10.0, rng.uniform(-300, 300)));
      kp.values.push_back(rng.uniform01());
    }
    kp.capacity = rng.uniform(0, 1e6);
    ExecRequest req;
    req.request_id = std::to_string(trial);
    req.kind = cop::CopKind::Kp;
    req.instances = {kp};
    const auto wire = to_json(req).dump();
    const auto back = request_from_json(nlohmann::json::parse(wire));
    const auto& got = std::get<cop::KpInstance>(back.instances[0]);
    CHECK(got.weights == kp.weights);
    CHECK(got.values == kp.values);
    CHECK(got.capacity == kp.capacity);
  }
}

TEST_CASE("call_arguments follows the reduction template") {
  auto args = call_arguments(cop::BppInstance{{3, 4}, 10});
  CHECK(args == nlohmann::json::parse("[[3.0,4.0],[10.0,10.0]]"));
  args = call_arguments(cop::KpInstance{{1}, {2}, 3});
  CHECK(args == nlohmann::json::parse("[[1.0],[2.0],3.0]"));
  CHECK_THROWS_AS(call_arguments(cop::ObppInstance{{1}, 2}), ContractError);
  ExecRequest req;
  req.kind = cop::CopKind::Obpp;
  req.instances = {cop::ObppInstance{{1}, 2}};
  const auto j = to_json(req);
  CHECK(j["protocol"] == "online_packing");
  CHECK_FALSE(j.contains("arguments"));
}

TEST_CASE("subprocess sandbox") {
  SubprocessOptions fast;
  fast.startup_grace_seconds = 0.2;

  SUBCASE("canned response") {
    auto path = script("canned.sh",
                       "#!/bin/sh\necho '{\"protocol_version\": 1}'\nread line\n"
                       "echo '{\"request_id\":\"r1\",\"outcome\":\"completed\",\"results\":"
                       "[{\"solution\":[0,1,2]},{\"error\":{\"class\":\"exception\",\"message\":"
                       "\"boom\",\"traceback\":\"\"}},{\"solution\":[2,1,0]}],"
                       "\"wall_time_seconds\":0.01}'\n");
    SubprocessSandbox sb({path.string()});
    auto resp = sb.execute(tsp_request("x", "y"));
    CHECK(resp.outcome == BatchOutcome::Completed);
    REQUIRE(resp.results.size() == 3);
    CHECK(resp.results[1].error->message == "boom");
    CHECK(*resp.results[2].solution == nlohmann::json({2, 1, 0}));
    std::filesystem::remove(path);
  }
  SUBCASE("hung guest is killed at the deadline") {
    auto path = script("sleep.sh", "#!/bin/sh\necho '{\"protocol_version\": 1}'\nread line\nsleep 30\n");
    SubprocessSandbox sb({path.string()}, fast);
    auto req = tsp_request("x", "y");
    req.timeout_seconds = 0.3;
    const auto t0 = std::chrono::steady_clock::now();
    auto resp = sb.execute(req);
    const double took = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(resp.outcome == BatchOutcome::Timeout);
    CHECK(took < 5.0);
    std::filesystem::remove(path);
  }
  SUBCASE("runner exits early") {
    auto path = script("exit.sh", "#!/bin/sh\necho '{\"protocol_version\": 1}'\necho oops >&2\nexit 3\n");
    SubprocessSandbox sb({path.string()}, fast);
    auto resp = sb.execute(tsp_request("x", "y"));
    CHECK(resp.outcome == BatchOutcome::Crashed);
    CHECK(resp.error.find("oops") != std::string::npos);
    std::filesystem::remove(path);
  }
  SUBCASE("garbage response") {
    auto path = script("garbage.sh", "#!/bin/sh\necho '{\"protocol_version\": 1}'\nread line\necho not-json\n");
    SubprocessSandbox sb({path.string()}, fast);
    CHECK(sb.execute(tsp_request("x", "y")).outcome == BatchOutcome::Crashed);
    std::filesystem::remove(path);
  }
  SUBCASE("wrong handshake") {
    auto path = script("hs.sh", "#!/bin/sh\necho '{\"protocol_version\": 2}'\n");
    SubprocessSandbox sb({path.string()}, fast);
    CHECK(sb.execute(tsp_request("x", "y")).outcome == BatchOutcome::Crashed);
    std::filesystem::remove(path);
  }
  SUBCASE("missing executable") {
    SubprocessSandbox sb({"/nonexistent/runner"}, fast);
    CHECK(sb.execute(tsp_request("x", "y")).outcome == BatchOutcome::Crashed);
  }
  SUBCASE("python stub sees positional arguments") {
    auto path = script("stub.py",
                       "#!/usr/bin/env python3\nimport json, sys\n"
                       "print(json.dumps({'protocol_version': 1}), flush=True)\n"
                       "req = json.loads(sys.stdin.readline())\n"
                       "res = [{'solution': list(range(len(a[0])))[::-1]} for a in req['arguments']]\n"
                       "print(json.dumps({'request_id': req['request_id'], 'outcome': 'completed',"
                       " 'results': res, 'wall_time_seconds': 0.0}), flush=True)\n");
    SubprocessSandbox sb({path.string()});
    auto req = tsp_request("x", "y", 4, 5);
    auto resp = sb.execute(req);
    REQUIRE(resp.outcome == BatchOutcome::Completed);
    REQUIRE(resp.results.size() == 4);
    CHECK(*resp.results[0].solution == nlohmann::json({4, 3, 2, 1, 0}));
    std::filesystem::remove(path);
  }
  SUBCASE("large requests do not deadlock") {
    auto path = script("big.sh",
                       "#!/bin/sh\necho '{\"protocol_version\": 1}'\nread line\n"
                       "echo '{\"request_id\":\"r1\",\"outcome\":\"completed\",\"results\":[{\"solution\":[]}]}'\n");
    SubprocessSandbox sb({path.string()});
    auto req = tsp_request("x", "y", 1, 400);  // ~3 MB line
    CHECK(sb.execute(req).outcome == BatchOutcome::Completed);
    std::filesystem::remove(path);
  }
}
