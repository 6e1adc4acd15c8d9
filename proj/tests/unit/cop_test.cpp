#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "redahd/cop/baselines.hpp"
#include "redahd/cop/brute_force.hpp"
#include "redahd/cop/generate.hpp"
#include "redahd/cop/objective.hpp"
#include "redahd/cop/online_packing.hpp"
#include "redahd/cop/serialize.hpp"
#include "redahd/cop/tsplib.hpp"
#include "redahd/cop/validate.hpp"
#include "redahd/error.hpp"
#include "redahd/util/files.hpp"
#include "redahd/util/random.hpp"

using namespace redahd;
using namespace redahd::cop;

namespace {

TspInstance tsp_from(std::vector<Point> coords) {
  TspInstance x;
  x.coords = std::move(coords);
  x.distances = euclidean_distances(x.coords);
  return x;
}

TspInstance triangle_345() { return tsp_from({{0, 0}, {3, 0}, {0, 4}}); }

// Direct bin packers used as oracles for the scorer-driven simulation.
std::vector<int> direct_first_fit(const std::vector<double>& items, double cap) {
  std::vector<double> rem;
  std::vector<int> out;
  for (double s : items) {
    std::size_t b = 0;
    while (b < rem.size() && rem[b] < s) ++b;
    if (b == rem.size()) rem.push_back(cap);
    rem[b] -= s;
    out.push_back(static_cast<int>(b));
  }
  return out;
}

std::vector<int> direct_best_fit(const std::vector<double>& items, double cap) {
  std::vector<double> rem;
  std::vector<int> out;
  for (double s : items) {
    std::size_t best = rem.size();
    for (std::size_t b = 0; b < rem.size(); ++b) {
      if (rem[b] >= s && (best == rem.size() || rem[b] < rem[best])) best = b;
    }
    if (best == rem.size()) rem.push_back(cap);
    rem[best] -= s;
    out.push_back(static_cast<int>(best));
  }
  return out;
}

}  // namespace

TEST_CASE("objective examples") {
  CHECK(objective(tsp_from({{0, 0}, {0, 1}, {1, 0}}), TspSolution{{0, 1, 2}}) ==
        doctest::Approx(-(2.0 + std::sqrt(2.0))).epsilon(1e-15));

  KpInstance kp{{1, 2}, {10, 5}, 2};
  CHECK(objective(kp, KpSolution{{0}}) == 10.0);

  BppInstance bpp{{5, 5, 5}, 10};
  CHECK(objective(bpp, BppSolution{{{0, 1}, {2}}}) == -2.0);

  CvrpInstance cvrp;
  cvrp.coords = {{0, 0}, {0, 1}};
  cvrp.distances = euclidean_distances(cvrp.coords);
  cvrp.demands = {0, 1};
  cvrp.capacity = 50;
  CHECK(objective(cvrp, CvrpSolution{{{1}}}) == -2.0);
}

TEST_CASE("objective rejects invalid solutions and kind mismatches") {
  KpInstance kp{{3, 3}, {1, 1}, 5};
  CHECK_THROWS_AS(objective(kp, KpSolution{{0, 1}}), ContractError);
  CHECK_THROWS_AS(objective(kp, TspSolution{{0}}), ContractError);
  CHECK_THROWS_AS(validate(kp, TspSolution{{0}}), ContractError);
}

TEST_CASE("validate examples") {
  SUBCASE("tsp revisit") {
    auto report = validate(tsp_from({{0, 0}, {1, 0}, {0, 1}}), TspSolution{{0, 1, 1}});
    CHECK_FALSE(report.valid());
    CHECK(report.has(ViolationCode::DuplicateIndex));
    CHECK(report.has(ViolationCode::MissingIndex));
    for (const auto& v : report.violations) {
      if (v.code == ViolationCode::DuplicateIndex) CHECK(v.indices == std::vector<int>{1});
      if (v.code == ViolationCode::MissingIndex) CHECK(v.indices == std::vector<int>{2});
    }
  }
  SUBCASE("kp capacity") {
    auto report = validate(KpInstance{{3, 3}, {1, 1}, 5}, KpSolution{{0, 1}});
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].code == ViolationCode::CapacityExceeded);
    CHECK(report.violations[0].detail.find("6") != std::string::npos);
  }
  SUBCASE("cvrp route demand") {
    CvrpInstance x;
    x.coords = {{0, 0}, {1, 0}, {0, 1}};
    x.distances = euclidean_distances(x.coords);
    x.demands = {0, 30, 30};
    x.capacity = 50;
    auto report = validate(x, CvrpSolution{{{1, 2}}});
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].code == ViolationCode::CapacityExceeded);
    CHECK(validate(x, CvrpSolution{{{1}, {2}}}).valid());
    CHECK(validate(x, CvrpSolution{{{1}, {}, {2}}}).has(ViolationCode::EmptyRoute));
    CHECK(validate(x, CvrpSolution{{{0, 1}, {2}}}).has(ViolationCode::IndexOutOfRange));
  }
  SUBCASE("obpp bin ids") {
    ObppInstance x{{6, 6, 3}, 10};
    CHECK(validate(x, ObppSolution{{0, 1, 0}}).valid());
    CHECK(validate(x, ObppSolution{{0, 0, 1}}).has(ViolationCode::CapacityExceeded));
    CHECK(validate(x, ObppSolution{{0, 2, 1}}).has(ViolationCode::BinNotOpened));
    CHECK(validate(x, ObppSolution{{0, 1}}).has(ViolationCode::WrongLength));
  }
  SUBCASE("mkp") {
    MkpInstance x;
    x.values = {1, 2, 3};
    x.weights = Matrix(2, 3, 1.0);
    x.constraints = {1, 2};
    CHECK(validate(x, MkpSolution{{{0}, {1, 2}}}).valid());
    CHECK(validate(x, MkpSolution{{{0}, {0, 2}}}).has(ViolationCode::DuplicateIndex));
    CHECK(validate(x, MkpSolution{{{0, 1}, {2}}}).has(ViolationCode::CapacityExceeded));
    CHECK(validate(x, MkpSolution{{{0}}}).has(ViolationCode::WrongKnapsackCount));
  }
}

TEST_CASE("validate: corruption classes map to violation codes") {
  util::Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    auto ds = generate_instances(CopKind::Tsp, {.n = 12}, 1000 + trial, 1);
    const auto& x = ds.instances[0];
    auto tour = std::get<TspSolution>(baseline_solve(Baseline::NearestNeighbor, x)).tour;
    REQUIRE(validate(x, TspSolution{tour}).valid());

    auto dup = tour;
    const auto i = static_cast<std::size_t>(rng.uniform_int(0, 10));
    dup[i] = dup[i + 1];
    CHECK(validate(x, TspSolution{dup}).has(ViolationCode::DuplicateIndex));

    auto dropped = tour;
    dropped.erase(dropped.begin() + static_cast<long>(i));
    auto report = validate(x, TspSolution{dropped});
    CHECK(report.has(ViolationCode::MissingIndex));
    CHECK(report.has(ViolationCode::WrongLength));
  }
  for (int trial = 0; trial < 50; ++trial) {
    auto ds = generate_instances(CopKind::Kp, {.n = 50}, 2000 + trial, 1);
    const auto& x = std::get<KpInstance>(ds.instances[0]);
    auto items = std::get<KpSolution>(baseline_solve(Baseline::RatioGreedy, x)).items;
    REQUIRE(validate(x, KpSolution{items}).valid());
    auto dup = items;
    dup.push_back(items.front());
    CHECK(validate(x, KpSolution{dup}).has(ViolationCode::DuplicateIndex));
    std::vector<int> all(x.weights.size());
    std::iota(all.begin(), all.end(), 0);
    CHECK(validate(x, KpSolution{all}).has(ViolationCode::CapacityExceeded));
  }
  for (int trial = 0; trial < 50; ++trial) {
    auto ds = generate_instances(CopKind::Bpp, {.n = 30}, 3000 + trial, 1);
    const auto& x = ds.instances[0];
    auto bins = std::get<BppSolution>(baseline_solve(Baseline::FirstFit, x)).bins;
    REQUIRE(validate(x, BppSolution{bins}).valid());
    auto dropped = bins;
    dropped.back().pop_back();
    if (dropped.back().empty()) dropped.pop_back();
    CHECK(validate(x, BppSolution{dropped}).has(ViolationCode::MissingIndex));
    std::vector<int> everything;
    for (const auto& b : bins) everything.insert(everything.end(), b.begin(), b.end());
    CHECK(validate(x, BppSolution{{everything}}).has(ViolationCode::CapacityExceeded));
  }
}

TEST_CASE("tsp objective is invariant under rotation and reversal") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto ds = generate_instances(CopKind::Tsp, {.n = 15}, seed, 1);
    const auto& x = ds.instances[0];
    util::Rng rng(seed);
    std::vector<int> tour(15);
    std::iota(tour.begin(), tour.end(), 0);
    for (std::size_t i = tour.size() - 1; i > 0; --i) {
      std::swap(tour[i], tour[static_cast<std::size_t>(
                             rng.uniform_int(0, static_cast<std::int64_t>(i)))]);
    }
    const double base = objective(x, TspSolution{tour});
    auto rotated = tour;
    std::rotate(rotated.begin(), rotated.begin() + static_cast<long>(seed % 15),
                rotated.end());
    auto reversed = tour;
    std::reverse(reversed.begin(), reversed.end());
    CHECK(objective(x, TspSolution{rotated}) == doctest::Approx(base).epsilon(1e-12));
    CHECK(objective(x, TspSolution{reversed}) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("simulate_online_packing") {
  auto any = [](double, std::span<const double> rem) {
    return std::vector<double>(rem.size(), 1.0);
  };
  CHECK(simulate_online_packing({{6, 6}, 10}, any).assignment == std::vector<int>{0, 1});

  auto best_fit = [](double item, std::span<const double> rem) {
    std::vector<double> s;
    for (double r : rem) s.push_back(-(r - item));
    return s;
  };
  CHECK(simulate_online_packing({{4, 4}, 10}, best_fit).assignment ==
        std::vector<int>{0, 0});

  SUBCASE("matches direct best-fit / first-fit on random streams") {
    auto first_fit = [](double, std::span<const double> rem) {
      std::vector<double> s;
      for (std::size_t b = 0; b < rem.size(); ++b) s.push_back(-static_cast<double>(b));
      return s;
    };
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
      auto ds = generate_instances(CopKind::Obpp, {.n = 20}, seed, 1);
      const auto& x = std::get<ObppInstance>(ds.instances[0]);
      auto bf = simulate_online_packing(x, best_fit);
      auto ff = simulate_online_packing(x, first_fit);
      CHECK(bf.assignment == direct_best_fit(x.item_stream, x.capacity));
      CHECK(ff.assignment == direct_first_fit(x.item_stream, x.capacity));
      for (const auto& y : {bf, ff}) {
        CHECK(validate(x, y).valid());
        const int max_id = *std::max_element(y.assignment.begin(), y.assignment.end());
        CHECK(-objective(x, y) == max_id + 1);
      }
    }
  }

  SUBCASE("scorer errors") {
    ObppInstance x{{3, 3, 3}, 10};
    CHECK_THROWS_AS(simulate_online_packing(
                        x, [](double, std::span<const double>) {
                          return std::vector<double>{1.0, 2.0, 3.0};
                        }),
                    EvaluationFailure);
    CHECK_THROWS_AS(simulate_online_packing(
                        x, [](double, std::span<const double> rem) {
                          return std::vector<double>(rem.size(), std::nan(""));
                        }),
                    EvaluationFailure);
  }
}

TEST_CASE("generate_instances") {
  auto a = generate_instances(CopKind::Tsp, {.n = 50}, 7, 64);
  auto b = generate_instances(CopKind::Tsp, {.n = 50}, 7, 64);
  REQUIRE(a.instances.size() == 64);
  CHECK(dataset_to_jsonl(a) == dataset_to_jsonl(b));
  for (const auto& inst : a.instances) {
    const auto& x = std::get<TspInstance>(inst);
    REQUIRE(x.coords.size() == 50);
    for (const auto& p : x.coords) {
      CHECK(p.x >= 0.0);
      CHECK(p.x <= 1.0);
      CHECK(p.y >= 0.0);
      CHECK(p.y <= 1.0);
    }
    for (std::size_t i = 0; i < 50; ++i) {
      CHECK(x.distances(i, i) == 0.0);
      for (std::size_t j = 0; j < 50; ++j) CHECK(x.distances(i, j) == x.distances(j, i));
    }
  }
  CHECK(dataset_to_jsonl(generate_instances(CopKind::Tsp, {.n = 50}, 8, 64)) !=
        dataset_to_jsonl(a));

  auto kp = generate_instances(CopKind::Kp, {.n = 50, .capacity = 12.5}, 1, 16);
  CHECK(kp.instances.size() == 16);
  for (const auto& inst : kp.instances) {
    const auto& x = std::get<KpInstance>(inst);
    CHECK(x.capacity == 12.5);
    for (double w : x.weights) CHECK((w > 0.0 && w < 1.0));
  }

  auto cvrp = generate_instances(CopKind::Cvrp, {.n = 50, .capacity = 50.0}, 3, 8);
  for (const auto& inst : cvrp.instances) {
    const auto& x = std::get<CvrpInstance>(inst);
    CHECK(x.demands[0] == 0.0);
    CHECK(x.demands.size() == 51);
    for (double d : x.demands) CHECK(d <= x.capacity);
  }

  auto obpp = generate_instances(
      CopKind::Obpp, {.n = 500, .capacity = 100.0, .distribution = SizeDistribution::Weibull},
      5, 2);
  for (const auto& inst : obpp.instances) {
    for (double s : std::get<ObppInstance>(inst).item_stream) {
      CHECK(s >= 1.0);
      CHECK(s <= 100.0);
    }
  }

  CHECK_THROWS_AS(generate_instances(CopKind::Tsp, {.n = 50}, 7, 0), ContractError);
  CHECK_THROWS_AS(generate_instances(CopKind::Bpp, {.n = 10, .capacity = 50.0}, 1, 1),
                  ContractError);
}

TEST_CASE("dataset jsonl round trip") {
  for (CopKind kind : kAllKinds) {
    auto ds = generate_instances(kind, {.n = 7, .m = 2}, 11, 3);
    const auto text = dataset_to_jsonl(ds);
    auto back = dataset_from_jsonl(text);
    CHECK(back.kind == kind);
    CHECK(dataset_to_jsonl(back) == text);
  }
  CHECK_THROWS_AS(dataset_from_jsonl("{\"kind\":\"tsp\",\"count\":2}\n"), ParseError);
  CHECK_THROWS_AS(dataset_from_jsonl("not json\n"), ParseError);
}

TEST_CASE("parse_tsplib") {
  const char* tiny =
      "NAME : tiny\nTYPE : TSP\nDIMENSION : 3\nEDGE_WEIGHT_TYPE : EUC_2D\n"
      "NODE_COORD_SECTION\n1 0 0\n2 3 0\n3 0 4\nEOF\n";
  auto p = parse_tsplib(tiny);
  CHECK(p.name == "tiny");
  CHECK(p.instance.distances(0, 1) == 3.0);
  CHECK(p.instance.distances(0, 2) == 4.0);
  CHECK(p.instance.distances(1, 2) == 5.0);

  CHECK_THROWS_AS(parse_tsplib("TYPE : TSP\nDIMENSION : 3\nEDGE_WEIGHT_TYPE : EUC_2D\nEOF\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_tsplib("TYPE : TSP\nDIMENSION : 3\nEDGE_WEIGHT_TYPE : GEO\n"
                               "NODE_COORD_SECTION\n1 0 0\n2 3 0\n3 0 4\nEOF\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_tsplib("TYPE : TSP\nDIMENSION : 4\nEDGE_WEIGHT_TYPE : EUC_2D\n"
                               "NODE_COORD_SECTION\n1 0 0\n2 3 0\n3 0 4\nEOF\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_tsplib("TYPE : TSP\nDIMENSION : 3\nEDGE_WEIGHT_TYPE : EUC_2D\n"
                               "NODE_COORD_SECTION\n1 0 zero\n2 3 0\n3 0 4\nEOF\n"),
                  ParseError);

  SUBCASE("eil51") {
    auto eil = parse_tsplib(util::read_file(REDAHD_TEST_DATA_DIR "/eil51.tsp"));
    CHECK(eil.name == "eil51");
    CHECK(eil.instance.coords.size() == 51);
    CHECK(tsplib_euc2d_distances(eil.instance.coords) == eil.instance.distances);
    for (double d : eil.instance.distances.data()) CHECK(d == std::round(d));
  }
  SUBCASE("berlin52") {
    auto berlin = parse_tsplib(util::read_file(REDAHD_TEST_DATA_DIR "/berlin52.tsp"));
    CHECK(berlin.instance.coords.size() == 52);
    CHECK(tsplib_euc2d_distances(berlin.instance.coords) == berlin.instance.distances);
  }
}

TEST_CASE("optimality_gap") {
  CHECK(optimality_gap(426, 426, Sense::Minimize) == 0.0);
  CHECK(optimality_gap(440.1, 426, Sense::Minimize) ==
        doctest::Approx(3.30985915492958).epsilon(1e-12));
  CHECK(optimality_gap(19.0, 20.0, Sense::Maximize) == doctest::Approx(5.0));
  CHECK_THROWS_AS(optimality_gap(1.0, 0.0, Sense::Minimize), ContractError);

  // 52 bins against ceil(7480 / 150) = 50.
  std::vector<double> sizes(74, 100.0);
  sizes.push_back(80.0);
  REQUIRE(std::accumulate(sizes.begin(), sizes.end(), 0.0) == 7480.0);
  const double bound = bin_lower_bound(sizes, 150.0);
  CHECK(bound == 50.0);
  CHECK(optimality_gap(52.0, bound, Sense::Minimize) == doctest::Approx(4.0));
}

TEST_CASE("baselines") {
  auto nn = baseline_solve(Baseline::NearestNeighbor, triangle_345());
  CHECK(std::get<TspSolution>(nn).tour == std::vector<int>{0, 1, 2});
  CHECK(objective(triangle_345(), nn) == -12.0);

  KpInstance kp{{1, 4, 2}, {10, 4, 3}, 3};
  auto rg = std::get<KpSolution>(baseline_solve(Baseline::RatioGreedy, kp));
  auto items = rg.items;
  std::sort(items.begin(), items.end());
  CHECK(items == std::vector<int>{0, 2});
  CHECK(objective(kp, rg) == 13.0);

  BppInstance bpp{{5, 4, 5, 6}, 10};
  auto bf = std::get<BppSolution>(baseline_solve(Baseline::BestFit, bpp));
  CHECK(bf.bins.size() == 2);
  CHECK(validate(bpp, bf).valid());

  CHECK_THROWS_AS(baseline_solve(Baseline::BestFit, triangle_345()), ContractError);
  CHECK_THROWS_AS(baseline_solve(Baseline::NearestNeighbor, kp), ContractError);

  for (CopKind kind : kAllKinds) {
    auto ds = generate_instances(kind, {.n = 30, .m = 3}, 5, 4);
    for (Baseline b : baselines_for(kind)) {
      for (const auto& x : ds.instances) CHECK(validate(x, baseline_solve(b, x)).valid());
    }
  }
}

TEST_CASE("brute_force_optimum") {
  auto tri = brute_force_optimum(triangle_345());
  CHECK(tri.objective == -12.0);

  KpInstance kp{{2, 3, 4}, {3, 4, 5}, 5};
  auto k = brute_force_optimum(kp);
  CHECK(k.objective == 7.0);
  CHECK(std::get<KpSolution>(k.solution).items == std::vector<int>{0, 1});

  BppInstance bpp{{6, 5, 5, 4}, 10};
  auto b = brute_force_optimum(bpp);
  CHECK(b.objective == -2.0);

  CHECK_THROWS_AS(brute_force_optimum(generate_instances(CopKind::Tsp, {.n = 10}, 1, 1)
                                          .instances[0]),
                  ContractError);
  CHECK_THROWS_AS(brute_force_optimum(generate_instances(CopKind::Kp, {.n = 16}, 1, 1)
                                          .instances[0]),
                  ContractError);

  SUBCASE("dominates baselines on tiny instances") {
    for (CopKind kind : kAllKinds) {
      const std::size_t n = (kind == CopKind::Tsp || kind == CopKind::Cvrp) ? 7 : 10;
      auto ds = generate_instances(kind, {.n = n, .m = 2}, 17, 5);
      for (const auto& x : ds.instances) {
        auto opt = brute_force_optimum(x);
        CHECK(validate(x, opt.solution).valid());
        for (Baseline bl : baselines_for(kind)) {
          CHECK(objective(x, baseline_solve(bl, x)) <= opt.objective + 1e-12);
        }
      }
    }
  }
}
