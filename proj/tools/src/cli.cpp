#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include "redahd/cop/baselines.hpp"
#include "redahd/cop/generate.hpp"
#include "redahd/cop/objective.hpp"
#include "redahd/cop/serialize.hpp"
#include "redahd/cop/tsplib.hpp"
#include "redahd/cop/validate.hpp"
#include "redahd/error.hpp"
#include "redahd/evolution/engine.hpp"
#include "redahd/fixtures/natives.hpp"
#include "redahd/llm/transcript.hpp"
#include "redahd/sandbox/native.hpp"
#include "redahd/sandbox/subprocess.hpp"
#include "redahd/util/digest.hpp"
#include "redahd/util/files.hpp"
#include "run_config.hpp"

namespace redahd::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

// Input problems the user can fix (bad files, bad flags).
class UsageError : public Error {
 public:
  using Error::Error;
};

std::string num(double v) {
  if (!std::isfinite(v)) return "-";
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

struct NamedDataset {
  cop::Dataset dataset;
  std::vector<std::string> names;  // per instance, for optima lookup
};

void require_file(const fs::path& path, const char* what) {
  if (!fs::is_regular_file(path)) throw UsageError(std::string(what) + " " + path.string() + " does not exist");
}

NamedDataset load_dataset(const fs::path& path) {
  require_file(path, "dataset");
  NamedDataset d;
  if (path.extension() == ".tsp") {
    auto p = cop::parse_tsplib(util::read_file(path));
    d.dataset.kind = cop::CopKind::Tsp;
    d.dataset.instances.push_back(std::move(p.instance));
    d.dataset.metadata.source = path.filename().string();
    d.names.push_back(p.name);
    return d;
  }
  d.dataset = cop::read_dataset(path);
  const auto stem = path.stem().string();
  for (std::size_t k = 0; k < d.dataset.instances.size(); ++k)
    d.names.push_back(d.dataset.instances.size() == 1 ? stem : stem + "#" + std::to_string(k));
  return d;
}

std::map<std::string, double> load_optima(const std::string& path) {
  std::map<std::string, double> out;
  if (path.empty()) return out;
  require_file(path, "optima table");
  for (auto& [name, value] : cop::parse_optima_table(util::read_file(path))) out[name] = value;
  return out;
}

// Reference for gaps: a known optimum, or ceil(sum/W) for bin packing.
std::optional<std::pair<double, std::string>> reference(const cop::Instance& x, const std::string& name,
                                                        const std::map<std::string, double>& optima) {
  if (auto it = optima.find(name); it != optima.end()) return std::make_pair(it->second, "optimum");
  if (auto* b = std::get_if<cop::BppInstance>(&x))
    return std::make_pair(cop::bin_lower_bound(b->item_sizes, b->capacity), "lower bound");
  if (auto* o = std::get_if<cop::ObppInstance>(&x))
    return std::make_pair(cop::bin_lower_bound(o->item_stream, o->capacity), "lower bound");
  return std::nullopt;
}

std::shared_ptr<sandbox::Sandbox> make_sandbox(const std::vector<std::string>& runner) {
  if (runner.size() == 1 && runner[0] == "native")
    return std::make_shared<sandbox::NativeSandbox>(fixtures::native_registry());
  return std::make_shared<sandbox::SubprocessSandbox>(runner);
}

std::vector<std::string> split_runner(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string w; in >> w;) out.push_back(w);
  if (out.empty()) throw UsageError("--runner must not be empty");
  return out;
}

void prepare_output(const fs::path& dir, bool force) {
  if (fs::exists(dir)) {
    if (!force)
      throw UsageError(dir.string() + " already exists; pass --force to overwrite it");
    fs::remove_all(dir);
  }
  fs::create_directories(dir);
}

void write_json(const fs::path& path, const json& j) { util::write_file(path, j.dump(2) + "\n"); }

// --------------------------------------------------------------------------
// gen-data

struct GenArgs {
  std::string kind;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  std::string out;
  bool force = false;
  std::optional<std::size_t> n, m;
  std::optional<double> capacity;
  std::string distribution = "uniform";
};

int gen_data(const GenArgs& a, std::ostream& out) {
  cop::GeneratorParams p;
  if (a.n) p.n = *a.n;
  if (a.m) p.m = *a.m;
  p.capacity = a.capacity;
  if (a.distribution == "weibull") p.distribution = cop::SizeDistribution::Weibull;
  else if (a.distribution != "uniform") throw UsageError("unknown distribution '" + a.distribution + "'");
  const auto kind = cop::parse_kind(a.kind);
  if (fs::exists(a.out) && !a.force) throw UsageError(a.out + " already exists; pass --force to overwrite it");
  const auto data = cop::generate_instances(kind, p, a.seed, a.count);
  const auto bytes = cop::dataset_to_jsonl(data);
  if (auto parent = fs::path(a.out).parent_path(); !parent.empty()) fs::create_directories(parent);
  util::write_file(a.out, bytes);
  out << "wrote " << data.instances.size() << " " << cop::to_string(kind) << " instances to " << a.out
      << "\nsha256 " << util::sha256_hex(bytes) << "\n";
  return kOk;
}

// --------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string bundle, dataset, optima, runner = "native", out;
  double timeout = 60.0;
};

int eval(const EvalArgs& a, std::ostream& out) {
  require_file(a.bundle, "bundle");
  evolution::Bundle bundle;
  try {
    bundle = evolution::bundle_from_json(json::parse(util::read_file(a.bundle)));
  } catch (const json::exception& e) {
    throw UsageError(a.bundle + ": " + e.what());
  }
  const auto data = load_dataset(a.dataset);
  if (data.dataset.kind != bundle.kind)
    throw UsageError("bundle is for " + std::string(cop::to_string(bundle.kind)) + " but the dataset holds " +
                     std::string(cop::to_string(data.dataset.kind)) + " instances");
  const auto optima = load_optima(a.optima);
  auto sb = make_sandbox(split_runner(a.runner));

  sandbox::ExecRequest req;
  req.request_id = "eval";
  req.kind = bundle.kind;
  req.reduction_code = bundle.reduction_code;
  req.heuristic_code = bundle.heuristic.code;
  req.instances = data.dataset.instances;
  req.timeout_seconds = a.timeout;
  const auto resp = sb->execute(req);
  if (resp.outcome != sandbox::BatchOutcome::Completed) {
    out << "batch " << sandbox::to_string(resp.outcome) << ": " << resp.error << "\n";
    return kFailed;
  }

  json rows = json::array();
  double sum = 0, gap_sum = 0;
  std::size_t valid = 0, gaps = 0;
  out << "instance\tobjective\tstatus\tgap%\n";
  for (std::size_t k = 0; k < resp.results.size(); ++k) {
    const auto& x = data.dataset.instances[k];
    json row{{"instance", data.names[k]}, {"objective", nullptr}, {"gap_percent", nullptr}};
    std::string status = "ok";
    double q = NAN;
    std::optional<double> gap;
    const auto& r = resp.results[k];
    if (r.error) {
      status = std::string(sandbox::to_string(r.error->error_class)) + ": " + r.error->message;
    } else {
      try {
        const auto y = cop::solution_from_json(bundle.kind, *r.solution);
        const auto report = cop::validate(x, y);
        if (report.valid()) {
          q = cop::objective_unchecked(x, y);
        } else {
          status = "invalid: " + std::string(cop::to_string(report.violations.front().code)) + ": " +
                   report.violations.front().detail;
        }
      } catch (const ParseError& e) {
        status = std::string("invalid: ") + e.what();
      }
    }
    if (status == "ok") {
      ++valid;
      sum += q;
      row["objective"] = q;
      if (auto ref = reference(x, data.names[k], optima)) {
        gap = cop::optimality_gap(std::abs(q), ref->first, cop::sense_of(bundle.kind));
        row["gap_percent"] = *gap;
        row["reference"] = {{"value", ref->first}, {"type", ref->second}};
        gap_sum += *gap;
        ++gaps;
      }
    }
    row["status"] = status;
    out << data.names[k] << "\t" << num(q) << "\t" << status << "\t" << (gap ? num(*gap) : "-") << "\n";
    rows.push_back(std::move(row));
  }
  const auto n = resp.results.size();
  out << "valid: " << valid << "/" << n << "\n";
  json summary{{"instances", std::move(rows)}, {"valid", valid}, {"count", n},
               {"mean_objective", nullptr}, {"mean_gap_percent", nullptr}};
  if (valid == n) {
    out << "mean objective: " << num(sum / static_cast<double>(n)) << "\n";
    summary["mean_objective"] = sum / static_cast<double>(n);
  }
  if (gaps > 0) {
    out << "mean gap %: " << num(gap_sum / static_cast<double>(gaps)) << "\n";
    summary["mean_gap_percent"] = gap_sum / static_cast<double>(gaps);
  }
  if (!a.out.empty()) write_json(a.out, summary);
  return valid == n ? kOk : kFailed;
}

// --------------------------------------------------------------------------
// baselines

struct BaselineArgs {
  std::string dataset, optima, out;
};

int baselines(const BaselineArgs& a, std::ostream& out) {
  const auto data = load_dataset(a.dataset);
  const auto optima = load_optima(a.optima);
  const auto kind = data.dataset.kind;
  const auto& xs = data.dataset.instances;
  json table = json::array();
  out << "baseline\tmean objective\tmean " << (cop::is_minimization(kind) ? "cost" : "value")
      << "\tmean gap%\n";
  for (auto b : cop::baselines_for(kind)) {
    double sum = 0, gap_sum = 0;
    std::size_t gaps = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const double q = cop::objective(xs[k], cop::baseline_solve(b, xs[k]));
      sum += q;
      if (auto ref = reference(xs[k], data.names[k], optima)) {
        gap_sum += cop::optimality_gap(std::abs(q), ref->first, cop::sense_of(kind));
        ++gaps;
      }
    }
    const double mean = sum / static_cast<double>(xs.size());
    const double gap = gaps ? gap_sum / static_cast<double>(gaps) : NAN;
    out << cop::to_string(b) << "\t" << num(mean) << "\t" << num(std::abs(mean)) << "\t" << num(gap) << "\n";
    table.push_back({{"baseline", cop::to_string(b)},
                     {"mean_objective", mean},
                     {"mean_gap_percent", gaps ? json(gap) : json(nullptr)}});
  }
  if (!a.out.empty())
    write_json(a.out, {{"kind", cop::to_string(kind)}, {"count", xs.size()}, {"baselines", table}});
  return kOk;
}

// --------------------------------------------------------------------------
// run

struct RunArgs {
  std::string config, out, backend, transcript, runner;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  int repeat = 1;
  bool force = false;
  bool resume = false;
};

std::shared_ptr<llm::Client> make_llm(const RunConfig& c) {
  return llm::make_client(
      c.llm, c.transcript,
      fixtures::ScriptedDesigner::responder(std::make_shared<fixtures::ScriptedDesigner>(
          c.evolution.kind, c.designer_seed, c.designer)));
}

// One run into c.output_dir. Returns h*'s fitness.
std::optional<double> run_once(const RunConfig& c, bool force, bool resume, std::ostream& out,
                               std::ostream& err) {
  const auto dir = c.output_dir;
  const auto checkpoint_path = dir / "checkpoint.json";
  // Pre-flight: building the client reads the live key variable or loads the
  // replay transcript, so those errors surface before anything is written.
  auto client = make_llm(c);
  auto data = load_dataset(c.dataset).dataset;
  if (resume) {
    if (!fs::exists(checkpoint_path)) throw UsageError("no checkpoint at " + checkpoint_path.string());
  } else {
    prepare_output(dir, force);
  }
  std::shared_ptr<llm::RecordingClient> recorder;
  if (c.llm.backend != llm::Backend::Replay) {
    recorder = std::make_shared<llm::RecordingClient>(client, resume ? std::nullopt
                                                                     : std::optional(dir / "transcript.jsonl"));
    client = recorder;
  }
  auto sb = make_sandbox(c.runner);

  std::optional<evolution::Engine> engine;
  if (resume) {
    const auto cp = json::parse(util::read_file(checkpoint_path));
    if (auto replay = std::dynamic_pointer_cast<llm::ReplayClient>(client))
      replay->seek(evolution::Engine::checkpoint_llm_calls(cp));
    engine.emplace(evolution::Engine::resume(cp, client, sb, std::move(data)));
  } else {
    engine.emplace(c.evolution, client, sb, std::move(data));
  }
  engine->on_generation = [&](const evolution::Engine& e) {
    const auto& g = e.state().trace.back();
    err << "generation " << g.generation << ": population best " << (g.best_q ? num(*g.best_q) : "-")
        << ", best so far " << (g.best_so_far ? num(*g.best_so_far) : "-") << "\n";
    write_json(checkpoint_path, e.checkpoint());
  };

  evolution::RunResult result;
  try {
    result = engine->run();
  } catch (const evolution::InitializationError& e) {
    err << "initialization failed: " << e.what() << "\n";
    return std::nullopt;
  }
  if (c.llm.backend == llm::Backend::Replay) {
    result.transcript_id = llm::read_transcript(*c.transcript).identity();
  } else if (!resume) {
    result.transcript_id = recorder->transcript().identity();
  }

  const auto rr = to_json(result);
  write_json(dir / "run_result.json", rr);
  json archive = json::array();
  for (const auto& l : result.state.lrs) archive.push_back(reduction::to_json(l, true));
  write_json(dir / "lr_archive.json", archive);
  if (result.state.best) write_json(dir / "best_heuristic.json", to_json(*result.state.best));


  const auto bytes = util::read_file(dir / "run_result.json");
  if (!result.state.best) {
    err << "no valid heuristic was found\n";
    return std::nullopt;
  }
  out << "h* fitness: " << num(*result.state.best->heuristic.fitness) << "\n"
      << "h* language reduction: " << result.state.best->heuristic.lr_id << "\n"
      << "run result: " << (dir / "run_result.json").string() << " (sha256 " << util::sha256_hex(bytes) << ")\n"
      << "best heuristic: " << (dir / "best_heuristic.json").string() << "\n"
      << "lr archive: " << (dir / "lr_archive.json").string() << "\n"
      << "checkpoint: " << checkpoint_path.string() << "\n";
  if (recorder && !resume) out << "transcript: " << (dir / "transcript.jsonl").string() << "\n";
  return result.state.best->heuristic.fitness;
}

int run(const RunArgs& a, std::ostream& out, std::ostream& err) {
  require_file(a.config, "config");
  auto c = read_run_config(a.config);
  if (!a.out.empty()) c.output_dir = a.out;
  if (a.seed) c.evolution.seed = *a.seed;
  if (a.workers) c.evolution.workers = *a.workers;
  if (!a.backend.empty()) c.llm.backend = llm::parse_backend(a.backend);
  if (!a.transcript.empty()) c.transcript = a.transcript;
  if (!a.runner.empty()) c.runner = split_runner(a.runner);
  evolution::validate(c.evolution);
  llm::validate(c.llm);
  if (c.llm.backend == llm::Backend::Replay && (!c.transcript || !fs::exists(*c.transcript)))
    throw UsageError("replay backend needs an existing transcript (--transcript)");
  if (a.repeat < 1) throw UsageError("--repeat must be >= 1");
  if (a.repeat > 1 && a.resume) throw UsageError("--resume works on a single run");

  if (a.repeat == 1) return run_once(c, a.force, a.resume, out, err) ? kOk : kFailed;

  // Independent runs with consecutive seeds, one subdirectory each.
  prepare_output(c.output_dir, a.force);
  json runs = json::array();
  std::vector<double> best;
  for (int i = 0; i < a.repeat; ++i) {
    auto ci = c;
    ci.evolution.seed = c.evolution.seed + static_cast<std::uint64_t>(i);
    ci.designer_seed = c.designer_seed + static_cast<std::uint64_t>(i);
    ci.output_dir = c.output_dir / ("run-" + std::to_string(i + 1));
    out << "== run " << i + 1 << " (seed " << ci.evolution.seed << ")\n";
    const auto q = run_once(ci, false, false, out, err);
    runs.push_back({{"seed", ci.evolution.seed}, {"dir", ci.output_dir.string()},
                    {"best_fitness", q ? json(*q) : json(nullptr)}});
    if (q) best.push_back(*q);
  }
  json summary{{"runs", runs}, {"mean_best_fitness", nullptr}, {"best_fitness", nullptr}};
  if (!best.empty()) {
    double s = 0;
    for (double q : best) s += q;
    summary["mean_best_fitness"] = s / static_cast<double>(best.size());
    summary["best_fitness"] = *std::max_element(best.begin(), best.end());
    out << "mean h* fitness over " << best.size() << " runs: " << num(s / static_cast<double>(best.size()))
        << "\nbest h* fitness: " << num(*std::max_element(best.begin(), best.end())) << "\n";
  }
  write_json(c.output_dir / "repeat_summary.json", summary);
  return best.size() == static_cast<std::size_t>(a.repeat) ? kOk : kFailed;
}

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Automatic heuristic design through language reductions", "redahd"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen-data", "Generate a seeded dataset file");
  g->add_option("--kind", gen.kind, "tsp, cvrp, bpp, obpp, kp or mkp")->required();
  g->add_option("--count", gen.count, "Number of instances")->required();
  g->add_option("--seed", gen.seed, "Generator seed");
  g->add_option("--out", gen.out, "Output .jsonl path")->required();
  g->add_option("--n", gen.n, "Nodes / customers / items");
  g->add_option("--m", gen.m, "Knapsacks (mkp)");
  g->add_option("--capacity", gen.capacity, "Vehicle, bin or knapsack capacity");
  g->add_option("--distribution", gen.distribution, "Item sizes for bpp/obpp: uniform or weibull");
  g->add_flag("--force", gen.force, "Overwrite an existing file");

  RunArgs run_args;
  auto* r = app.add_subcommand("run", "Run the full design pipeline from a config file");
  r->add_option("--config", run_args.config, "Run config JSON")->required();
  r->add_option("--out", run_args.out, "Output directory (overrides the config)");
  r->add_option("--seed", run_args.seed, "Evolution seed (overrides the config)");
  r->add_option("--workers", run_args.workers, "Concurrent sandbox evaluations");
  r->add_option("--repeat", run_args.repeat, "Independent runs with consecutive seeds");
  r->add_option("--backend", run_args.backend, "live, replay or mock");
  r->add_option("--transcript", run_args.transcript, "Transcript to replay");
  r->add_option("--runner", run_args.runner, "\"native\" or the runner command line");
  r->add_flag("--force", run_args.force, "Replace an existing output directory");
  r->add_flag("--resume", run_args.resume, "Continue from the output directory's checkpoint");

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "Evaluate a heuristic bundle on a dataset");
  e->add_option("--bundle", ev.bundle, "best_heuristic.json from a run")->required();
  e->add_option("--dataset", ev.dataset, "Dataset .jsonl or TSPLIB .tsp")->required();
  e->add_option("--optima", ev.optima, "Known optima table (\"name optimum\" per line)");
  e->add_option("--runner", ev.runner, "\"native\" or the runner command line");
  e->add_option("--timeout", ev.timeout, "Batch timeout in seconds");
  e->add_option("--out", ev.out, "Write a JSON report here");

  BaselineArgs bl;
  auto* b = app.add_subcommand("baselines", "Run the classical baselines on a dataset");
  b->add_option("--dataset", bl.dataset, "Dataset .jsonl or TSPLIB .tsp")->required();
  b->add_option("--optima", bl.optima, "Known optima table");
  b->add_option("--out", bl.out, "Write a JSON report here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*g) return gen_data(gen, out);
    if (*r) return run(run_args, out, err);
    if (*e) return eval(ev, out);
    if (*b) return baselines(bl, out);
  } catch (const UsageError& ex) {
    err << "error: " << ex.what() << "\n";
    return kUsage;
  } catch (const ParseError& ex) {
    err << "error: " << ex.what() << "\n";
    return kUsage;
  } catch (const ContractError& ex) {
    err << "error: " << ex.what() << "\n";
    return kUsage;
  } catch (const LlmError& ex) {
    err << "error: " << ex.what() << "\n";
    return kFailed;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return kFailed;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kFailed;
  }
  return kUsage;
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return main(args, out, err);
}

}  // namespace redahd::cli
