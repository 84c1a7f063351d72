// beesynth: command-line front end.
//   beesynth synth --grammar G --task T --engine E --cost M
//   beesynth bench --suite DIR --engine E --cost M --timeout S --out DIR
//   beesynth curves --in DIR --out FILE

#include <sys/resource.h>

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "beesynth/harness.hpp"

using namespace beesynth;

namespace {

constexpr int kExitSolved = 0;
constexpr int kExitExhausted = 1;
constexpr int kExitTimeout = 2;
constexpr int kExitConfig = 3;

Engine engine_arg(const std::string& s) {
  auto e = parse_engine(s);
  if (!e) throw ConfigError("unknown engine '" + s + "' (bus, guided, heap, brute, bee)");
  return *e;
}

CostModelKind cost_arg(const std::string& s) {
  auto c = parse_cost_model(s);
  if (!c) throw ConfigError("unknown cost model '" + s + "' (size, probe, probe-rounded, bustle-binned, bustle-spline, u)");
  return *c;
}

int outcome_exit(Outcome o) {
  switch (o) {
    case Outcome::solved: return kExitSolved;
    case Outcome::timeout:
    case Outcome::memory_exhausted: return kExitTimeout;
    default: return kExitExhausted;
  }
}

struct SynthArgs {
  std::string grammar, task, engine = "bee", cost = "probe", weights;
  int probe_d = 0;
  double timeout = 60.0;
  std::uint64_t max_evals = 0;
  bool no_equivalence = false, trace = false, self_combinations = false;
};

int run_synth(const SynthArgs& a) {
  const Task task = load_task(a.task);
  const Pcfg g = specialize(load_grammar(a.grammar), task.arguments);
  const Engine engine = engine_arg(a.engine);
  const CostModelKind kind = cost_arg(a.cost);

  SearchOptions so;
  so.budget.seconds = a.timeout;
  if (a.max_evals) so.budget.max_evaluations = a.max_evals;
  so.equivalence = !a.no_equivalence;
  so.trace = a.trace;
  so.brute_self_combinations = a.self_combinations;

  SearchResult res;
  if (a.probe_d > 0) {
    ProbeOptions po;
    po.d = a.probe_d;
    po.engine = engine;
    po.search = so;
    po.log = &std::cerr;
    res = run_probe(g, task, po).result;
  } else {
    std::shared_ptr<const ProbabilityOracle> oracle;
    if (!a.weights.empty()) oracle = std::make_shared<NetworkOracle>(NetworkOracle::load(a.weights));
    const CostModel model(engine == Engine::bus ? CostModelKind::size : kind, g, oracle);
    if (model.post_generation() && task.domain == "bitvectors") {
      throw ConfigError("post-generation cost models do not apply to bit-vector tasks");
    }
    res = synthesize(engine, g, task, model, so);
  }

  if (a.trace) {
    std::cout << "iteration,cost,generated,bank\n";
    for (const auto& r : res.trace) std::cout << r.iteration << ',' << r.cost << ',' << r.generated << ',' << r.bank_size << "\n";
  }
  std::cout << "outcome " << outcome_name(res.outcome) << "\n"
            << "evaluations " << res.evaluations << "\n"
            << "generations " << res.generations << "\n"
            << "elapsed " << res.elapsed << "\n";
  if (res.solution) {
    std::cout << "cost " << res.solution_cost << "\n"
              << "solution " << to_prefix(res.solution) << "\n";
  }
  return outcome_exit(res.outcome);
}

struct BenchArgs {
  std::string suite, engine = "bee", cost = "probe", out;
  double timeout = 60.0;
  int reps = 1, jobs = 1, probe_d = 0;
  std::uint64_t max_evals = 0;
  std::vector<std::string> weights;
};

int run_bench(const BenchArgs& a) {
  const Suite suite = load_suite(a.suite);
  RunConfig cfg;
  cfg.engine = engine_arg(a.engine);
  cfg.cost = cost_arg(a.cost);
  cfg.timeout = a.timeout;
  cfg.reps = a.reps;
  cfg.jobs = a.jobs;
  cfg.probe_d = a.probe_d;
  if (a.max_evals) cfg.max_evaluations = a.max_evals;
  for (const auto& w : a.weights) cfg.weights.emplace_back(w);

  const auto records = run_benchmark(suite, cfg);
  write_results(a.out, records, cfg);
  std::size_t solved = 0, errors = 0;
  for (const auto& r : records) {
    solved += r.outcome == "solved";
    if (r.outcome == "error") {
      ++errors;
      std::cerr << r.task << ": " << r.error << "\n";
    }
  }
  for (const auto& t : verify_records(suite, records)) std::cerr << t << ": recorded solution does not re-verify\n";
  std::cout << solved << "/" << records.size() << " solved\n";
  return errors == records.size() && !records.empty() ? kExitConfig : kExitSolved;
}

int run_curves(const std::string& in, const std::string& out) {
  const auto records = read_results(in);
  std::ofstream os(out);
  if (!os) throw ConfigError("cannot write " + out);
  write_curves_csv(os, emit_curves(records));
  return kExitSolved;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bottom-up program synthesis"};
  app.require_subcommand(1);
  std::size_t memory_mb = 0;
  app.add_option("--memory-mb", memory_mb,
                 "Address-space cap; searches that hit it end with outcome 'memory' instead of being killed");

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "Solve one task");
  synth->add_option("--grammar", sa.grammar, "Grammar JSON")->required()->check(CLI::ExistingFile);
  synth->add_option("--task", sa.task, "Task JSON")->required()->check(CLI::ExistingFile);
  synth->add_option("--engine", sa.engine, "bus, guided, heap, brute or bee");
  synth->add_option("--cost", sa.cost, "size, probe, probe-rounded, bustle-binned, bustle-spline or u");
  synth->add_option("--probe-d", sa.probe_d, "Run the PCFG learning loop with restart constant d (typical: 6)");
  synth->add_option("--timeout", sa.timeout, "Seconds");
  synth->add_option("--max-evals", sa.max_evals, "Evaluation cap");
  synth->add_flag("--no-equivalence", sa.no_equivalence, "Keep observationally equivalent programs");
  synth->add_flag("--trace", sa.trace, "Print per-iteration trace rows");
  synth->add_flag("--self-combinations", sa.self_combinations, "Brute: combine a node's program with itself");
  synth->add_option("--weights", sa.weights, "Network oracle weight file")->check(CLI::ExistingFile);

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Run a task suite");
  bench->add_option("--suite", ba.suite, "Suite directory")->required()->check(CLI::ExistingDirectory);
  bench->add_option("--engine", ba.engine, "Engine, as for synth");
  bench->add_option("--cost", ba.cost, "Cost model, as for synth");
  bench->add_option("--timeout", ba.timeout, "Seconds per task");
  bench->add_option("--reps", ba.reps, "Repetitions");
  bench->add_option("--jobs", ba.jobs, "Tasks run in parallel");
  bench->add_option("--probe-d", ba.probe_d, "Run the PCFG learning loop with restart constant d");
  bench->add_option("--max-evals", ba.max_evals, "Evaluation cap per task");
  bench->add_option("--weights", ba.weights, "One weight file per repetition");
  bench->add_option("--out", ba.out, "Output directory")->required();

  std::string cin_path, cout_path;
  auto* curves = app.add_subcommand("curves", "Cumulative solved curves from results");
  curves->add_option("--in", cin_path, "Results directory or CSV")->required()->check(CLI::ExistingPath);
  curves->add_option("--out", cout_path, "Curve CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (memory_mb > 0) {
    const rlim_t bytes = static_cast<rlim_t>(memory_mb) << 20;
    rlimit lim{bytes, bytes};
    setrlimit(RLIMIT_AS, &lim);
  }

  try {
    if (*synth) return run_synth(sa);
    if (*bench) return run_bench(ba);
    if (*curves) return run_curves(cin_path, cout_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const GrammarError& e) {
    std::cerr << "grammar error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const TaskError& e) {
    std::cerr << "task error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
