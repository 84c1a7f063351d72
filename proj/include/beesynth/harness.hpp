#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "beesynth/learn.hpp"
#include "beesynth/search.hpp"

namespace beesynth {

/// A directory holding grammar.json and one JSON file per task.
struct Suite {
  std::filesystem::path dir;
  Pcfg grammar;
  std::vector<Task> tasks;  // sorted by name
};

Suite load_suite(const std::filesystem::path& dir);

struct RunConfig {
  Engine engine = Engine::bee;
  CostModelKind cost = CostModelKind::probe;
  double timeout = 60.0;
  int reps = 1;
  int jobs = 1;
  /// > 0 runs the learning loop (guided or bee engine only).
  int probe_d = 0;
  bool equivalence = true;
  bool brute_self_combinations = false;
  std::optional<std::uint64_t> max_evaluations;
  /// Network weights, one per repetition (cycled). Empty uses the heuristic
  /// oracle.
  std::vector<std::filesystem::path> weights;
};

nlohmann::json config_to_json(const RunConfig& cfg);

struct RunRecord {
  std::string task;
  std::string engine;
  std::string cost;
  int rep = 0;
  std::string outcome;  // outcome_name(), or "error"
  std::uint64_t evaluations = 0;
  std::uint64_t generations = 0;
  double elapsed = 0.0;
  std::string solution;  // prefix notation, empty unless solved
  std::uint32_t size = 0;
  double cost_value = 0.0;
  std::string error;  // message when outcome is "error"
};

/// Runs one task. Configuration problems (for example a post-generation
/// model on a bit-vector task) throw ConfigError.
RunRecord run_task(const Pcfg& grammar, const Task& task, const RunConfig& cfg, int rep = 0);

/// Every task times every repetition. Per-task failures become "error"
/// records. Records are sorted by (task, rep).
std::vector<RunRecord> run_benchmark(const Suite& suite, const RunConfig& cfg);

/// Tasks whose recorded solution fails to parse or to solve the task.
std::vector<std::string> verify_records(const Suite& suite, const std::vector<RunRecord>& records);

void write_records_csv(std::ostream& os, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_records_csv(std::istream& is);

struct SeriesSummary {
  std::string engine, cost;
  int reps = 0;
  double mean_solved = 0.0;
  double stddev_solved = 0.0;  // sample standard deviation over repetitions
};
std::vector<SeriesSummary> summarize(const std::vector<RunRecord>& records);

struct CurvePoint {
  std::string series;  // "engine/cost"
  std::string metric;  // "time" or "evaluations"
  double x = 0.0;
  std::uint64_t y = 0;
};
/// Cumulative solved-instance curves per (engine, cost): solved records
/// sorted by the metric, x the running sum, y the count.
std::vector<CurvePoint> emit_curves(const std::vector<RunRecord>& records);
void write_curves_csv(std::ostream& os, const std::vector<CurvePoint>& points);

/// results.csv, summary.csv and config.json under `dir`.
void write_results(const std::filesystem::path& dir, const std::vector<RunRecord>& records, const RunConfig& cfg);
/// Reads every results.csv below `dir`.
std::vector<RunRecord> read_results(const std::filesystem::path& dir);

}  // namespace beesynth
