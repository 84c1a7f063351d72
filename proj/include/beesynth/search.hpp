#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "beesynth/bank.hpp"
#include "beesynth/costs.hpp"
#include "beesynth/interp.hpp"

namespace beesynth {

enum class Outcome {
  solved,
  timeout,           // wall clock or evaluation/generation cap
  memory_exhausted,
  exhausted,         // the program space ran out
  cap_reached,       // cost cap reached (used by the learning loop)
};

std::string_view outcome_name(Outcome o);

struct Budget {
  double seconds = 60.0;
  std::optional<std::uint64_t> max_evaluations;
  std::optional<std::uint64_t> max_generations;
};

/// How equal-cost candidates are ordered in the level-based enumerator.
/// `reverse` walks rules, cost keys and buckets back to front.
enum class TieOrder { insertion, reverse };

class SearchObserver {
 public:
  virtual ~SearchObserver() = default;
  virtual void on_evaluated(const Program& /*p*/, const Signature& /*sig*/, double /*cost*/) {}
  virtual void on_generated(const Program& /*p*/, double /*w*/) {}
  /// Brute and Heap Search: children accepted when expanding `parent`
  /// (parent is null for the Brute root).
  virtual void on_children(const Program& /*parent*/, const std::vector<Program>& /*children*/) {}
};

struct TraceRow {
  std::uint64_t iteration = 0;
  double cost = 0.0;
  std::uint64_t generated = 0;
  std::size_t bank_size = 0;
};

struct SearchOptions {
  Budget budget;
  bool equivalence = true;
  /// Stop with cap_reached once the next cost to enumerate exceeds this.
  std::optional<double> cost_cap;
  TieOrder tie_order = TieOrder::insertion;
  /// Brute: also combine a node's program with itself. Off reproduces the
  /// textbook child sets; on makes the search complete.
  bool brute_self_combinations = false;
  bool trace = false;
  SearchObserver* observer = nullptr;
};

struct SearchResult {
  Outcome outcome = Outcome::timeout;
  Program solution;
  double solution_cost = 0.0;
  std::uint64_t evaluations = 0;
  std::uint64_t generations = 0;
  std::uint64_t states_expanded = 0;
  double elapsed = 0.0;
  std::vector<TraceRow> trace;
  std::vector<double> cost_list;  // Bee Search's C at exit
  std::size_t bank_size = 0;
};

enum class Engine { bus, guided, heap, brute, bee };
std::optional<Engine> parse_engine(std::string_view name);
std::string_view engine_name(Engine e);

/// Size-ordered enumeration (every rule costs 1).
SearchResult bus_synthesize(const Pcfg& pcfg, const Task& task, const SearchOptions& opts = {});
/// Integer cost levels 1, 2, ...; the model must be integral.
SearchResult cost_guided_synthesize(const Pcfg& pcfg, const Task& task, const CostModel& model,
                                    const SearchOptions& opts = {});
/// Pre-generation models only. Never prunes equivalent programs.
SearchResult heap_search_synthesize(const Pcfg& pcfg, const Task& task, const CostModel& model,
                                    const SearchOptions& opts = {});
SearchResult brute_synthesize(const Pcfg& pcfg, const Task& task, const CostModel& model, const SearchOptions& opts = {});
SearchResult bee_synthesize(const Pcfg& pcfg, const Task& task, const CostModel& model, const SearchOptions& opts = {});

SearchResult synthesize(Engine engine, const Pcfg& pcfg, const Task& task, const CostModel& model,
                        const SearchOptions& opts = {});

}  // namespace beesynth
