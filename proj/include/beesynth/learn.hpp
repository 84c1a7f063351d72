#pragma once

#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "beesynth/search.hpp"

namespace beesynth {

/// A program of the start type that matches some, but not all, examples.
struct PartialSolution {
  Program program;
  std::vector<bool> solved_subset;  // one flag per example
  long cost_at_discovery = 0;
  std::uint64_t iteration_found = 0;
  std::uint64_t order = 0;  // discovery rank within the iteration
};

/// (solved subset, prefix text) of a selected partial solution.
using PartialKey = std::pair<std::vector<bool>, std::string>;
using PartialHistory = std::set<PartialKey>;

/// First-discovered cheapest candidate per solved subset, minus anything
/// already in `history`. Survivors are added to `history`. Output is ordered
/// by discovery.
std::vector<PartialSolution> select_partial_solutions(const std::vector<PartialSolution>& candidates,
                                                      PartialHistory& history);

/// Fit(r) per rule: the best solved fraction among partial solutions whose
/// rule trace contains r, 0 when none does.
std::vector<double> fit_scores(const std::vector<PartialSolution>& psol, const Grammar& g, std::size_t examples);

/// P(r) = Pu(r)^(1 - Fit(r)) / Z, normalized per type.
Pcfg update_pcfg(const std::vector<PartialSolution>& psol, const Pcfg& uniform_pcfg, const Task& task);

struct LearnIteration {
  std::uint64_t iteration = 0;
  double lim = 0.0;
  std::size_t psol = 0;
  Outcome outcome = Outcome::cap_reached;
  std::uint64_t evaluations = 0;  // this iteration only
  std::vector<double> probs;      // PCFG used for the next iteration
};

struct ProbeOptions {
  int d = 6;
  /// guided runs the probe-rounded model, bee the real-valued probe model.
  Engine engine = Engine::guided;
  SearchOptions search;  // budget covers the whole loop
  std::ostream* log = nullptr;
};

struct ProbeResult {
  SearchResult result;  // counters summed over iterations
  std::vector<LearnIteration> iterations;
  std::vector<double> final_probs;
};

ProbeResult run_probe(const Pcfg& pcfg, const Task& task, const ProbeOptions& opts = {});

void write_learn_iteration(std::ostream& os, const LearnIteration& it, const Grammar& g);

}  // namespace beesynth
