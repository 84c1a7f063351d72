#pragma once

#include <chrono>

#include "beesynth/search.hpp"

namespace beesynth::detail {

/// Thrown inside an engine to unwind when a budget runs out.
struct BudgetExceeded {};

/// Counters, budget checks and the solution test shared by every engine.
class SearchContext {
 public:
  SearchContext(const Pcfg& pcfg, const Task& task, const SearchOptions& opts);

  const Grammar& grammar() const { return pcfg_.grammar(); }
  const Task& task() const { return task_; }
  const SearchOptions& options() const { return opts_; }
  SearchResult& result() { return result_; }

  void count_generation() {
    ++result_.generations;
    if (opts_.budget.max_generations && result_.generations > *opts_.budget.max_generations) {
      --result_.generations;
      throw BudgetExceeded{};
    }
    if ((result_.generations & 0x3ff) == 0) check_clock();
  }
  /// Counts an execution; throws once the evaluation cap or clock runs out.
  void count_evaluation() {
    if (opts_.budget.max_evaluations && result_.evaluations >= *opts_.budget.max_evaluations) throw BudgetExceeded{};
    ++result_.evaluations;
    if ((result_.evaluations & 0x3ff) == 0) check_clock();
  }
  void check_clock();

  bool is_solution(TypeTag t, const Signature& sig) const { return t == grammar().initial && sig == task_.outputs; }

  void solved(Program p, double cost);
  SearchResult finish(Outcome o);

 private:
  const Pcfg& pcfg_;
  const Task& task_;
  const SearchOptions& opts_;
  std::chrono::steady_clock::time_point start_;
  SearchResult result_;
};

/// Runs `body` and converts budget unwinding and allocation failure into
/// outcomes. `body` returns the outcome when it finishes normally.
template <class F>
SearchResult run_engine(SearchContext& ctx, F&& body) {
  Outcome o;
  try {
    ctx.check_clock();
    o = body();
  } catch (const BudgetExceeded&) {
    o = Outcome::timeout;
  } catch (const std::bad_alloc&) {
    o = Outcome::memory_exhausted;
  }
  return ctx.finish(o);
}

}  // namespace beesynth::detail
