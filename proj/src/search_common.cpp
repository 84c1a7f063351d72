#include "search_common.hpp"

#include <stdexcept>

namespace beesynth {

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::solved: return "solved";
    case Outcome::timeout: return "timeout";
    case Outcome::memory_exhausted: return "memory";
    case Outcome::exhausted: return "exhausted";
    case Outcome::cap_reached: return "cap";
  }
  return "?";
}

std::optional<Engine> parse_engine(std::string_view name) {
  if (name == "bus") return Engine::bus;
  if (name == "guided") return Engine::guided;
  if (name == "heap") return Engine::heap;
  if (name == "brute") return Engine::brute;
  if (name == "bee") return Engine::bee;
  return std::nullopt;
}

std::string_view engine_name(Engine e) {
  switch (e) {
    case Engine::bus: return "bus";
    case Engine::guided: return "guided";
    case Engine::heap: return "heap";
    case Engine::brute: return "brute";
    case Engine::bee: return "bee";
  }
  return "?";
}

SearchResult bus_synthesize(const Pcfg& pcfg, const Task& task, const SearchOptions& opts) {
  return cost_guided_synthesize(pcfg, task, CostModel(CostModelKind::size, pcfg), opts);
}

SearchResult synthesize(Engine engine, const Pcfg& pcfg, const Task& task, const CostModel& model,
                        const SearchOptions& opts) {
  switch (engine) {
    case Engine::bus: return bus_synthesize(pcfg, task, opts);
    case Engine::guided: return cost_guided_synthesize(pcfg, task, model, opts);
    case Engine::heap: return heap_search_synthesize(pcfg, task, model, opts);
    case Engine::brute: return brute_synthesize(pcfg, task, model, opts);
    case Engine::bee: return bee_synthesize(pcfg, task, model, opts);
  }
  throw std::logic_error("unknown engine");
}

namespace detail {

SearchContext::SearchContext(const Pcfg& pcfg, const Task& task, const SearchOptions& opts)
    : pcfg_(pcfg), task_(task), opts_(opts), start_(std::chrono::steady_clock::now()) {}

void SearchContext::check_clock() {
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start_;
  if (dt.count() >= opts_.budget.seconds) throw BudgetExceeded{};
}

void SearchContext::solved(Program p, double cost) {
  // Every returned program is re-checked by direct evaluation.
  if (!solves(p, task_)) throw std::logic_error("engine returned a program that does not solve the task: " + to_prefix(p));
  result_.solution = std::move(p);
  result_.solution_cost = cost;
}

SearchResult SearchContext::finish(Outcome o) {
  result_.outcome = o;
  result_.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  return std::move(result_);
}

}  // namespace detail
}  // namespace beesynth
