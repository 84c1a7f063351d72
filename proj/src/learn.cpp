#include "beesynth/learn.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

namespace beesynth {

std::vector<PartialSolution> select_partial_solutions(const std::vector<PartialSolution>& candidates,
                                                      PartialHistory& history) {
  std::map<std::vector<bool>, const PartialSolution*> best;
  for (const auto& c : candidates) {
    auto [it, fresh] = best.try_emplace(c.solved_subset, &c);
    if (fresh) continue;
    const PartialSolution* b = it->second;
    if (c.cost_at_discovery < b->cost_at_discovery ||
        (c.cost_at_discovery == b->cost_at_discovery && c.order < b->order)) {
      it->second = &c;
    }
  }
  std::vector<PartialSolution> out;
  for (const auto& [subset, c] : best) {
    PartialKey key{subset, to_prefix(c->program)};
    if (history.count(key)) continue;
    out.push_back(*c);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.order < b.order; });
  for (const auto& p : out) history.emplace(p.solved_subset, to_prefix(p.program));
  return out;
}

std::vector<double> fit_scores(const std::vector<PartialSolution>& psol, const Grammar& g, std::size_t examples) {
  std::vector<double> fit(g.rules.size(), 0.0);
  for (const auto& p : psol) {
    const auto solved = static_cast<double>(std::count(p.solved_subset.begin(), p.solved_subset.end(), true));
    const double frac = solved / static_cast<double>(examples);
    for (RuleId r : rule_trace(p.program)) fit[r] = std::max(fit[r], frac);
  }
  return fit;
}

Pcfg update_pcfg(const std::vector<PartialSolution>& psol, const Pcfg& uniform_pcfg, const Task& task) {
  const Grammar& g = uniform_pcfg.grammar();
  const auto fit = fit_scores(psol, g, task.examples());
  std::vector<double> probs(g.rules.size(), 0.0);
  for (const auto& rules : g.by_type) {
    double z = 0.0;
    for (RuleId r : rules) {
      probs[r] = std::pow(uniform_pcfg.prob(r), 1.0 - fit[r]);
      z += probs[r];
    }
    for (RuleId r : rules) probs[r] /= z;
  }
  return Pcfg(uniform_pcfg.grammar_ptr(), std::move(probs));
}

namespace {

class PartialCollector final : public SearchObserver {
 public:
  PartialCollector(const Task& task, TypeTag initial, std::uint64_t iteration)
      : task_(task), initial_(initial), iteration_(iteration) {}

  void on_evaluated(const Program& p, const Signature& sig, double cost) override {
    if (p->rule->ret != initial_) return;
    std::vector<bool> subset(sig.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < sig.size(); ++i) {
      subset[i] = sig[i] == task_.outputs[i];
      hits += subset[i];
    }
    ++seen_;
    if (hits == 0 || hits == sig.size()) return;
    // Only the first cheapest per subset can survive selection.
    const long c = std::lround(cost);
    auto it = best_.find(subset);
    if (it != best_.end() && it->second.cost_at_discovery <= c) return;
    best_[subset] = PartialSolution{p, subset, c, iteration_, seen_};
  }

  std::vector<PartialSolution> candidates() const {
    std::vector<PartialSolution> out;
    for (const auto& [k, v] : best_) out.push_back(v);
    return out;
  }

 private:
  const Task& task_;
  TypeTag initial_;
  std::uint64_t iteration_;
  std::uint64_t seen_ = 0;
  std::map<std::vector<bool>, PartialSolution> best_;
};

}  // namespace

void write_learn_iteration(std::ostream& os, const LearnIteration& it, const Grammar& g) {
  os << "iteration " << it.iteration << " lim " << it.lim << " psol " << it.psol << " outcome " << outcome_name(it.outcome)
     << " evaluations " << it.evaluations << "\n";
  for (const auto& r : g.rules) os << "  " << r.op << " " << it.probs[r.id] << "\n";
}

ProbeResult run_probe(const Pcfg& pcfg, const Task& task, const ProbeOptions& opts) {
  if (opts.d < 1) throw ConfigError("probe restart constant d must be at least 1");
  if (opts.engine != Engine::guided && opts.engine != Engine::bee) {
    throw ConfigError("probe learning runs with the guided or bee engine");
  }
  const auto start = std::chrono::steady_clock::now();
  const Pcfg uni = uniform(pcfg.grammar_ptr());
  const CostModelKind kind = opts.engine == Engine::guided ? CostModelKind::probe_rounded : CostModelKind::probe;

  ProbeResult out;
  SearchResult& total = out.result;
  PartialHistory history;
  Pcfg current = pcfg;
  double l = max_rule_cost(current);
  double lim = l * opts.d;

  for (std::uint64_t iter = 1;; ++iter) {
    SearchOptions so = opts.search;
    const double used = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    so.budget.seconds = std::max(0.0, opts.search.budget.seconds - used);
    if (opts.search.budget.max_evaluations) {
      so.budget.max_evaluations = *opts.search.budget.max_evaluations - std::min(*opts.search.budget.max_evaluations, total.evaluations);
    }
    if (opts.search.budget.max_generations) {
      so.budget.max_generations = *opts.search.budget.max_generations - std::min(*opts.search.budget.max_generations, total.generations);
    }
    so.cost_cap = opts.engine == Engine::guided ? std::ceil(lim - 1e-9) : lim;
    PartialCollector collector(task, pcfg.grammar().initial, iter);
    so.observer = &collector;

    const CostModel model(kind, current);
    SearchResult r = synthesize(opts.engine, current, task, model, so);
    total.evaluations += r.evaluations;
    total.generations += r.generations;
    total.states_expanded += r.states_expanded;

    LearnIteration li;
    li.iteration = iter;
    li.lim = lim;
    li.outcome = r.outcome;
    li.evaluations = r.evaluations;

    const bool finished = r.outcome != Outcome::cap_reached;
    if (finished) {
      total.outcome = r.outcome;
      total.solution = r.solution;
      total.solution_cost = r.solution_cost;
      total.trace = std::move(r.trace);
      total.cost_list = std::move(r.cost_list);
      total.bank_size = r.bank_size;
      li.probs = current.probs();
      if (opts.log) write_learn_iteration(*opts.log, li, current.grammar());
      out.iterations.push_back(std::move(li));
      break;
    }

    auto psol = select_partial_solutions(collector.candidates(), history);
    li.psol = psol.size();
    if (psol.empty()) {
      lim += l * opts.d;
    } else {
      current = update_pcfg(psol, uni, task);
      l = max_rule_cost(current);
      lim = l * opts.d;
    }
    li.probs = current.probs();
    if (opts.log) write_learn_iteration(*opts.log, li, current.grammar());
    out.iterations.push_back(std::move(li));
  }
  total.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.final_probs = current.probs();
  return out;
}

}  // namespace beesynth
