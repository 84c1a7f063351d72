// Heap Search: one min-heap per type, successor tables and structural
// duplicate suppression. Evaluates programs in nondecreasing cost.

#include <functional>
#include <limits>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "search_common.hpp"

namespace beesynth {

namespace {

using detail::SearchContext;

struct HeapItem {
  double w;
  std::uint64_t seq;
  Program p;
};
struct HeapLater {
  bool operator()(const HeapItem& a, const HeapItem& b) const {
    if (a.w != b.w) return a.w > b.w;
    return a.seq > b.seq;
  }
};

class HeapSearch {
 public:
  HeapSearch(SearchContext& ctx, const CostModel& model)
      : ctx_(ctx), g_(ctx.grammar()), model_(model), types_(g_.types.size()) {}

  Outcome run() {
    initialize();
    Program p;
    while (true) {
      ctx_.check_clock();
      Program next = query(p.get(), g_.initial);
      if (!next) return Outcome::exhausted;
      ctx_.count_evaluation();
      const Signature& sig = signature(next);
      const double w = cost_.at(next.get());
      if (auto* obs = ctx_.options().observer) obs->on_evaluated(next, sig, w);
      if (ctx_.is_solution(g_.initial, sig)) {
        ctx_.solved(next, w);
        return Outcome::solved;
      }
      p = std::move(next);
    }
  }

 private:
  struct PerType {
    std::priority_queue<HeapItem, std::vector<HeapItem>, HeapLater> heap;
    std::unordered_map<const ProgramNode*, Program> succ;  // key null stands for "no program yet"
    std::unordered_set<Program, ProgramHash, ProgramEqual> seen;
    const ProgramNode* last = nullptr;  // most recently popped
  };

  bool push(Program p) {
    PerType& pt = types_[p->rule->ret];
    if (!pt.seen.insert(p).second) return false;
    ctx_.count_generation();
    const double w = cost_of(p);
    if (auto* obs = ctx_.options().observer) obs->on_generated(p, w);
    pt.heap.push({w, seq_++, std::move(p)});
    return true;
  }

  double cost_of(const Program& p) {
    auto it = cost_.find(p.get());
    if (it != cost_.end()) return it->second;
    double w = model_.rule_cost(p->rule->id);
    for (const auto& c : p->children) w += cost_of(c);
    cost_.emplace(p.get(), w);
    return w;
  }

  // Every terminal, plus each operation applied to the cheapest program of
  // each argument type. The cheapest programs come from a fixed point over
  // the rules (costs are positive, so it settles). Children must be the very
  // objects the heaps hand out, so the cheapest programs are pushed first and
  // reused as children.
  void initialize() {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> best_w(g_.types.size(), inf);
    std::vector<const ProductionRule*> best_rule(g_.types.size(), nullptr);
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& r : g_.rules) {
        double w = model_.rule_cost(r.id);
        for (TypeTag a : r.args) w += best_w[a];
        if (w < best_w[r.ret]) {
          best_w[r.ret] = w;
          best_rule[r.ret] = &r;
          changed = true;
        }
      }
    }
    std::vector<Program> best(g_.types.size());
    std::function<Program(TypeTag)> cheapest = [&](TypeTag t) -> Program {
      if (best[t] || !best_rule[t]) return best[t];
      std::vector<Program> kids;
      for (TypeTag a : best_rule[t]->args) kids.push_back(cheapest(a));
      best[t] = make_program_unchecked(*best_rule[t], std::move(kids));
      return best[t];
    };
    for (TypeTag t = 0; t < g_.types.size(); ++t) {
      if (Program p = cheapest(t)) push(p);
    }
    for (const auto& r : g_.rules) {
      std::vector<Program> kids;
      for (TypeTag a : r.args) {
        if (!best[a]) break;
        kids.push_back(best[a]);
      }
      if (kids.size() == r.arity()) push(make_program_unchecked(r, std::move(kids)));
    }
  }

  // Successor of p among programs of type t. Pops as many programs as it
  // takes for p's successor to be known, chaining each pop to the previous.
  Program query(const ProgramNode* p, TypeTag t) {
    PerType& pt = types_[t];
    while (true) {
      auto it = pt.succ.find(p);
      if (it != pt.succ.end()) return it->second;
      if (pt.heap.empty()) return nullptr;
      Program q = pt.heap.top().p;
      pt.heap.pop();
      pt.succ.emplace(pt.last, q);
      pt.last = q.get();
      expand(q);
    }
  }

  void expand(const Program& q) {
    const ProductionRule& r = *q->rule;
    std::vector<Program> accepted;
    for (std::size_t i = 0; i < r.arity(); ++i) {
      Program y = query(q->children[i].get(), r.args[i]);
      if (!y) continue;
      std::vector<Program> kids = q->children;
      kids[i] = std::move(y);
      Program child = make_program_unchecked(r, std::move(kids));
      if (push(child)) accepted.push_back(std::move(child));
    }
    if (auto* obs = ctx_.options().observer; obs && r.arity() > 0) obs->on_children(q, accepted);
  }

  const Signature& signature(const Program& p) {
    auto it = sigs_.find(p.get());
    if (it != sigs_.end()) return it->second;
    std::vector<const Signature*> kids;
    kids.reserve(p->children.size());
    for (const auto& c : p->children) kids.push_back(&signature(c));
    Signature s = apply_rule(*p->rule, kids.data(), ctx_.task());
    return sigs_.emplace(p.get(), std::move(s)).first->second;
  }

  SearchContext& ctx_;
  const Grammar& g_;
  const CostModel& model_;
  std::vector<PerType> types_;
  std::unordered_map<const ProgramNode*, double> cost_;
  std::unordered_map<const ProgramNode*, Signature> sigs_;
  std::uint64_t seq_ = 0;
};

}  // namespace

SearchResult heap_search_synthesize(const Pcfg& pcfg, const Task& task, const CostModel& model, const SearchOptions& opts) {
  if (model.post_generation()) throw ConfigError("Heap Search supports pre-generation cost models only");
  SearchContext ctx(pcfg, task, opts);
  HeapSearch engine(ctx, model);
  return detail::run_engine(ctx, [&] { return engine.run(); });
}

}  // namespace beesynth
