// Brute: best-first over single programs. Popping a node combines its program
// with the bank through every operation; surviving children become nodes.

#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "search_common.hpp"

namespace beesynth {

namespace {

using detail::SearchContext;

struct Node {
  double priority;
  std::uint64_t seq;
  std::size_t entry;  // index into Bank::all(); npos for the root
};
struct NodeLater {
  bool operator()(const Node& a, const Node& b) const {
    if (a.priority != b.priority) return a.priority > b.priority;
    return a.seq > b.seq;
  }
};

constexpr std::size_t kRoot = static_cast<std::size_t>(-1);

class Brute {
 public:
  Brute(SearchContext& ctx, const CostModel& model)
      : ctx_(ctx), g_(ctx.grammar()), model_(model), bank_(g_.types.size(), ctx.options().equivalence) {}

  Outcome run() {
    // Root: every terminal program.
    std::vector<Program> accepted;
    for (const auto& r : g_.rules) {
      if (!r.terminal()) continue;
      ctx_.count_generation();
      ctx_.count_evaluation();
      Signature sig = apply_rule(r, nullptr, ctx_.task());
      if (finish_child(r, nullptr, model_.rule_cost(r.id), std::move(sig), accepted, /*enqueue=*/false)) {
        return Outcome::solved;
      }
    }
    for (const auto& p : accepted) roots_.insert(p.get());
    queue_.push({0.0, seq_++, kRoot});

    while (!queue_.empty()) {
      ctx_.check_clock();
      Node n = queue_.top();
      queue_.pop();
      ++ctx_.result().states_expanded;
      if (expand(n)) return Outcome::solved;
    }
    return Outcome::exhausted;
  }

  std::size_t bank_size() const { return bank_.size(); }

 private:
  // Children are kept as (rule, bank positions per slot) until evaluated;
  // a node can have millions of them.
  struct Children {
    std::vector<RuleId> rule;
    std::vector<double> w;
    std::vector<std::size_t> offset;  // into slots
    std::vector<std::uint32_t> slots;
  };

  bool expand(const Node& n) {
    const ProgramNode* target = n.entry == kRoot ? nullptr : bank_.all()[n.entry].program.get();
    // Bank snapshot: programs accepted while handling this node are not
    // combined with it.
    std::vector<std::size_t> limit(g_.types.size());
    for (TypeTag t = 0; t < g_.types.size(); ++t) limit[t] = bank_.by_type(t).size();

    Children kids;
    for (const auto& r : g_.rules) {
      if (r.terminal()) continue;
      chosen_.assign(r.arity(), 0);
      combine(r, 0, false, target, limit, kids);
    }

    std::vector<Program> accepted;
    std::vector<const Signature*> sigs;
    for (std::size_t c = 0; c < kids.rule.size(); ++c) {
      const ProductionRule& r = g_.rules[kids.rule[c]];
      const std::uint32_t* slot = kids.slots.data() + kids.offset[c];
      sigs.resize(r.arity());
      for (std::size_t j = 0; j < r.arity(); ++j) sigs[j] = bank_.by_type(r.args[j])[slot[j]].sig;
      Signature sig = apply_rule(r, sigs.data(), ctx_.task());
      ctx_.count_evaluation();
      if (finish_child(r, slot, kids.w[c], std::move(sig), accepted, true)) return true;
    }
    if (auto* obs = ctx_.options().observer) obs->on_children(target ? bank_.all()[n.entry].program : nullptr, accepted);
    return false;
  }

  bool is_target(const ProgramNode* target, const BankEntry& e) const {
    return target ? e.program.get() == target : roots_.count(e.program.get()) > 0;
  }

  Program build(const ProductionRule& r, const std::uint32_t* slot) const {
    std::vector<Program> kids(r.arity());
    for (std::size_t j = 0; j < r.arity(); ++j) kids[j] = bank_.by_type(r.args[j])[slot[j]].program;
    return make_program_unchecked(r, std::move(kids));
  }

  // Enumerates argument tuples (rightmost slot fastest, bank insertion order)
  // that contain the node's program. For non-root nodes the program fills
  // exactly one slot unless self-combinations are enabled.
  void combine(const ProductionRule& r, std::size_t slot, bool used, const ProgramNode* target,
               const std::vector<std::size_t>& limit, Children& out) {
    const std::size_t k = r.arity();
    if (slot == k) {
      if (!used) return;
      double w = model_.rule_cost(r.id);
      for (std::size_t j = 0; j < k; ++j) w += bank_.by_type(r.args[j])[chosen_[j]].cost;
      ctx_.count_generation();
      if (auto* obs = ctx_.options().observer) obs->on_generated(build(r, chosen_.data()), w);
      out.rule.push_back(r.id);
      out.w.push_back(w);
      out.offset.push_back(out.slots.size());
      out.slots.insert(out.slots.end(), chosen_.begin(), chosen_.end());
      return;
    }
    const auto& entries = bank_.by_type(r.args[slot]);
    const bool last = slot + 1 == k;
    const bool exclusive = target && !ctx_.options().brute_self_combinations;
    if (last && !used && target) {
      // Only the node's own program can complete the tuple.
      if (target->rule->ret != r.args[slot]) return;
      const std::size_t i = position_.at(target);
      if (i >= limit[r.args[slot]]) return;
      chosen_[slot] = static_cast<std::uint32_t>(i);
      combine(r, slot + 1, true, target, limit, out);
      return;
    }
    for (std::size_t i = 0; i < limit[r.args[slot]]; ++i) {
      const BankEntry& e = entries[i];
      const bool hit = is_target(target, e);
      if (last && !used && !hit) continue;
      if (exclusive && used && hit) continue;
      chosen_[slot] = static_cast<std::uint32_t>(i);
      combine(r, slot + 1, used || hit, target, limit, out);
    }
  }

  bool finish_child(const ProductionRule& r, const std::uint32_t* slot, double w, Signature sig,
                    std::vector<Program>& accepted, bool enqueue) {
    SearchObserver* obs = ctx_.options().observer;
    const bool solution = ctx_.is_solution(r.ret, sig);
    const bool keep = !bank_.equivalent(r.ret, sig);
    if (!solution && !keep && !obs) return false;
    Program p = build(r, slot);
    if (obs) obs->on_evaluated(p, sig, w);
    if (solution) {
      ctx_.solved(p, w);
      return true;
    }
    if (!keep) return false;
    const double priority = model_.post_generation() ? model_.post_cost(w, ctx_.task(), sig) : w;
    position_.emplace(p.get(), bank_.by_type(r.ret).size());
    bank_.insert(p, priority, std::move(sig));
    accepted.push_back(p);
    if (enqueue) queue_.push({priority, seq_++, bank_.all().size() - 1});
    return false;
  }

  SearchContext& ctx_;
  const Grammar& g_;
  const CostModel& model_;
  Bank bank_;
  std::unordered_set<const ProgramNode*> roots_;
  std::unordered_map<const ProgramNode*, std::size_t> position_;  // index within Bank::by_type
  std::priority_queue<Node, std::vector<Node>, NodeLater> queue_;
  std::vector<std::uint32_t> chosen_;
  std::uint64_t seq_ = 0;
};

}  // namespace

SearchResult brute_synthesize(const Pcfg& pcfg, const Task& task, const CostModel& model, const SearchOptions& opts) {
  SearchContext ctx(pcfg, task, opts);
  Brute engine(ctx, model);
  auto res = detail::run_engine(ctx, [&] { return engine.run(); });
  res.bank_size = engine.bank_size();
  return res;
}

}  // namespace beesynth
