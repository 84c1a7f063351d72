// Level-based cost-guided bottom-up enumeration. With the `size` model this
// is plain size-ordered BUS.

#include <algorithm>
#include <cmath>

#include "search_common.hpp"

namespace beesynth {

namespace {

using detail::SearchContext;

constexpr CostKey kUnit = 1'000'000'000;

class Guided {
 public:
  Guided(SearchContext& ctx, const CostModel& model)
      : ctx_(ctx), g_(ctx.grammar()), model_(model), bank_(g_.types.size(), ctx.options().equivalence) {
    for (RuleId r = 0; r < g_.rules.size(); ++r) {
      const double c = model_.rule_cost(r);
      rule_cost_.push_back(std::llround(c));
      order_.push_back(r);
    }
    if (reverse()) std::reverse(order_.begin(), order_.end());
  }

  Outcome run() {
    long max_terminal = 0, max_op = 0;
    for (const auto& r : g_.rules) {
      long& m = r.terminal() ? max_terminal : max_op;
      m = std::max(m, rule_cost_[r.id]);
    }
    const long arity = static_cast<long>(g_.max_arity());

    for (long c = 1;; ++c) {
      if (ctx_.options().cost_cap && static_cast<double>(c) > *ctx_.options().cost_cap) return Outcome::cap_reached;
      const long top = bank_.buckets().empty() ? 0 : bank_.buckets().rbegin()->first / kUnit;
      if (c > max_terminal && c > max_op + arity * top) return Outcome::exhausted;
      ctx_.check_clock();
      const std::uint64_t before = ctx_.result().generations;
      for (RuleId r : order_) {
        if (level(g_.rules[r], c)) return Outcome::solved;
      }
      if (ctx_.options().trace && ctx_.result().generations > before) {
        ctx_.result().trace.push_back({static_cast<std::uint64_t>(ctx_.result().trace.size() + 1), static_cast<double>(c),
                                       ctx_.result().generations - before, bank_.size()});
      }
    }
  }

  std::size_t bank_size() const { return bank_.size(); }

 private:
  bool reverse() const { return ctx_.options().tie_order == TieOrder::reverse; }

  // Generates every program of rule r whose cost is exactly c.
  bool level(const ProductionRule& r, long c) {
    const long rc = rule_cost_[r.id];
    if (r.terminal()) {
      if (rc != c) return false;
      return emit(r, {}, {}, c);
    }
    if (rc >= c) return false;
    chosen_.assign(r.arity(), nullptr);
    return fill(r, 0, c - rc, c);
  }

  bool fill(const ProductionRule& r, std::size_t slot, long remaining, long c) {
    const std::size_t k = r.arity();
    const TypeTag t = r.args[slot];
    if (slot + 1 == k) {
      if (remaining < 1) return false;
      return walk_bucket(r, slot, bank_.programs_at(remaining * kUnit, t), 0, c);
    }
    const long reserve = static_cast<long>(k - slot - 1);  // every later slot costs at least 1
    const auto& buckets = bank_.buckets();
    auto visit = [&](CostKey key, const std::vector<std::vector<BankEntry>>& per_type) -> bool {
      const long kc = key / kUnit;
      if (kc < 1 || kc > remaining - reserve || per_type[t].empty()) return false;
      return walk_bucket(r, slot, per_type[t], remaining - kc, c);
    };
    if (reverse()) {
      // Snapshot first: this level's bucket may be created mid-walk, which
      // would shift a live reverse iterator.
      std::vector<std::pair<CostKey, const std::vector<std::vector<BankEntry>>*>> keys;
      for (const auto& [key, per_type] : buckets) {
        if (key / kUnit > remaining - reserve) break;
        keys.emplace_back(key, &per_type);
      }
      for (auto it = keys.rbegin(); it != keys.rend(); ++it) {
        if (visit(it->first, *it->second)) return true;
      }
    } else {
      for (const auto& [key, per_type] : buckets) {
        if (key / kUnit > remaining - reserve) break;
        if (visit(key, per_type)) return true;
      }
    }
    return false;
  }

  bool walk_bucket(const ProductionRule& r, std::size_t slot, const std::vector<BankEntry>& bucket, long remaining, long c) {
    const std::size_t n = bucket.size();
    const bool last = slot + 1 == r.arity();
    for (std::size_t i = 0; i < n; ++i) {
      const BankEntry& e = bucket[reverse() ? n - 1 - i : i];
      chosen_[slot] = &e;
      if (last) {
        if (emit_from_chosen(r, c)) return true;
      } else if (fill(r, slot + 1, remaining, c)) {
        return true;
      }
    }
    return false;
  }

  bool emit_from_chosen(const ProductionRule& r, long c) {
    const std::size_t k = r.arity();
    sig_ptrs_.resize(k);
    for (std::size_t i = 0; i < k; ++i) sig_ptrs_[i] = chosen_[i]->sig;
    return emit(r, chosen_, sig_ptrs_, c);
  }

  bool emit(const ProductionRule& r, const std::vector<const BankEntry*>& kids, const std::vector<const Signature*>& sigs,
            long c) {
    ctx_.count_generation();
    ctx_.count_evaluation();
    Signature sig = apply_rule(r, sigs.data(), ctx_.task());
    const bool solution = ctx_.is_solution(r.ret, sig);
    const bool keep = !bank_.equivalent(r.ret, sig);
    SearchObserver* obs = ctx_.options().observer;
    if (!solution && !keep && !obs) return false;

    std::vector<Program> children;
    children.reserve(kids.size());
    for (const auto* e : kids) children.push_back(e->program);
    Program p = make_program_unchecked(r, std::move(children));
    const double w = static_cast<double>(c);
    if (obs) {
      obs->on_generated(p, w);
      obs->on_evaluated(p, sig, w);
    }
    if (solution) {
      ctx_.solved(std::move(p), w);
      return true;
    }
    if (keep) {
      double banked = w;
      if (model_.post_generation()) banked = std::round(model_.post_cost(w, ctx_.task(), sig));
      bank_.insert(std::move(p), banked, std::move(sig));
    }
    return false;
  }

  SearchContext& ctx_;
  const Grammar& g_;
  const CostModel& model_;
  Bank bank_;
  std::vector<long> rule_cost_;
  std::vector<RuleId> order_;
  std::vector<const BankEntry*> chosen_;
  std::vector<const Signature*> sig_ptrs_;
};

}  // namespace

SearchResult cost_guided_synthesize(const Pcfg& pcfg, const Task& task, const CostModel& model, const SearchOptions& opts) {
  if (!model.integral()) {
    throw ConfigError("the level-based enumerator needs an integer cost model (size, probe-rounded or bustle-binned), got " +
                      std::string(cost_model_name(model.kind())));
  }
  SearchContext ctx(pcfg, task, opts);
  Guided engine(ctx, model);
  auto res = detail::run_engine(ctx, [&] { return engine.run(); });
  res.bank_size = engine.bank_size();
  return res;
}

}  // namespace beesynth
