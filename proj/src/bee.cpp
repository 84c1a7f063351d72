// Bee Search: best-first enumeration driven by a priority queue over
// cost-tuple states. C holds every distinct banked cost in ascending order.

#include "beesynth/bee.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <unordered_set>

#include "search_common.hpp"

namespace beesynth {

double state_cost(double rule_cost, std::span<const std::uint32_t> indices, std::span<const double> costs) {
  double w = rule_cost;
  for (auto i : indices) {
    if (i == 0 || i > costs.size()) return std::numeric_limits<double>::infinity();
    w += costs[i - 1];
  }
  return w;
}

std::vector<CostTupleState> expand_cost_tuple(const CostTupleState& n, double rule_cost, std::span<const double> costs) {
  std::vector<CostTupleState> out;
  out.reserve(n.indices.size());
  for (std::size_t j = 0; j < n.indices.size(); ++j) {
    CostTupleState c{n.rule, n.indices, 0.0};
    ++c.indices[j];
    c.w = state_cost(rule_cost, c.indices, costs);
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

using detail::SearchContext;

struct TupleHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
    std::size_t h = v.size();
    for (auto x : v) h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }
};

// Ordered by quantized cost so equal sums tie exactly, then FIFO.
struct QItem {
  double w;
  CostKey key;
  std::uint64_t seq;
  std::uint32_t state;
};
struct QLater {
  bool operator()(const QItem& a, const QItem& b) const {
    if (a.key != b.key) return a.key > b.key;
    return a.seq > b.seq;
  }
};

CostKey queue_key(double w) {
  return w == std::numeric_limits<double>::infinity() ? std::numeric_limits<CostKey>::max() : cost_key(w);
}

class Bee {
 public:
  Bee(SearchContext& ctx, const CostModel& model)
      : ctx_(ctx),
        g_(ctx.grammar()),
        model_(model),
        post_(model.post_generation()),
        bank_(g_.types.size(), ctx.options().equivalence),
        seen_(g_.rules.size()) {}

  Outcome run() {
    if (!initialize()) return Outcome::exhausted;
    while (!queue_.empty()) {
      ctx_.check_clock();
      std::pop_heap(queue_.begin(), queue_.end(), QLater{});
      const QItem item = queue_.back();
      queue_.pop_back();
      const std::uint32_t sid = item.state;
      release(max_index(states_[sid]));
      const double w = item.w;
      if (w == std::numeric_limits<double>::infinity()) return Outcome::exhausted;
      if (ctx_.options().cost_cap && w > *ctx_.options().cost_cap + 1e-9) return Outcome::cap_reached;

      begin_row(w);
      const bool done = states_[sid].indices.empty() ? terminal(sid, w) : nonterminal(sid, w);
      if (done) return Outcome::solved;
    }
    return Outcome::exhausted;
  }

  std::vector<double> cost_list() const { return c_vals_; }
  std::size_t bank_size() const { return bank_.size(); }

 private:
  bool initialize() {
    double cheapest = std::numeric_limits<double>::infinity();
    for (const auto& r : g_.rules) {
      if (r.terminal()) cheapest = std::min(cheapest, model_.rule_cost(r.id));
    }
    if (cheapest == std::numeric_limits<double>::infinity()) return false;
    for (const auto& r : g_.rules) {
      if (r.terminal()) continue;
      std::vector<std::uint32_t> ones(r.arity(), 1);
      seen_[r.id].insert(ones);
      push_state({r.id, std::move(ones), 0.0});
    }
    for (const auto& r : g_.rules) {
      if (r.terminal()) push_state({r.id, {}, 0.0});
    }
    return true;
  }

  static std::uint32_t max_index(const CostTupleState& s) {
    std::uint32_t m = 0;
    for (auto i : s.indices) m = std::max(m, i);
    return m;
  }

  // Pre-generation: a state indexing past the end of C waits until C grows
  // that far. Its cost exceeds everything popped so far, so nothing is lost.
  void push_state(CostTupleState s) {
    const std::uint32_t m = max_index(s);
    const auto id = static_cast<std::uint32_t>(states_.size());
    states_.push_back(std::move(s));
    if (!post_ && m > c_vals_.size()) {
      if (m >= pending_.size()) pending_.resize(m + 1);
      pending_[m].push_back(id);
      return;
    }
    enqueue(id);
  }

  void enqueue(std::uint32_t id) {
    CostTupleState& s = states_[id];
    s.w = state_cost(model_.rule_cost(s.rule), s.indices, c_vals_);
    const std::uint32_t m = max_index(s);
    if (m >= index_count_.size()) index_count_.resize(m + 1, 0);
    ++index_count_[m];
    i_max_ = std::max(i_max_, m);
    queue_.push_back({s.w, queue_key(s.w), seq_++, id});
    std::push_heap(queue_.begin(), queue_.end(), QLater{});
  }

  void release(std::uint32_t m) {
    --index_count_[m];
    while (i_max_ > 0 && index_count_[i_max_] == 0) --i_max_;
  }

  // Pre-generation: costs arrive in nondecreasing order.
  void append_cost(double w) {
    const CostKey k = cost_key(w);
    if (!c_keys_.empty() && c_keys_.back() == k) return;
    if (!c_keys_.empty() && c_keys_.back() > k) {
      throw std::logic_error("cost list would become unsorted; the cost model is not monotone");
    }
    c_keys_.push_back(k);
    c_vals_.push_back(w);
    const std::size_t n = c_vals_.size();
    if (n < pending_.size()) {
      const std::vector<std::uint32_t> ready = std::move(pending_[n]);
      pending_[n].clear();
      for (auto id : ready) enqueue(id);
    }
  }

  // Post-generation: sorted insert, then restore the heap if a queued state
  // refers to an index at or past the insertion point.
  void insert_cost(double w) {
    const CostKey k = cost_key(w);
    auto it = std::lower_bound(c_keys_.begin(), c_keys_.end(), k);
    if (it != c_keys_.end() && *it == k) return;
    const auto pos = static_cast<std::size_t>(it - c_keys_.begin());
    c_keys_.insert(it, k);
    c_vals_.insert(c_vals_.begin() + static_cast<std::ptrdiff_t>(pos), w);
    if (pos + 1 <= i_max_) {
      for (auto& q : queue_) {
        auto& s = states_[q.state];
        if (s.indices.empty()) continue;
        s.w = state_cost(model_.rule_cost(s.rule), s.indices, c_vals_);
        q.w = s.w;
        q.key = queue_key(s.w);
      }
      std::make_heap(queue_.begin(), queue_.end(), QLater{});
      ++heapifies_;
    }
  }

  bool terminal(std::uint32_t sid, double w) {
    const ProductionRule& r = g_.rules[states_[sid].rule];
    ctx_.count_generation();
    ctx_.count_evaluation();
    ++row_generated_;
    Signature sig = apply_rule(r, nullptr, ctx_.task());
    Program p = make_program_unchecked(r, {});
    if (auto* obs = ctx_.options().observer) {
      obs->on_generated(p, w);
      obs->on_evaluated(p, sig, w);
    }
    if (ctx_.is_solution(r.ret, sig)) {
      ctx_.solved(std::move(p), w);
      return true;
    }
    if (bank_.equivalent(r.ret, sig)) return false;
    if (post_) {
      const double wp = model_.post_cost(w, ctx_.task(), sig);
      insert_cost(wp);
      bank_.insert(std::move(p), wp, std::move(sig));
    } else {
      append_cost(w);
      bank_.insert(std::move(p), w, std::move(sig));
    }
    return false;
  }

  bool nonterminal(std::uint32_t sid, double w) {
    ++ctx_.result().states_expanded;
    const RuleId rid = states_[sid].rule;
    const ProductionRule& r = g_.rules[rid];
    const std::vector<std::uint32_t> idx = states_[sid].indices;
    for (auto i : idx) {
      if (i < 1 || i > c_vals_.size()) throw std::logic_error("cost-tuple index outside [1, |C|] at expansion");
    }

    for (std::size_t j = 0; j < idx.size(); ++j) {
      std::vector<std::uint32_t> child = idx;
      ++child[j];
      if (seen_[rid].insert(child).second) push_state({rid, std::move(child), 0.0});
    }

    const std::size_t k = r.arity();
    std::vector<const std::vector<BankEntry>*> buckets(k);
    std::vector<std::size_t> sizes(k);
    for (std::size_t j = 0; j < k; ++j) {
      buckets[j] = &bank_.programs_at(c_keys_[idx[j] - 1], r.args[j]);
      sizes[j] = buckets[j]->size();
      if (sizes[j] == 0) return false;
    }

    struct Pending {
      Program p;
      Signature sig;
    };
    std::deque<Pending> batch;  // stable addresses for batch_sigs
    std::unordered_set<const Signature*, SigHash, SigEq> batch_sigs;
    SearchObserver* obs = ctx_.options().observer;

    std::vector<std::size_t> pos(k, 0);
    std::vector<const Signature*> sigs(k);
    while (true) {
      for (std::size_t j = 0; j < k; ++j) sigs[j] = (*buckets[j])[pos[j]].sig;
      ctx_.count_generation();
      ctx_.count_evaluation();
      ++row_generated_;
      Signature sig = apply_rule(r, sigs.data(), ctx_.task());
      const bool solution = ctx_.is_solution(r.ret, sig);
      bool keep = !bank_.equivalent(r.ret, sig);
      if (keep && post_ && bank_.equivalence() && batch_sigs.count(&sig)) keep = false;
      if (solution || keep || obs) {
        std::vector<Program> kids(k);
        for (std::size_t j = 0; j < k; ++j) kids[j] = (*buckets[j])[pos[j]].program;
        Program p = make_program_unchecked(r, std::move(kids));
        if (obs) {
          obs->on_generated(p, w);
          obs->on_evaluated(p, sig, w);
        }
        if (solution) {
          ctx_.solved(std::move(p), w);
          return true;
        }
        if (keep) {
          if (post_) {
            batch.push_back({std::move(p), std::move(sig)});
            if (bank_.equivalence()) batch_sigs.insert(&batch.back().sig);
          } else {
            append_cost(w);
            bank_.insert(std::move(p), w, std::move(sig));
          }
        }
      }
      // odometer, rightmost slot fastest
      std::size_t j = k;
      while (j > 0) {
        --j;
        if (++pos[j] < sizes[j]) break;
        pos[j] = 0;
        if (j == 0) {
          j = k + 1;
          break;
        }
      }
      if (j == k + 1) break;
    }

    if (post_ && !batch.empty()) {
      std::vector<const Signature*> ptrs;
      ptrs.reserve(batch.size());
      for (const auto& b : batch) ptrs.push_back(&b.sig);
      std::vector<double> probs(batch.size());
      model_.oracle()->probabilities(ctx_.task(), ptrs, probs);
      batch_sigs.clear();
      for (std::size_t i = 0; i < batch.size(); ++i) {
        const double wp = model_.post_cost(w, probs[i]);
        insert_cost(wp);
        bank_.insert(std::move(batch[i].p), wp, std::move(batch[i].sig));
      }
    }
    return false;
  }

  struct SigHash {
    std::size_t operator()(const Signature* s) const noexcept { return SignatureHash{}(*s); }
  };
  struct SigEq {
    bool operator()(const Signature* a, const Signature* b) const noexcept { return *a == *b; }
  };

  void begin_row(double w) {
    if (!ctx_.options().trace) return;
    const CostKey k = cost_key(w);
    if (row_open_ && k == row_key_) return;
    flush_row();
    row_open_ = true;
    row_key_ = k;
    row_cost_ = w;
    row_generated_ = 0;
  }
  void flush_row() {
    if (!row_open_) return;
    ctx_.result().trace.push_back(
        {static_cast<std::uint64_t>(ctx_.result().trace.size() + 1), row_cost_, row_generated_, bank_.size()});
    row_open_ = false;
  }

 public:
  void finish_trace() {
    if (ctx_.options().trace) flush_row();
  }

 private:
  SearchContext& ctx_;
  const Grammar& g_;
  const CostModel& model_;
  const bool post_;
  Bank bank_;
  std::vector<std::unordered_set<std::vector<std::uint32_t>, TupleHash>> seen_;
  std::vector<CostTupleState> states_;
  std::vector<QItem> queue_;
  std::vector<std::uint64_t> index_count_;
  std::uint32_t i_max_ = 0;
  std::vector<std::vector<std::uint32_t>> pending_;  // by max index, pre-generation only
  std::uint64_t seq_ = 0;
  std::vector<CostKey> c_keys_;
  std::vector<double> c_vals_;
  std::uint64_t heapifies_ = 0;

  bool row_open_ = false;
  CostKey row_key_ = 0;
  double row_cost_ = 0.0;
  std::uint64_t row_generated_ = 0;
};

}  // namespace

SearchResult bee_synthesize(const Pcfg& pcfg, const Task& task, const CostModel& model, const SearchOptions& opts) {
  SearchContext ctx(pcfg, task, opts);
  Bee engine(ctx, model);
  auto res = detail::run_engine(ctx, [&] {
    Outcome o = engine.run();
    engine.finish_trace();
    return o;
  });
  res.cost_list = engine.cost_list();
  res.bank_size = engine.bank_size();
  return res;
}

}  // namespace beesynth
