#include "beesynth/bank.hpp"

#include <cmath>

namespace beesynth {

CostKey cost_key(double cost) { return std::llround(cost * 1e9); }
double key_cost(CostKey key) { return static_cast<double>(key) / 1e9; }

Bank::Bank(std::size_t types, bool equivalence) : equivalence_(equivalence), order_(types), seen_(types) {}

bool Bank::equivalent(TypeTag t, const Signature& sig) const {
  return equivalence_ && seen_[t].count(&sig) > 0;
}

bool Bank::insert(Program p, double cost, Signature sig) {
  const TypeTag t = p->rule->ret;
  if (equivalence_ && seen_[t].count(&sig)) {
    ++rejected_;
    return false;
  }
  signatures_.push_back(std::move(sig));
  const Signature* stored = &signatures_.back();
  if (equivalence_) seen_[t].insert(stored);
  BankEntry e{std::move(p), stored, cost};
  auto& bucket = by_cost_[cost_key(cost)];
  if (bucket.empty()) bucket.resize(order_.size());
  bucket[t].push_back(e);
  order_[t].push_back(e);
  all_.push_back(std::move(e));
  return true;
}

const std::vector<BankEntry>& Bank::programs_at(CostKey key, TypeTag t) const {
  static const std::vector<BankEntry> empty;
  auto it = by_cost_.find(key);
  if (it == by_cost_.end()) return empty;
  return it->second[t];
}

std::vector<CostKey> Bank::keys() const {
  std::vector<CostKey> out;
  out.reserve(by_cost_.size());
  for (const auto& [k, v] : by_cost_) out.push_back(k);
  return out;
}

std::size_t Bank::distinct_signatures() const {
  std::size_t n = 0;
  for (const auto& s : seen_) n += s.size();
  return n;
}

void Bank::dump(std::ostream& os, const Grammar& g) const {
  for (const auto& [k, per_type] : by_cost_) {
    for (std::size_t t = 0; t < per_type.size(); ++t) {
      for (const auto& e : per_type[t]) os << k << ' ' << g.types[t].name << ' ' << to_prefix(e.program) << '\n';
    }
  }
}

}  // namespace beesynth
