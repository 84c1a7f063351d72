#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <ostream>
#include <unordered_set>
#include <vector>

#include "beesynth/program.hpp"

namespace beesynth {

/// Cost quantized to 1e-9 units.
using CostKey = std::int64_t;

CostKey cost_key(double cost);
double key_cost(CostKey key);

struct BankEntry {
  Program program;
  const Signature* sig = nullptr;  // owned by the bank
  double cost = 0.0;
};

/// Programs indexed by (cost key, return type), plus the signature set used
/// for observational equivalence. Insertion order is kept within a bucket and
/// per type.
class Bank {
 public:
  explicit Bank(std::size_t types, bool equivalence = true);

  /// Stores p unless equivalence is on and a program of the same type with
  /// the same signature is already stored. Returns whether p was stored.
  bool insert(Program p, double cost, Signature sig);

  /// True when equivalence is on and `sig` is already taken for type t.
  bool equivalent(TypeTag t, const Signature& sig) const;

  const std::vector<BankEntry>& programs_at(CostKey key, TypeTag t) const;
  /// Every stored program of type t, in insertion order.
  const std::vector<BankEntry>& by_type(TypeTag t) const { return order_[t]; }
  /// Every stored program of every type, in insertion order.
  const std::vector<BankEntry>& all() const { return all_; }

  std::vector<CostKey> keys() const;
  const std::map<CostKey, std::vector<std::vector<BankEntry>>>& buckets() const { return by_cost_; }

  void disable_equivalence() { equivalence_ = false; }
  bool equivalence() const { return equivalence_; }

  std::size_t size() const { return all_.size(); }
  std::size_t rejected() const { return rejected_; }
  std::size_t distinct_signatures() const;
  std::size_t types() const { return order_.size(); }

  void dump(std::ostream& os, const Grammar& g) const;

 private:
  struct SigPtrHash {
    std::size_t operator()(const Signature* s) const noexcept { return SignatureHash{}(*s); }
  };
  struct SigPtrEq {
    bool operator()(const Signature* a, const Signature* b) const noexcept { return *a == *b; }
  };

  bool equivalence_;
  std::map<CostKey, std::vector<std::vector<BankEntry>>> by_cost_;
  std::vector<std::vector<BankEntry>> order_;
  std::vector<BankEntry> all_;
  std::deque<Signature> signatures_;
  std::vector<std::unordered_set<const Signature*, SigPtrHash, SigPtrEq>> seen_;
  std::size_t rejected_ = 0;
};

}  // namespace beesynth
