#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "beesynth/semantics.hpp"
#include "beesynth/value.hpp"

namespace beesynth {

using TypeTag = std::uint16_t;
using RuleId = std::uint32_t;

class GrammarError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RuleKind { literal, input, operation };

struct ProductionRule {
  RuleId id = 0;
  std::string op;  // operator name, literal text, or argument name
  TypeTag ret = 0;
  std::vector<TypeTag> args;
  RuleKind kind = RuleKind::operation;
  Value literal;      // only for RuleKind::literal
  std::string input;  // only for RuleKind::input
  OpFn fn = nullptr;  // only for RuleKind::operation

  std::size_t arity() const { return args.size(); }
  bool terminal() const { return args.empty(); }
};

struct TypeInfo {
  std::string name;
  ValueKind kind;
};

struct Grammar {
  std::vector<TypeInfo> types;
  TypeTag initial = 0;
  std::vector<ProductionRule> rules;           // indexed by RuleId
  std::vector<std::vector<RuleId>> by_type;    // rules grouped by return type, document order

  std::optional<TypeTag> find_type(std::string_view name) const;
  std::size_t max_arity() const;
};

/// A grammar plus one probability per rule. Immutable once built.
class Pcfg {
 public:
  /// Validates probabilities: each in (0,1] (1 only when it is the sole rule
  /// of its type), summing to 1 per type within 1e-3.
  Pcfg(std::shared_ptr<const Grammar> g, std::vector<double> probs);

  const Grammar& grammar() const { return *grammar_; }
  std::shared_ptr<const Grammar> grammar_ptr() const { return grammar_; }
  double prob(RuleId r) const { return prob_[r]; }
  double cost(RuleId r) const { return cost_[r]; }
  const std::vector<double>& probs() const { return prob_; }
  const std::vector<double>& costs() const { return cost_; }

  static constexpr double kSimplexTolerance = 1e-3;

 private:
  std::shared_ptr<const Grammar> grammar_;
  std::vector<double> prob_;
  std::vector<double> cost_;
};

double cost_from_probability(double p);
double max_rule_cost(const Pcfg& pcfg);

/// Uniform distribution over the rules of each type.
Pcfg uniform(std::shared_ptr<const Grammar> g);

Pcfg parse_grammar(const nlohmann::json& doc);
Pcfg load_grammar(const std::filesystem::path& path);
nlohmann::json grammar_to_json(const Pcfg& pcfg);

/// Removes input rules whose argument is not among `arguments` and
/// renormalizes the affected types. Returns the input unchanged when nothing
/// is dropped.
Pcfg specialize(const Pcfg& pcfg, const std::vector<std::string>& arguments);

}  // namespace beesynth
