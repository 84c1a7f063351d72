#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "beesynth/grammar.hpp"
#include "beesynth/interp.hpp"

namespace beesynth {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- probability to penalty -------------------------------------------------

int delta_binned(double prob);
double delta_spline(double prob);

double w_probe(double rule_cost, std::span<const double> child_costs);
/// Per-rule integer cost used by the truncating baseline.
long rounded_rule_cost(double real_cost);
long w_probe_rounded(long rounded_rule, std::span<const long> child_costs);

double w_bustle_post(double w, double prob, const std::function<double(double)>& delta);
double w_u_post(double w, double prob);

// ---- property signatures ----------------------------------------------------

using StringProperty = std::function<bool(const std::string& in, const std::string& out)>;
/// Per property: +1 when true on every pair, -1 when false on every pair,
/// 0 otherwise.
std::vector<int> property_signature(const std::vector<std::pair<std::string, std::string>>& pairs,
                                    const std::vector<StringProperty>& properties);

// ---- probability oracles ----------------------------------------------------

/// Estimates the probability that a program with signature `sig` is part of
/// a solution to `task`. Results are clamped to [kMin, kMax].
class ProbabilityOracle {
 public:
  static constexpr double kMin = 0.01;
  static constexpr double kMax = 0.99;

  virtual ~ProbabilityOracle() = default;
  virtual double probability(const Task& task, const Signature& sig) const = 0;
  virtual void probabilities(const Task& task, std::span<const Signature* const> sigs, std::span<double> out) const;
};

/// Program-vs-target property function: (output, target, first string input).
using OracleProperty = bool (*)(const std::string& out, const std::string& target, const std::string& input);
const std::vector<std::pair<std::string, OracleProperty>>& oracle_properties();

/// Tri-valued vector of each oracle property, scored as agreement between
/// f(out, target, x) and f(target, target, x) across examples.
std::vector<int> agreement_signature(const Task& task, const Signature& sig);

class HeuristicOracle final : public ProbabilityOracle {
 public:
  double probability(const Task& task, const Signature& sig) const override;
};

struct DenseLayer {
  std::size_t rows = 0, cols = 0;
  std::vector<double> weights;  // row-major, rows x cols
  std::vector<double> bias;     // rows
};

/// Feed-forward network over 20 features: the raw program-vs-target property
/// vector followed by the first-input-vs-target vector. Hidden layers use
/// ReLU, the last layer must have one output fed through a logistic.
class NetworkOracle final : public ProbabilityOracle {
 public:
  static constexpr std::size_t kInputs = 20;

  explicit NetworkOracle(std::vector<DenseLayer> layers);
  static NetworkOracle load(const std::filesystem::path& path);
  static NetworkOracle from_json(const nlohmann::json& doc);

  double probability(const Task& task, const Signature& sig) const override;
  std::vector<double> features(const Task& task, const Signature& sig) const;
  double forward(std::span<const double> input) const;

 private:
  std::vector<DenseLayer> layers_;
};

// ---- cost models ------------------------------------------------------------

enum class CostModelKind { size, probe, probe_rounded, bustle_binned, bustle_spline, u };

std::optional<CostModelKind> parse_cost_model(std::string_view name);
std::string_view cost_model_name(CostModelKind k);

/// Rule costs plus, for post-generation models, the w' re-weighting.
/// w(r(p1..pk)) = rule_cost(r) + sum of the children's banked costs, where
/// a child's banked cost is w' for post-generation models and w otherwise.
class CostModel {
 public:
  CostModel(CostModelKind kind, const Pcfg& pcfg, std::shared_ptr<const ProbabilityOracle> oracle = nullptr);

  CostModelKind kind() const { return kind_; }
  bool post_generation() const { return kind_ == CostModelKind::bustle_binned || kind_ == CostModelKind::bustle_spline || kind_ == CostModelKind::u; }
  bool integral() const { return kind_ == CostModelKind::size || kind_ == CostModelKind::probe_rounded || kind_ == CostModelKind::bustle_binned; }

  double rule_cost(RuleId r) const { return rule_cost_[r]; }
  const std::vector<double>& rule_costs() const { return rule_cost_; }
  double max_rule_cost() const;

  /// w' from w and the oracle's probability; identity for pre-generation.
  double post_cost(double w, double prob) const;
  double post_cost(double w, const Task& task, const Signature& sig) const;
  const ProbabilityOracle* oracle() const { return oracle_.get(); }

 private:
  CostModelKind kind_;
  std::vector<double> rule_cost_;
  std::shared_ptr<const ProbabilityOracle> oracle_;
};

}  // namespace beesynth
