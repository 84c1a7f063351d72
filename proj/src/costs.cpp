#include "beesynth/costs.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>

#include "beesynth/spline.hpp"

namespace beesynth {

namespace {

void check_probability(double prob) {
  if (!(prob >= 0.0 && prob <= 1.0)) throw std::invalid_argument("probability outside [0,1]: " + std::to_string(prob));
}

}  // namespace

int delta_binned(double prob) {
  check_probability(prob);
  if (prob < 0.1) return 0;
  if (prob < 0.2) return 1;
  if (prob < 0.3) return 2;
  if (prob < 0.4) return 3;
  if (prob < 0.6) return 4;
  return 5;
}

double delta_spline(double prob) {
  check_probability(prob);
  static const NaturalCubicSpline spline({0.0, 0.15, 0.25, 0.35, 0.5, 1.0}, {0.0, 1.0, 2.0, 3.0, 4.0, 5.0});
  return std::clamp(spline(prob), 0.0, 5.0);
}

double w_probe(double rule_cost, std::span<const double> child_costs) {
  double w = rule_cost;
  for (double c : child_costs) w += c;
  return w;
}

long rounded_rule_cost(double real_cost) { return std::max(1L, std::lround(real_cost)); }

long w_probe_rounded(long rounded_rule, std::span<const long> child_costs) {
  return std::accumulate(child_costs.begin(), child_costs.end(), rounded_rule);
}

double w_bustle_post(double w, double prob, const std::function<double(double)>& delta) {
  return w + 5.0 - delta(prob);
}

double w_u_post(double w, double prob) {
  if (!(prob > 0.0)) throw std::invalid_argument("w_u needs a positive probability");
  return w - std::log2(prob);
}

std::vector<int> property_signature(const std::vector<std::pair<std::string, std::string>>& pairs,
                                    const std::vector<StringProperty>& properties) {
  std::vector<int> out;
  out.reserve(properties.size());
  for (const auto& f : properties) {
    bool any = false, all = true;
    for (const auto& [in, o] : pairs) {
      const bool v = f(in, o);
      any |= v;
      all &= v;
    }
    out.push_back(all ? 1 : (any ? 0 : -1));
  }
  return out;
}

// ---- oracles ------------------------------------------------------------------

void ProbabilityOracle::probabilities(const Task& task, std::span<const Signature* const> sigs, std::span<double> out) const {
  for (std::size_t i = 0; i < sigs.size(); ++i) out[i] = probability(task, *sigs[i]);
}

namespace {

std::string lowered(const std::string& s) {
  std::string r = s;
  for (auto& c : r) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return r;
}

bool p_equal(const std::string& o, const std::string& t, const std::string&) { return o == t; }
bool p_target_in_out(const std::string& o, const std::string& t, const std::string&) { return o.find(t) != std::string::npos; }
bool p_out_in_target(const std::string& o, const std::string& t, const std::string&) { return t.find(o) != std::string::npos; }
bool p_lower_equal(const std::string& o, const std::string& t, const std::string&) { return lowered(o) == lowered(t); }
bool p_same_length(const std::string& o, const std::string& t, const std::string&) { return o.size() == t.size(); }
bool p_shorter(const std::string& o, const std::string& t, const std::string&) { return o.size() < t.size(); }
bool p_empty(const std::string& o, const std::string&, const std::string&) { return o.empty(); }
bool p_first_char(const std::string& o, const std::string& t, const std::string&) {
  return !o.empty() && !t.empty() && o.front() == t.front();
}
bool p_last_char(const std::string& o, const std::string& t, const std::string&) {
  return !o.empty() && !t.empty() && o.back() == t.back();
}
bool p_out_in_input(const std::string& o, const std::string&, const std::string& x) { return x.find(o) != std::string::npos; }

// First string-valued argument of each example, "" when the task has none.
std::vector<std::string> first_string_input(const Task& task) {
  std::vector<std::string> out(task.examples());
  for (std::size_t a = 0; a < task.arguments.size(); ++a) {
    if (task.examples() == 0 || !std::holds_alternative<std::string>(task.inputs[0][a])) continue;
    for (std::size_t e = 0; e < task.examples(); ++e) out[e] = std::get<std::string>(task.inputs[e][a]);
    break;
  }
  return out;
}

std::vector<std::string> displayed(const Signature& sig) {
  std::vector<std::string> out;
  out.reserve(sig.size());
  for (const auto& v : sig) out.push_back(to_display(v));
  return out;
}

double clamp_probability(double p) { return std::clamp(p, ProbabilityOracle::kMin, ProbabilityOracle::kMax); }

}  // namespace

const std::vector<std::pair<std::string, OracleProperty>>& oracle_properties() {
  static const std::vector<std::pair<std::string, OracleProperty>> props = {
      {"output equals target", p_equal},
      {"target substring of output", p_target_in_out},
      {"output substring of target", p_out_in_target},
      {"lowercase equality", p_lower_equal},
      {"equal lengths", p_same_length},
      {"output shorter than target", p_shorter},
      {"output empty", p_empty},
      {"first characters equal", p_first_char},
      {"last characters equal", p_last_char},
      {"output substring of first string input", p_out_in_input},
  };
  return props;
}

std::vector<int> agreement_signature(const Task& task, const Signature& sig) {
  const auto outs = displayed(sig);
  const auto targets = displayed(task.outputs);
  const auto xs = first_string_input(task);
  std::vector<int> vec;
  for (const auto& [name, f] : oracle_properties()) {
    bool any = false, all = true;
    for (std::size_t e = 0; e < outs.size(); ++e) {
      const bool agree = f(outs[e], targets[e], xs[e]) == f(targets[e], targets[e], xs[e]);
      any |= agree;
      all &= agree;
    }
    vec.push_back(all ? 1 : (any ? 0 : -1));
  }
  return vec;
}

double HeuristicOracle::probability(const Task& task, const Signature& sig) const {
  const auto vec = agreement_signature(task, sig);
  double score = 0.0;
  for (int v : vec) score += v == 1 ? 1.0 : (v == 0 ? 0.5 : 0.0);
  return clamp_probability(score / static_cast<double>(vec.size()));
}

NetworkOracle::NetworkOracle(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw ConfigError("network has no layers");
  std::size_t width = kInputs;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& l = layers_[i];
    if (l.cols != width) {
      throw ConfigError("layer " + std::to_string(i) + " expects " + std::to_string(l.cols) + " inputs, previous width is " +
                        std::to_string(width));
    }
    if (l.weights.size() != l.rows * l.cols || l.bias.size() != l.rows) {
      throw ConfigError("layer " + std::to_string(i) + " has inconsistent weight or bias sizes");
    }
    width = l.rows;
  }
  if (width != 1) throw ConfigError("the last layer must have exactly one output");
}

NetworkOracle NetworkOracle::from_json(const nlohmann::json& doc) {
  if (!doc.contains("layers") || !doc["layers"].is_array()) throw ConfigError("weight file needs a 'layers' list");
  std::vector<DenseLayer> layers;
  for (const auto& jl : doc["layers"]) {
    DenseLayer l;
    try {
      l.rows = jl.at("rows").get<std::size_t>();
      l.cols = jl.at("cols").get<std::size_t>();
      l.weights = jl.at("weights").get<std::vector<double>>();
      l.bias = jl.at("bias").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("malformed layer: ") + e.what());
    }
    layers.push_back(std::move(l));
  }
  return NetworkOracle(std::move(layers));
}

NetworkOracle NetworkOracle::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open weight file " + path.string());
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::vector<double> NetworkOracle::features(const Task& task, const Signature& sig) const {
  const auto outs = displayed(sig);
  const auto targets = displayed(task.outputs);
  const auto xs = first_string_input(task);
  std::vector<double> f;
  f.reserve(kInputs);
  auto block = [&](const std::vector<std::string>& lhs) {
    for (const auto& [name, prop] : oracle_properties()) {
      bool any = false, all = true;
      for (std::size_t e = 0; e < lhs.size(); ++e) {
        const bool v = prop(lhs[e], targets[e], xs[e]);
        any |= v;
        all &= v;
      }
      f.push_back(all ? 1.0 : (any ? 0.0 : -1.0));
    }
  };
  block(outs);
  block(xs);
  return f;
}

double NetworkOracle::forward(std::span<const double> input) const {
  std::vector<double> cur(input.begin(), input.end()), next;
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    const auto& l = layers_[li];
    next.assign(l.rows, 0.0);
    for (std::size_t r = 0; r < l.rows; ++r) {
      double acc = l.bias[r];
      for (std::size_t c = 0; c < l.cols; ++c) acc += l.weights[r * l.cols + c] * cur[c];
      next[r] = li + 1 < layers_.size() ? std::max(0.0, acc) : acc;
    }
    cur.swap(next);
  }
  return 1.0 / (1.0 + std::exp(-cur[0]));
}

double NetworkOracle::probability(const Task& task, const Signature& sig) const {
  const auto f = features(task, sig);
  return clamp_probability(forward(f));
}

// ---- cost models --------------------------------------------------------------

std::optional<CostModelKind> parse_cost_model(std::string_view name) {
  if (name == "size") return CostModelKind::size;
  if (name == "probe") return CostModelKind::probe;
  if (name == "probe-rounded") return CostModelKind::probe_rounded;
  if (name == "bustle-binned") return CostModelKind::bustle_binned;
  if (name == "bustle-spline") return CostModelKind::bustle_spline;
  if (name == "u") return CostModelKind::u;
  return std::nullopt;
}

std::string_view cost_model_name(CostModelKind k) {
  switch (k) {
    case CostModelKind::size: return "size";
    case CostModelKind::probe: return "probe";
    case CostModelKind::probe_rounded: return "probe-rounded";
    case CostModelKind::bustle_binned: return "bustle-binned";
    case CostModelKind::bustle_spline: return "bustle-spline";
    case CostModelKind::u: return "u";
  }
  return "?";
}

CostModel::CostModel(CostModelKind kind, const Pcfg& pcfg, std::shared_ptr<const ProbabilityOracle> oracle)
    : kind_(kind), oracle_(std::move(oracle)) {
  const auto n = pcfg.grammar().rules.size();
  rule_cost_.resize(n);
  for (RuleId r = 0; r < n; ++r) {
    switch (kind_) {
      case CostModelKind::probe: rule_cost_[r] = pcfg.cost(r); break;
      case CostModelKind::probe_rounded: rule_cost_[r] = static_cast<double>(rounded_rule_cost(pcfg.cost(r))); break;
      default: rule_cost_[r] = 1.0; break;
    }
  }
  if (kind_ == CostModelKind::probe) {
    for (RuleId r = 0; r < n; ++r) {
      if (!(rule_cost_[r] > 0.0)) {
        throw ConfigError("rule '" + pcfg.grammar().rules[r].op + "' has zero cost; the probe model needs positive costs");
      }
    }
  }
  if (post_generation() && !oracle_) oracle_ = std::make_shared<HeuristicOracle>();
}

double CostModel::max_rule_cost() const {
  return rule_cost_.empty() ? 0.0 : *std::max_element(rule_cost_.begin(), rule_cost_.end());
}

double CostModel::post_cost(double w, double prob) const {
  switch (kind_) {
    case CostModelKind::bustle_binned: return w + 5.0 - delta_binned(prob);
    case CostModelKind::bustle_spline: return w + 5.0 - delta_spline(prob);
    case CostModelKind::u: return w_u_post(w, prob);
    default: return w;
  }
}

double CostModel::post_cost(double w, const Task& task, const Signature& sig) const {
  if (!post_generation()) return w;
  return post_cost(w, oracle_->probability(task, sig));
}

}  // namespace beesynth
