#include "beesynth/grammar.hpp"

#include <cmath>
#include <fstream>
#include <unordered_map>

namespace beesynth {

using nlohmann::json;

std::optional<TypeTag> Grammar::find_type(std::string_view name) const {
  for (std::size_t i = 0; i < types.size(); ++i) {
    if (types[i].name == name) return static_cast<TypeTag>(i);
  }
  return std::nullopt;
}

std::size_t Grammar::max_arity() const {
  std::size_t k = 0;
  for (const auto& r : rules) k = std::max(k, r.arity());
  return k;
}

double cost_from_probability(double p) {
  if (!(p > 0.0) || p > 1.0) {
    throw GrammarError("probability must lie in (0, 1], got " + std::to_string(p));
  }
  if (p == 1.0) return 0.0;
  return -std::log2(p);
}

Pcfg::Pcfg(std::shared_ptr<const Grammar> g, std::vector<double> probs)
    : grammar_(std::move(g)), prob_(std::move(probs)) {
  if (!grammar_) throw GrammarError("null grammar");
  if (prob_.size() != grammar_->rules.size()) throw GrammarError("probability vector does not match rule count");
  for (std::size_t t = 0; t < grammar_->types.size(); ++t) {
    const auto& ids = grammar_->by_type[t];
    if (ids.empty()) continue;
    double sum = 0.0;
    for (RuleId r : ids) {
      const double p = prob_[r];
      if (!(p > 0.0) || p > 1.0 || (p == 1.0 && ids.size() > 1)) {
        throw GrammarError("rule '" + grammar_->rules[r].op + "' has probability outside (0,1): " + std::to_string(p));
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kSimplexTolerance) {
      throw GrammarError("probabilities of type " + grammar_->types[t].name + " sum to " + std::to_string(sum));
    }
  }
  cost_.reserve(prob_.size());
  for (double p : prob_) cost_.push_back(cost_from_probability(p));
}

double max_rule_cost(const Pcfg& pcfg) {
  double l = 0.0;
  for (double c : pcfg.costs()) l = std::max(l, c);
  return l;
}

Pcfg uniform(std::shared_ptr<const Grammar> g) {
  std::vector<double> probs(g->rules.size(), 0.0);
  for (const auto& ids : g->by_type) {
    for (RuleId r : ids) probs[r] = 1.0 / static_cast<double>(ids.size());
  }
  return Pcfg(std::move(g), std::move(probs));
}

namespace {

ValueKind default_kind(const std::string& name) {
  if (name == "I") return ValueKind::integer;
  if (name == "B") return ValueKind::boolean;
  if (name == "BV") return ValueKind::bitvector;
  return ValueKind::string;
}

TypeTag require_type(const Grammar& g, const json& j, const std::string& where) {
  if (!j.is_string()) throw GrammarError(where + ": type must be a symbol");
  auto t = g.find_type(j.get<std::string>());
  if (!t) throw GrammarError(where + ": undeclared type '" + j.get<std::string>() + "'");
  return *t;
}

void index_rules(Grammar& g) {
  g.by_type.assign(g.types.size(), {});
  for (const auto& r : g.rules) g.by_type[r.ret].push_back(r.id);
}

}  // namespace

Pcfg parse_grammar(const json& doc) {
  if (!doc.is_object()) throw GrammarError("grammar document must be a JSON object");
  if (!doc.contains("types") || !doc["types"].is_array() || doc["types"].empty()) {
    throw GrammarError("grammar document needs a non-empty 'types' list");
  }
  if (!doc.contains("rules") || !doc["rules"].is_array()) throw GrammarError("grammar document needs a 'rules' list");

  auto g = std::make_shared<Grammar>();
  for (const auto& t : doc["types"]) {
    TypeInfo info;
    if (t.is_string()) {
      info.name = t.get<std::string>();
      info.kind = default_kind(info.name);
    } else if (t.is_object() && t.contains("name") && t.contains("kind")) {
      info.name = t["name"].get<std::string>();
      auto k = parse_kind(t["kind"].get<std::string>());
      if (!k) throw GrammarError("type " + info.name + ": unknown kind " + t["kind"].dump());
      info.kind = *k;
    } else {
      throw GrammarError("malformed type entry " + t.dump());
    }
    if (g->find_type(info.name)) throw GrammarError("type declared twice: " + info.name);
    g->types.push_back(std::move(info));
  }
  if (g->types.size() > 0xffff) throw GrammarError("too many types");

  g->initial = doc.contains("initial") ? require_type(*g, doc["initial"], "initial") : TypeTag{0};

  std::vector<std::optional<double>> given;
  for (const auto& jr : doc["rules"]) {
    const std::string where = "rule " + std::to_string(g->rules.size());
    if (!jr.is_object()) throw GrammarError(where + ": expected an object");
    ProductionRule r;
    r.id = static_cast<RuleId>(g->rules.size());
    if (!jr.contains("ret")) throw GrammarError(where + ": missing 'ret'");
    r.ret = require_type(*g, jr["ret"], where);
    if (jr.contains("args")) {
      if (!jr["args"].is_array()) throw GrammarError(where + ": 'args' must be a list");
      for (const auto& a : jr["args"]) r.args.push_back(require_type(*g, a, where));
    }
    std::string kind = jr.value("kind", r.args.empty() ? std::string{} : std::string{"op"});
    if (kind.empty()) kind = jr.contains("op") && !jr.contains("value") ? "op" : "literal";

    const ValueKind ret_kind = g->types[r.ret].kind;
    if (kind == "literal") {
      if (!r.args.empty()) throw GrammarError(where + ": literal rules take no arguments");
      if (!jr.contains("value")) throw GrammarError(where + ": literal without 'value'");
      try {
        r.literal = value_from_json(jr["value"], ret_kind);
      } catch (const std::invalid_argument& e) {
        throw GrammarError(where + ": " + e.what());
      }
      r.kind = RuleKind::literal;
      r.op = jr.contains("op") ? jr["op"].get<std::string>() : to_display(r.literal);
    } else if (kind == "input") {
      if (!r.args.empty()) throw GrammarError(where + ": input rules take no arguments");
      if (!jr.contains("value") || !jr["value"].is_string()) throw GrammarError(where + ": input rule needs an argument name");
      r.kind = RuleKind::input;
      r.input = jr["value"].get<std::string>();
      r.op = r.input;
    } else if (kind == "op" || kind == "operation") {
      if (!jr.contains("op") || !jr["op"].is_string()) throw GrammarError(where + ": operation without 'op'");
      r.op = jr["op"].get<std::string>();
      if (r.args.empty()) throw GrammarError(where + ": operation '" + r.op + "' has no arguments");
      std::vector<ValueKind> kinds;
      for (TypeTag a : r.args) kinds.push_back(g->types[a].kind);
      r.fn = find_operator(r.op, ret_kind, kinds);
      if (!r.fn) throw GrammarError(where + ": no operator '" + r.op + "' with that signature");
      r.kind = RuleKind::operation;
    } else {
      throw GrammarError(where + ": unknown rule kind '" + kind + "'");
    }

    if (jr.contains("prob")) {
      if (!jr["prob"].is_number()) throw GrammarError(where + ": 'prob' must be a number");
      const double p = jr["prob"].get<double>();
      if (!(p > 0.0 && p < 1.0)) throw GrammarError(where + ": probability must be inside (0,1)");
      given.emplace_back(p);
    } else {
      given.emplace_back(std::nullopt);
    }
    g->rules.push_back(std::move(r));
  }
  index_rules(*g);

  const bool any = std::any_of(given.begin(), given.end(), [](const auto& p) { return p.has_value(); });
  const bool all = std::all_of(given.begin(), given.end(), [](const auto& p) { return p.has_value(); });
  if (any && !all) throw GrammarError("either every rule or no rule carries a probability");
  if (!any) return uniform(std::move(g));

  std::vector<double> probs;
  probs.reserve(given.size());
  for (const auto& p : given) probs.push_back(*p);
  return Pcfg(std::move(g), std::move(probs));
}

Pcfg load_grammar(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw GrammarError("cannot open grammar file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw GrammarError(path.string() + ": " + e.what());
  }
  return parse_grammar(doc);
}

json grammar_to_json(const Pcfg& pcfg) {
  const Grammar& g = pcfg.grammar();
  json doc;
  doc["types"] = json::array();
  for (const auto& t : g.types) doc["types"].push_back({{"name", t.name}, {"kind", std::string(kind_name(t.kind))}});
  doc["initial"] = g.types[g.initial].name;
  doc["rules"] = json::array();
  for (const auto& r : g.rules) {
    json jr;
    jr["ret"] = g.types[r.ret].name;
    switch (r.kind) {
      case RuleKind::literal:
        jr["kind"] = "literal";
        jr["value"] = value_to_json(r.literal);
        break;
      case RuleKind::input:
        jr["kind"] = "input";
        jr["value"] = r.input;
        break;
      case RuleKind::operation:
        jr["kind"] = "op";
        jr["op"] = r.op;
        jr["args"] = json::array();
        for (TypeTag a : r.args) jr["args"].push_back(g.types[a].name);
        break;
    }
    jr["prob"] = pcfg.prob(r.id);
    doc["rules"].push_back(std::move(jr));
  }
  return doc;
}

Pcfg specialize(const Pcfg& pcfg, const std::vector<std::string>& arguments) {
  const Grammar& g = pcfg.grammar();
  auto bound = [&](const ProductionRule& r) {
    return r.kind != RuleKind::input || std::find(arguments.begin(), arguments.end(), r.input) != arguments.end();
  };
  if (std::all_of(g.rules.begin(), g.rules.end(), bound)) return pcfg;

  auto out = std::make_shared<Grammar>();
  out->types = g.types;
  out->initial = g.initial;
  std::vector<double> mass;
  for (const auto& r : g.rules) {
    if (!bound(r)) continue;
    ProductionRule copy = r;
    copy.id = static_cast<RuleId>(out->rules.size());
    out->rules.push_back(std::move(copy));
    mass.push_back(pcfg.prob(r.id));
  }
  index_rules(*out);
  for (const auto& ids : out->by_type) {
    double z = 0.0;
    for (RuleId r : ids) z += mass[r];
    for (RuleId r : ids) mass[r] = ids.size() == 1 ? 1.0 : mass[r] / z;
  }
  return Pcfg(std::move(out), std::move(mass));
}

}  // namespace beesynth
