#include "beesynth/interp.hpp"

#include <fstream>

namespace beesynth {

using nlohmann::json;

Environment Task::environment(std::size_t example) const {
  Environment env;
  for (std::size_t a = 0; a < arguments.size(); ++a) env.emplace(arguments[a], inputs[example][a]);
  return env;
}

Signature Task::column(std::string_view argument) const {
  for (std::size_t a = 0; a < arguments.size(); ++a) {
    if (arguments[a] != argument) continue;
    Signature out;
    out.reserve(inputs.size());
    for (const auto& row : inputs) out.push_back(row[a]);
    return out;
  }
  throw TaskError("task " + name + " has no argument '" + std::string(argument) + "'");
}

namespace {

Value infer_value(const json& j, const std::string& domain) {
  if (domain == "bitvectors") {
    if (j.is_boolean()) return j.get<bool>();
    return value_from_json(j, ValueKind::bitvector);
  }
  if (j.is_string()) return j.get<std::string>();
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  throw TaskError("unsupported value " + j.dump());
}

}  // namespace

Task parse_task(const json& doc) {
  if (!doc.is_object()) throw TaskError("task document must be a JSON object");
  Task t;
  t.name = doc.value("name", std::string{"task"});
  t.domain = doc.value("domain", std::string{"strings"});
  if (t.domain != "strings" && t.domain != "bitvectors") throw TaskError(t.name + ": unknown domain '" + t.domain + "'");
  if (doc.contains("arguments")) {
    for (const auto& a : doc["arguments"]) t.arguments.push_back(a.get<std::string>());
  }
  if (!doc.contains("examples") || !doc["examples"].is_array() || doc["examples"].empty()) {
    throw TaskError(t.name + ": a task needs at least one example");
  }
  std::size_t idx = 0;
  for (const auto& ex : doc["examples"]) {
    const std::string where = t.name + ", example " + std::to_string(idx++);
    if (!ex.contains("output")) throw TaskError(where + ": missing output");
    std::vector<Value> row;
    const json inputs = ex.value("inputs", json::object());
    if (inputs.size() != t.arguments.size()) throw TaskError(where + ": binds a different set of arguments");
    for (const auto& a : t.arguments) {
      if (!inputs.contains(a)) throw TaskError(where + ": argument '" + a + "' unbound");
      try {
        row.push_back(infer_value(inputs[a], t.domain));
      } catch (const std::exception& e) {
        throw TaskError(where + ": " + e.what());
      }
    }
    try {
      t.outputs.push_back(infer_value(ex["output"], t.domain));
    } catch (const std::exception& e) {
      throw TaskError(where + ": " + e.what());
    }
    t.inputs.push_back(std::move(row));
  }
  // every example must agree on value kinds
  for (std::size_t i = 1; i < t.outputs.size(); ++i) {
    if (t.outputs[i].index() != t.outputs[0].index()) throw TaskError(t.name + ": outputs mix value kinds");
    for (std::size_t a = 0; a < t.arguments.size(); ++a) {
      if (t.inputs[i][a].index() != t.inputs[0][a].index()) throw TaskError(t.name + ": argument kinds differ across examples");
    }
  }
  return t;
}

Task load_task(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw TaskError("cannot open task file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw TaskError(path.string() + ": " + e.what());
  }
  return parse_task(doc);
}

json task_to_json(const Task& task) {
  json doc;
  doc["name"] = task.name;
  doc["domain"] = task.domain;
  doc["arguments"] = task.arguments;
  doc["examples"] = json::array();
  for (std::size_t i = 0; i < task.examples(); ++i) {
    json ex;
    ex["inputs"] = json::object();
    for (std::size_t a = 0; a < task.arguments.size(); ++a) ex["inputs"][task.arguments[a]] = value_to_json(task.inputs[i][a]);
    ex["output"] = value_to_json(task.outputs[i]);
    doc["examples"].push_back(std::move(ex));
  }
  return doc;
}

Value evaluate(const Program& p, const Environment& env) {
  const auto& r = *p->rule;
  switch (r.kind) {
    case RuleKind::literal: return r.literal;
    case RuleKind::input: {
      auto it = env.find(r.input);
      if (it == env.end()) throw TaskError("unbound argument '" + r.input + "'");
      return it->second;
    }
    case RuleKind::operation: break;
  }
  Value vals[8];
  const Value* ptrs[8];
  std::vector<Value> spill;
  const std::size_t k = p->children.size();
  if (k > 8) {
    spill.reserve(k);
    std::vector<const Value*> sp(k);
    for (std::size_t i = 0; i < k; ++i) spill.push_back(evaluate(p->children[i], env));
    for (std::size_t i = 0; i < k; ++i) sp[i] = &spill[i];
    return r.fn(sp.data());
  }
  for (std::size_t i = 0; i < k; ++i) {
    vals[i] = evaluate(p->children[i], env);
    ptrs[i] = &vals[i];
  }
  return r.fn(ptrs);
}

Signature output_signature(const Program& p, const Task& task) {
  Signature sig;
  sig.reserve(task.examples());
  for (std::size_t i = 0; i < task.examples(); ++i) sig.push_back(evaluate(p, task.environment(i)));
  return sig;
}

Signature apply_rule(const ProductionRule& rule, const Signature* const* child_sigs, const Task& task) {
  const std::size_t n = task.examples();
  switch (rule.kind) {
    case RuleKind::literal: return Signature(n, rule.literal);
    case RuleKind::input: return task.column(rule.input);
    case RuleKind::operation: break;
  }
  Signature out;
  out.reserve(n);
  const std::size_t k = rule.arity();
  const Value* small[8];
  std::vector<const Value*> big;
  const Value** args = small;
  if (k > 8) {
    big.resize(k);
    args = big.data();
  }
  for (std::size_t e = 0; e < n; ++e) {
    for (std::size_t i = 0; i < k; ++i) args[i] = &(*child_sigs[i])[e];
    out.push_back(rule.fn(args));
  }
  return out;
}

bool solves(const Program& p, const Task& task) {
  return output_signature(p, task) == task.outputs;
}

}  // namespace beesynth
