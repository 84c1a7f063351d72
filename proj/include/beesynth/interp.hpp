#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "beesynth/program.hpp"

namespace beesynth {

class TaskError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Environment = std::map<std::string, Value, std::less<>>;

struct Task {
  std::string name;
  std::string domain;  // "strings" or "bitvectors"
  std::vector<std::string> arguments;
  std::vector<std::vector<Value>> inputs;  // [example][argument]
  Signature outputs;

  std::size_t examples() const { return outputs.size(); }
  Environment environment(std::size_t example) const;
  /// Values of one argument across all examples.
  Signature column(std::string_view argument) const;
};

/// Parses the task format. Bit-vector tasks accept unsigned decimal numbers
/// and "0x" hex strings; string tasks infer the kind from each JSON value.
Task parse_task(const nlohmann::json& doc);
Task load_task(const std::filesystem::path& path);
nlohmann::json task_to_json(const Task& task);

/// Direct recursive evaluation. Throws TaskError on an unbound argument.
Value evaluate(const Program& p, const Environment& env);

Signature output_signature(const Program& p, const Task& task);

/// Output signature of rule(children) from the children's signatures, the
/// way the bottom-up engines compute it without re-walking subtrees.
Signature apply_rule(const ProductionRule& rule, const Signature* const* child_sigs, const Task& task);

bool solves(const Program& p, const Task& task);

}  // namespace beesynth
