#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "beesynth/grammar.hpp"

namespace beesynth {

struct ProgramNode;
using Program = std::shared_ptr<const ProgramNode>;

/// One AST node. Children are shared with whatever built them (usually the
/// bank), so building a program never copies its subtrees.
struct ProgramNode {
  const ProductionRule* rule = nullptr;
  std::vector<Program> children;
  std::uint32_t size = 1;
  std::size_t hash = 0;
};

/// Builds r(children...). Throws GrammarError on arity or type mismatch.
Program make_program(const ProductionRule& rule, std::vector<Program> children = {});
/// Same as make_program without the checks, for the search hot paths.
Program make_program_unchecked(const ProductionRule& rule, std::vector<Program> children);

inline std::uint32_t size(const Program& p) { return p->size; }

bool structurally_equal(const ProgramNode& a, const ProgramNode& b);

struct ProgramHash {
  std::size_t operator()(const Program& p) const noexcept { return p->hash; }
};
struct ProgramEqual {
  bool operator()(const Program& a, const Program& b) const noexcept {
    return a == b || structurally_equal(*a, *b);
  }
};

/// Prefix notation: `(op child ...)`; string literals are quoted, integers and
/// booleans bare, bit-vectors as 0x hex, inputs as bare names.
std::string to_prefix(const Program& p);
Program parse_prefix(const Grammar& g, std::string_view text);
/// Same, rooted at `type` instead of the initial nonterminal.
Program parse_prefix(const Grammar& g, std::string_view text, TypeTag type);

/// Rule ids of every node, pre-order.
std::vector<RuleId> rule_trace(const Program& p);

}  // namespace beesynth
