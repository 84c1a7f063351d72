#include "beesynth/program.hpp"

#include <cctype>

namespace beesynth {

Program make_program_unchecked(const ProductionRule& rule, std::vector<Program> children) {
  auto node = std::make_shared<ProgramNode>();
  node->rule = &rule;
  std::size_t h = std::hash<std::uint32_t>{}(rule.id) * 0x9e3779b97f4a7c15ull;
  std::uint32_t sz = 1;
  for (const auto& c : children) {
    sz += c->size;
    h ^= c->hash + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  node->size = sz;
  node->hash = h;
  node->children = std::move(children);
  return node;
}

Program make_program(const ProductionRule& rule, std::vector<Program> children) {
  if (children.size() != rule.arity()) {
    throw GrammarError("rule '" + rule.op + "' expects " + std::to_string(rule.arity()) + " children, got " +
                       std::to_string(children.size()));
  }
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (!children[i] || children[i]->rule->ret != rule.args[i]) {
      throw GrammarError("child " + std::to_string(i) + " of '" + rule.op + "' is not type-consistent");
    }
  }
  return make_program_unchecked(rule, std::move(children));
}

bool structurally_equal(const ProgramNode& a, const ProgramNode& b) {
  if (&a == &b) return true;
  if (a.hash != b.hash || a.size != b.size || a.rule != b.rule) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!structurally_equal(*a.children[i], *b.children[i])) return false;
  }
  return true;
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string literal_text(const Value& v) {
  if (std::holds_alternative<std::string>(v)) return quote(std::get<std::string>(v));
  return to_display(v);
}

void write_prefix(const ProgramNode& n, std::string& out) {
  const auto& r = *n.rule;
  switch (r.kind) {
    case RuleKind::literal: out += literal_text(r.literal); return;
    case RuleKind::input: out += r.input; return;
    case RuleKind::operation:
      out += '(';
      out += r.op;
      for (const auto& c : n.children) {
        out += ' ';
        write_prefix(*c, out);
      }
      out += ')';
      return;
  }
}

// Tokens: '(' , ')', quoted strings (kept with quotes), and bare atoms.
std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> toks;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(' || c == ')') {
      toks.emplace_back(1, c);
      ++i;
    } else if (c == '"') {
      std::string tok = "\"";
      ++i;
      bool closed = false;
      while (i < text.size()) {
        char d = text[i++];
        if (d == '\\' && i < text.size()) {
          tok.push_back(text[i++]);
        } else if (d == '"') {
          closed = true;
          break;
        } else {
          tok.push_back(d);
        }
      }
      if (!closed) throw GrammarError("unterminated string literal in program text");
      toks.push_back(std::move(tok));
    } else {
      std::size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != '(' && text[j] != ')') ++j;
      toks.emplace_back(text.substr(i, j - i));
      i = j;
    }
  }
  return toks;
}

struct Sexp {
  std::string atom;  // set for leaves
  std::vector<Sexp> items;
  bool list = false;
};

Sexp read_sexp(const std::vector<std::string>& toks, std::size_t& pos) {
  if (pos >= toks.size()) throw GrammarError("unexpected end of program text");
  const auto& t = toks[pos++];
  if (t == ")") throw GrammarError("unexpected ')' in program text");
  if (t != "(") return Sexp{t, {}, false};
  Sexp s;
  s.list = true;
  while (true) {
    if (pos >= toks.size()) throw GrammarError("missing ')' in program text");
    if (toks[pos] == ")") {
      ++pos;
      break;
    }
    s.items.push_back(read_sexp(toks, pos));
  }
  if (s.items.empty() || s.items[0].list) throw GrammarError("operator expected after '('");
  return s;
}

bool literal_matches(const ProductionRule& r, const std::string& atom) {
  if (!atom.empty() && atom[0] == '"') {
    return std::holds_alternative<std::string>(r.literal) && std::get<std::string>(r.literal) == atom.substr(1);
  }
  if (std::holds_alternative<std::string>(r.literal)) return false;
  return to_display(r.literal) == atom;
}

// Resolves `s` as a program of type `t`, trying each candidate rule in
// document order and backtracking over overloaded operators.
Program resolve(const Grammar& g, const Sexp& s, TypeTag t) {
  for (RuleId id : g.by_type[t]) {
    const auto& r = g.rules[id];
    if (!s.list) {
      if (r.kind == RuleKind::literal && literal_matches(r, s.atom)) return make_program_unchecked(r, {});
      if (r.kind == RuleKind::input && s.atom[0] != '"' && r.input == s.atom) return make_program_unchecked(r, {});
      continue;
    }
    if (r.kind != RuleKind::operation || r.op != s.items[0].atom || r.arity() + 1 != s.items.size()) continue;
    std::vector<Program> kids;
    bool ok = true;
    for (std::size_t i = 0; i < r.arity() && ok; ++i) {
      auto c = resolve(g, s.items[i + 1], r.args[i]);
      if (!c) ok = false;
      else kids.push_back(std::move(c));
    }
    if (ok) return make_program_unchecked(r, std::move(kids));
  }
  return nullptr;
}

}  // namespace

std::string to_prefix(const Program& p) {
  std::string out;
  write_prefix(*p, out);
  return out;
}

Program parse_prefix(const Grammar& g, std::string_view text) { return parse_prefix(g, text, g.initial); }

Program parse_prefix(const Grammar& g, std::string_view text, TypeTag type) {
  auto toks = tokenize(text);
  std::size_t pos = 0;
  Sexp s = read_sexp(toks, pos);
  if (pos != toks.size()) throw GrammarError("trailing tokens after program");
  auto p = resolve(g, s, type);
  if (!p) throw GrammarError("program does not derive from the grammar: " + std::string(text));
  return p;
}

std::vector<RuleId> rule_trace(const Program& p) {
  std::vector<RuleId> out;
  std::vector<const ProgramNode*> stack{p.get()};
  while (!stack.empty()) {
    const ProgramNode* n = stack.back();
    stack.pop_back();
    out.push_back(n->rule->id);
    for (auto it = n->children.rbegin(); it != n->children.rend(); ++it) stack.push_back(it->get());
  }
  return out;
}

}  // namespace beesynth
