#include "beesynth/semantics.hpp"

#include <algorithm>
#include <cctype>

namespace beesynth {
namespace ops {

// String operators follow the SMT-LIB theory of strings.

std::string substr(const std::string& s, std::int64_t start, std::int64_t len) {
  const auto n = static_cast<std::int64_t>(s.size());
  if (start < 0 || start >= n || len <= 0) return {};
  const auto take = std::min(len, n - start);
  return s.substr(static_cast<std::size_t>(start), static_cast<std::size_t>(take));
}

std::int64_t index_of(const std::string& s, const std::string& t, std::int64_t from) {
  const auto n = static_cast<std::int64_t>(s.size());
  if (from < 0 || from > n) return -1;
  auto pos = s.find(t, static_cast<std::size_t>(from));
  return pos == std::string::npos ? -1 : static_cast<std::int64_t>(pos);
}

std::string replace_first(const std::string& s, const std::string& t, const std::string& u) {
  if (t.empty()) return u + s;
  auto pos = s.find(t);
  if (pos == std::string::npos) return s;
  std::string out;
  out.reserve(s.size() - t.size() + u.size());
  out.append(s, 0, pos).append(u).append(s, pos + t.size());
  return out;
}

std::string char_at(const std::string& s, std::int64_t i) {
  if (i < 0 || i >= static_cast<std::int64_t>(s.size())) return {};
  return std::string(1, s[static_cast<std::size_t>(i)]);
}

std::int64_t str_to_int(const std::string& s) {
  if (s.empty()) return -1;
  std::uint64_t acc = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return -1;
    acc = acc * 10u + static_cast<std::uint64_t>(c - '0');
  }
  return static_cast<std::int64_t>(acc);
}

std::string int_to_str(std::int64_t n) {
  if (n < 0) return {};
  return std::to_string(n);
}

std::int64_t floor_mod(std::int64_t a, std::int64_t b) {
  if (b == 0) return 0;
  if (b == -1) return 0;
  std::int64_t r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) r += b;
  return r;
}

// Bit-vector operators follow SMT-LIB QF_BV, 64 bits wide.

std::uint64_t udiv(std::uint64_t a, std::uint64_t b) { return b == 0 ? ~0ull : a / b; }
std::uint64_t urem(std::uint64_t a, std::uint64_t b) { return b == 0 ? a : a % b; }

namespace {
bool msb(std::uint64_t x) { return (x >> 63) != 0; }
std::uint64_t negate(std::uint64_t x) { return ~x + 1; }
}  // namespace

std::uint64_t sdiv(std::uint64_t a, std::uint64_t b) {
  const bool na = msb(a), nb = msb(b);
  if (!na && !nb) return udiv(a, b);
  if (na && !nb) return negate(udiv(negate(a), b));
  if (!na && nb) return negate(udiv(a, negate(b)));
  return udiv(negate(a), negate(b));
}

std::uint64_t srem(std::uint64_t a, std::uint64_t b) {
  const bool na = msb(a), nb = msb(b);
  if (!na && !nb) return urem(a, b);
  if (na && !nb) return negate(urem(negate(a), b));
  if (!na && nb) return urem(a, negate(b));
  return negate(urem(negate(a), negate(b)));
}

std::uint64_t shl(std::uint64_t a, std::uint64_t b) { return b >= 64 ? 0 : a << b; }
std::uint64_t lshr(std::uint64_t a, std::uint64_t b) { return b >= 64 ? 0 : a >> b; }
std::uint64_t ashr(std::uint64_t a, std::uint64_t b) {
  if (b >= 64) return msb(a) ? ~0ull : 0;
  return static_cast<std::uint64_t>(static_cast<std::int64_t>(a) >> b);
}

}  // namespace ops

namespace {

using K = ValueKind;

const std::string& S(const Value* v) { return std::get<std::string>(*v); }
std::int64_t I(const Value* v) { return std::get<std::int64_t>(*v); }
bool B(const Value* v) { return std::get<bool>(*v); }
std::uint64_t W(const Value* v) { return std::get<BitVec>(*v).bits; }

Value bv(std::uint64_t x) { return BitVec{x}; }

std::int64_t wrap(std::uint64_t x) { return static_cast<std::int64_t>(x); }
std::uint64_t u(std::int64_t x) { return static_cast<std::uint64_t>(x); }

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}
std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

bool starts_with(const std::string& s, const std::string& p) { return s.compare(0, p.size(), p) == 0 && s.size() >= p.size(); }
bool ends_with(const std::string& s, const std::string& p) {
  return s.size() >= p.size() && s.compare(s.size() - p.size(), p.size(), p) == 0;
}

std::vector<OperatorSignature> build_table() {
  std::vector<OperatorSignature> t;
  auto add = [&t](std::string_view name, K ret, std::vector<K> args, OpFn fn) {
    t.push_back({name, ret, std::move(args), fn});
  };

  // string domain: S
  add("concat", K::string, {K::string, K::string}, [](const Value* const* a) -> Value { return S(a[0]) + S(a[1]); });
  add("replace", K::string, {K::string, K::string, K::string},
      [](const Value* const* a) -> Value { return ops::replace_first(S(a[0]), S(a[1]), S(a[2])); });
  add("substr", K::string, {K::string, K::integer, K::integer},
      [](const Value* const* a) -> Value { return ops::substr(S(a[0]), I(a[1]), I(a[2])); });
  add("ite", K::string, {K::boolean, K::string, K::string},
      [](const Value* const* a) -> Value { return B(a[0]) ? S(a[1]) : S(a[2]); });
  add("intToStr", K::string, {K::integer}, [](const Value* const* a) -> Value { return ops::int_to_str(I(a[0])); });
  add("charAt", K::string, {K::string, K::integer},
      [](const Value* const* a) -> Value { return ops::char_at(S(a[0]), I(a[1])); });
  add("toLower", K::string, {K::string}, [](const Value* const* a) -> Value { return lower(S(a[0])); });
  add("toUpper", K::string, {K::string}, [](const Value* const* a) -> Value { return upper(S(a[0])); });

  // string domain: I
  add("strToInt", K::integer, {K::string}, [](const Value* const* a) -> Value { return ops::str_to_int(S(a[0])); });
  add("add", K::integer, {K::integer, K::integer}, [](const Value* const* a) -> Value { return wrap(u(I(a[0])) + u(I(a[1]))); });
  add("sub", K::integer, {K::integer, K::integer}, [](const Value* const* a) -> Value { return wrap(u(I(a[0])) - u(I(a[1]))); });
  add("mul", K::integer, {K::integer, K::integer}, [](const Value* const* a) -> Value { return wrap(u(I(a[0])) * u(I(a[1]))); });
  add("mod", K::integer, {K::integer, K::integer}, [](const Value* const* a) -> Value { return ops::floor_mod(I(a[0]), I(a[1])); });
  add("length", K::integer, {K::string}, [](const Value* const* a) -> Value { return static_cast<std::int64_t>(S(a[0]).size()); });
  add("indexOf", K::integer, {K::string, K::string, K::integer},
      [](const Value* const* a) -> Value { return ops::index_of(S(a[0]), S(a[1]), I(a[2])); });
  add("ite", K::integer, {K::boolean, K::integer, K::integer},
      [](const Value* const* a) -> Value { return B(a[0]) ? I(a[1]) : I(a[2]); });
  add("find", K::integer, {K::string, K::string}, [](const Value* const* a) -> Value { return ops::index_of(S(a[0]), S(a[1]), 0); });

  // string domain: B
  add("isEqual", K::boolean, {K::integer, K::integer}, [](const Value* const* a) -> Value { return I(a[0]) == I(a[1]); });
  add("isLess", K::boolean, {K::integer, K::integer}, [](const Value* const* a) -> Value { return I(a[0]) < I(a[1]); });
  add("isGreater", K::boolean, {K::integer, K::integer}, [](const Value* const* a) -> Value { return I(a[0]) > I(a[1]); });
  add("contains", K::boolean, {K::string, K::string},
      [](const Value* const* a) -> Value { return S(a[0]).find(S(a[1])) != std::string::npos; });
  add("isSuffixOf", K::boolean, {K::string, K::string}, [](const Value* const* a) -> Value { return ends_with(S(a[1]), S(a[0])); });
  add("isPrefixOf", K::boolean, {K::string, K::string}, [](const Value* const* a) -> Value { return starts_with(S(a[1]), S(a[0])); });

  // bit-vector domain: BV
  add("xor", K::bitvector, {K::bitvector, K::bitvector}, [](const Value* const* a) -> Value { return bv(W(a[0]) ^ W(a[1])); });
  add("and", K::bitvector, {K::bitvector, K::bitvector}, [](const Value* const* a) -> Value { return bv(W(a[0]) & W(a[1])); });
  add("or", K::bitvector, {K::bitvector, K::bitvector}, [](const Value* const* a) -> Value { return bv(W(a[0]) | W(a[1])); });
  add("neg", K::bitvector, {K::bitvector}, [](const Value* const* a) -> Value { return bv(~W(a[0]) + 1); });
  add("not", K::bitvector, {K::bitvector}, [](const Value* const* a) -> Value { return bv(~W(a[0])); });
  add("add", K::bitvector, {K::bitvector, K::bitvector}, [](const Value* const* a) -> Value { return bv(W(a[0]) + W(a[1])); });
  add("sub", K::bitvector, {K::bitvector, K::bitvector}, [](const Value* const* a) -> Value { return bv(W(a[0]) - W(a[1])); });
  add("mul", K::bitvector, {K::bitvector, K::bitvector}, [](const Value* const* a) -> Value { return bv(W(a[0]) * W(a[1])); });
  add("udiv", K::bitvector, {K::bitvector, K::bitvector}, [](const Value* const* a) -> Value { return bv(ops::udiv(W(a[0]), W(a[1]))); });
  add("urem", K::bitvector, {K::bitvector, K::bitvector}, [](const Value* const* a) -> Value { return bv(ops::urem(W(a[0]), W(a[1]))); });
  add("sdiv", K::bitvector, {K::bitvector, K::bitvector}, [](const Value* const* a) -> Value { return bv(ops::sdiv(W(a[0]), W(a[1]))); });
  add("srem", K::bitvector, {K::bitvector, K::bitvector}, [](const Value* const* a) -> Value { return bv(ops::srem(W(a[0]), W(a[1]))); });
  add("shl", K::bitvector, {K::bitvector, K::bitvector}, [](const Value* const* a) -> Value { return bv(ops::shl(W(a[0]), W(a[1]))); });
  add("lshr", K::bitvector, {K::bitvector, K::bitvector}, [](const Value* const* a) -> Value { return bv(ops::lshr(W(a[0]), W(a[1]))); });
  add("ashr", K::bitvector, {K::bitvector, K::bitvector}, [](const Value* const* a) -> Value { return bv(ops::ashr(W(a[0]), W(a[1]))); });
  add("ite", K::bitvector, {K::boolean, K::bitvector, K::bitvector},
      [](const Value* const* a) -> Value { return B(a[0]) ? Value{BitVec{W(a[1])}} : Value{BitVec{W(a[2])}}; });
  add("redor", K::bitvector, {K::bitvector}, [](const Value* const* a) -> Value { return bv(W(a[0]) != 0 ? ~0ull : 0); });

  // bit-vector domain: B. Boolean-valued and/or/not over words test for
  // non-zero words.
  add("isEqual", K::boolean, {K::bitvector, K::bitvector}, [](const Value* const* a) -> Value { return W(a[0]) == W(a[1]); });
  add("ult", K::boolean, {K::bitvector, K::bitvector}, [](const Value* const* a) -> Value { return W(a[0]) < W(a[1]); });
  add("ule", K::boolean, {K::bitvector, K::bitvector}, [](const Value* const* a) -> Value { return W(a[0]) <= W(a[1]); });
  add("ugt", K::boolean, {K::bitvector, K::bitvector}, [](const Value* const* a) -> Value { return W(a[0]) > W(a[1]); });
  add("uge", K::boolean, {K::bitvector, K::bitvector}, [](const Value* const* a) -> Value { return W(a[0]) >= W(a[1]); });
  add("slt", K::boolean, {K::bitvector, K::bitvector},
      [](const Value* const* a) -> Value { return static_cast<std::int64_t>(W(a[0])) < static_cast<std::int64_t>(W(a[1])); });
  add("sle", K::boolean, {K::bitvector, K::bitvector},
      [](const Value* const* a) -> Value { return static_cast<std::int64_t>(W(a[0])) <= static_cast<std::int64_t>(W(a[1])); });
  add("sgt", K::boolean, {K::bitvector, K::bitvector},
      [](const Value* const* a) -> Value { return static_cast<std::int64_t>(W(a[0])) > static_cast<std::int64_t>(W(a[1])); });
  add("sge", K::boolean, {K::bitvector, K::bitvector},
      [](const Value* const* a) -> Value { return static_cast<std::int64_t>(W(a[0])) >= static_cast<std::int64_t>(W(a[1])); });
  add("redor", K::boolean, {K::bitvector}, [](const Value* const* a) -> Value { return W(a[0]) != 0; });
  add("and", K::boolean, {K::bitvector, K::bitvector}, [](const Value* const* a) -> Value { return W(a[0]) != 0 && W(a[1]) != 0; });
  add("or", K::boolean, {K::bitvector, K::bitvector}, [](const Value* const* a) -> Value { return W(a[0]) != 0 || W(a[1]) != 0; });
  add("not", K::boolean, {K::bitvector}, [](const Value* const* a) -> Value { return W(a[0]) == 0; });
  add("and", K::boolean, {K::boolean, K::boolean}, [](const Value* const* a) -> Value { return B(a[0]) && B(a[1]); });
  add("or", K::boolean, {K::boolean, K::boolean}, [](const Value* const* a) -> Value { return B(a[0]) || B(a[1]); });
  add("not", K::boolean, {K::boolean}, [](const Value* const* a) -> Value { return !B(a[0]); });

  return t;
}

}  // namespace

const std::vector<OperatorSignature>& operator_table() {
  static const std::vector<OperatorSignature> table = build_table();
  return table;
}

OpFn find_operator(std::string_view name, ValueKind ret, std::span<const ValueKind> args) {
  for (const auto& entry : operator_table()) {
    if (entry.name == name && entry.ret == ret && std::ranges::equal(entry.args, args)) return entry.fn;
  }
  return nullptr;
}

}  // namespace beesynth
