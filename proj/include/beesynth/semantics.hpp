#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "beesynth/value.hpp"

namespace beesynth {

/// Operator implementation. `args` points at `arity` values whose kinds
/// match the signature the operator was registered under.
using OpFn = Value (*)(const Value* const* args);

struct OperatorSignature {
  std::string_view name;
  ValueKind ret;
  std::vector<ValueKind> args;
  OpFn fn;
};

/// Looks up the operator registered for (name, return kind, argument kinds).
/// Returns nullptr when no such operator exists.
OpFn find_operator(std::string_view name, ValueKind ret, std::span<const ValueKind> args);

const std::vector<OperatorSignature>& operator_table();

// Building blocks exposed for direct testing.
namespace ops {

std::string substr(const std::string& s, std::int64_t start, std::int64_t len);
std::int64_t index_of(const std::string& s, const std::string& t, std::int64_t from);
std::string replace_first(const std::string& s, const std::string& t, const std::string& u);
std::string char_at(const std::string& s, std::int64_t i);
std::int64_t str_to_int(const std::string& s);
std::string int_to_str(std::int64_t n);
std::int64_t floor_mod(std::int64_t a, std::int64_t b);

std::uint64_t udiv(std::uint64_t a, std::uint64_t b);
std::uint64_t urem(std::uint64_t a, std::uint64_t b);
std::uint64_t sdiv(std::uint64_t a, std::uint64_t b);
std::uint64_t srem(std::uint64_t a, std::uint64_t b);
std::uint64_t shl(std::uint64_t a, std::uint64_t b);
std::uint64_t lshr(std::uint64_t a, std::uint64_t b);
std::uint64_t ashr(std::uint64_t a, std::uint64_t b);

}  // namespace ops
}  // namespace beesynth
