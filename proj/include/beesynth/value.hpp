#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace beesynth {

/// A 64-bit machine word. Kept distinct from std::int64_t so the variant can
/// tell bit-vector values from string-DSL integers.
struct BitVec {
  std::uint64_t bits = 0;

  friend bool operator==(BitVec, BitVec) = default;
  friend auto operator<=>(BitVec, BitVec) = default;
};

using Value = std::variant<std::string, std::int64_t, bool, BitVec>;

enum class ValueKind { string, integer, boolean, bitvector };

ValueKind kind_of(const Value& v);
std::string_view kind_name(ValueKind k);
std::optional<ValueKind> parse_kind(std::string_view name);

std::size_t hash_value(const Value& v);

/// Human-readable rendering: strings unquoted, integers in decimal, booleans
/// as true/false, bit-vectors as 0x-prefixed hex.
std::string to_display(const Value& v);

/// Reads a JSON value as a Value of the requested kind. Bit-vectors accept
/// unsigned numbers, decimal strings and "0x..." hex strings.
Value value_from_json(const nlohmann::json& j, ValueKind kind);
nlohmann::json value_to_json(const Value& v);

/// Outputs of one program over every example of a task, in example order.
using Signature = std::vector<Value>;

struct SignatureHash {
  std::size_t operator()(const Signature& sig) const noexcept;
};

}  // namespace beesynth
