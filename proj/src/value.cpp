#include "beesynth/value.hpp"

#include <charconv>
#include <functional>
#include <stdexcept>

namespace beesynth {

ValueKind kind_of(const Value& v) {
  return static_cast<ValueKind>(v.index());
}

std::string_view kind_name(ValueKind k) {
  switch (k) {
    case ValueKind::string: return "string";
    case ValueKind::integer: return "integer";
    case ValueKind::boolean: return "boolean";
    case ValueKind::bitvector: return "bitvector";
  }
  return "?";
}

std::optional<ValueKind> parse_kind(std::string_view name) {
  if (name == "string") return ValueKind::string;
  if (name == "integer" || name == "int") return ValueKind::integer;
  if (name == "boolean" || name == "bool") return ValueKind::boolean;
  if (name == "bitvector" || name == "bv") return ValueKind::bitvector;
  return std::nullopt;
}

std::size_t hash_value(const Value& v) {
  std::size_t h = 0;
  switch (v.index()) {
    case 0: h = std::hash<std::string>{}(std::get<std::string>(v)); break;
    case 1: h = std::hash<std::int64_t>{}(std::get<std::int64_t>(v)); break;
    case 2: h = std::get<bool>(v) ? 0x9e3779b9u : 0x7f4a7c15u; break;
    case 3: h = std::hash<std::uint64_t>{}(std::get<BitVec>(v).bits); break;
  }
  return h ^ (v.index() * 0x85ebca6bu);
}

std::string to_display(const Value& v) {
  switch (v.index()) {
    case 0: return std::get<std::string>(v);
    case 1: return std::to_string(std::get<std::int64_t>(v));
    case 2: return std::get<bool>(v) ? "true" : "false";
    default: {
      char buf[24];
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, std::get<BitVec>(v).bits, 16);
      (void)ec;
      return "0x" + std::string(buf, end);
    }
  }
}

namespace {

std::uint64_t parse_bitvector_text(const std::string& text) {
  std::uint64_t out = 0;
  std::string_view sv = text;
  int base = 10;
  if (sv.size() > 2 && sv[0] == '0' && (sv[1] == 'x' || sv[1] == 'X')) {
    sv.remove_prefix(2);
    base = 16;
  } else if (sv.size() > 2 && sv[0] == '#' && sv[1] == 'x') {
    sv.remove_prefix(2);
    base = 16;
  }
  auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), out, base);
  if (ec != std::errc{} || ptr != sv.data() + sv.size()) {
    throw std::invalid_argument("malformed bit-vector value '" + text + "'");
  }
  return out;
}

}  // namespace

Value value_from_json(const nlohmann::json& j, ValueKind kind) {
  switch (kind) {
    case ValueKind::string:
      if (!j.is_string()) throw std::invalid_argument("expected a string value, got " + j.dump());
      return j.get<std::string>();
    case ValueKind::integer:
      if (!j.is_number_integer()) throw std::invalid_argument("expected an integer value, got " + j.dump());
      return j.get<std::int64_t>();
    case ValueKind::boolean:
      if (!j.is_boolean()) throw std::invalid_argument("expected a boolean value, got " + j.dump());
      return j.get<bool>();
    case ValueKind::bitvector:
      if (j.is_number_unsigned()) return BitVec{j.get<std::uint64_t>()};
      if (j.is_number_integer()) {
        auto n = j.get<std::int64_t>();
        if (n < 0) throw std::invalid_argument("bit-vector values are unsigned, got " + j.dump());
        return BitVec{static_cast<std::uint64_t>(n)};
      }
      if (j.is_string()) return BitVec{parse_bitvector_text(j.get<std::string>())};
      throw std::invalid_argument("expected a bit-vector value, got " + j.dump());
  }
  throw std::invalid_argument("unknown value kind");
}

nlohmann::json value_to_json(const Value& v) {
  switch (v.index()) {
    case 0: return std::get<std::string>(v);
    case 1: return std::get<std::int64_t>(v);
    case 2: return std::get<bool>(v);
    default: return to_display(v);
  }
}

std::size_t SignatureHash::operator()(const Signature& sig) const noexcept {
  std::size_t h = sig.size();
  for (const auto& v : sig) {
    h ^= hash_value(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

}  // namespace beesynth
