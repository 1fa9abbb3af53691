#include <algorithm>
#include <string>

#include "ulab/bytes.hpp"
#include "ulab/error.hpp"

namespace ulab {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::kUnbalancedBracket: return "UnbalancedBracket";
    case Errc::kUnknownSymbol: return "UnknownSymbol";
    case Errc::kInvalidInput: return "InvalidInput";
    case Errc::kIncompatibleTables: return "IncompatibleTables";
    case Errc::kNoWitness: return "NoWitness";
    case Errc::kNotFound: return "NotFound";
    case Errc::kConstructionTooLarge: return "ConstructionTooLarge";
    case Errc::kMalformedPhenome: return "MalformedPhenome";
    case Errc::kNoiseExhausted: return "NoiseExhausted";
    case Errc::kFormat: return "Format";
  }
  return "Unknown";
}

ParseError::ParseError(Errc code, std::size_t position)
    : Error(code, std::string(errc_name(code)) + "(" +
                      std::to_string(position) + ")"),
      position_(position) {}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) {
    throw Error(Errc::kFormat, "hex string has odd length");
  }
  Bytes out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = hex_value(hex[i]);
    int lo = hex_value(hex[i + 1]);
    if (hi < 0 || lo < 0) {
      throw Error(Errc::kFormat, "invalid hex digit at " + std::to_string(i));
    }
    out.push_back(static_cast<std::uint8_t>(hi * 16 + lo));
  }
  return out;
}

bool length_lex_less(const Bytes& a, const Bytes& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace ulab
