#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ulab {

using Bytes = std::vector<std::uint8_t>;

// Lowercase hex, two digits per byte, no separators.
std::string to_hex(std::span<const std::uint8_t> bytes);

// Accepts upper or lower case; throws Error(kFormat) on odd length or
// non-hex characters.
Bytes from_hex(std::string_view hex);

// Orders byte strings by length first, then lexicographically.
bool length_lex_less(const Bytes& a, const Bytes& b);

}  // namespace ulab
