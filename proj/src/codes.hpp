#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace szt {

// Four-state code alphabet. Enum values are the 2-bit storage patterns:
// high bit = stored sign (1 means negative), low bit = magnitude.
enum class TernaryCode : std::uint8_t {
  ZeroPlus = 0b00,
  PlusOne = 0b01,
  ZeroMinus = 0b10,
  MinusOne = 0b11,
};

// Decoded numeric value in {-1, 0, +1}. Both zero codes decode to 0.
constexpr int numeric_value(TernaryCode c) {
  const auto v = static_cast<std::uint8_t>(c);
  return static_cast<int>(v & 1u) * (1 - 2 * static_cast<int>(v >> 1));
}

// Stored sign in {-1, +1}; -1 exactly when the high pattern bit is set.
constexpr int stored_sign(TernaryCode c) {
  return 1 - 2 * static_cast<int>(static_cast<std::uint8_t>(c) >> 1);
}

constexpr bool is_zero_code(TernaryCode c) { return numeric_value(c) == 0; }

// Packs codes four per byte, element i in bits (2i mod 8)..(2i mod 8)+1 of
// byte i/4, least significant bits first. Trailing slots of the last byte
// are left as the ZeroPlus pattern so re-reading padded buffers decodes to 0.
std::vector<std::uint8_t> pack_codes(const std::vector<TernaryCode>& codes);

// Inverse of pack_codes on the first n slots.
// Throws std::invalid_argument if n exceeds 4 * bytes.size().
std::vector<TernaryCode> unpack_codes(const std::vector<std::uint8_t>& bytes,
                                      std::size_t n);

}  // namespace szt
