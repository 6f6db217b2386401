#include "codes.hpp"

#include <stdexcept>
#include <string>

namespace szt {

std::vector<std::uint8_t> pack_codes(const std::vector<TernaryCode>& codes) {
  std::vector<std::uint8_t> bytes((codes.size() + 3) / 4, 0u);
  for (std::size_t i = 0; i < codes.size(); ++i) {
    bytes[i / 4] |= static_cast<std::uint8_t>(
        static_cast<std::uint8_t>(codes[i]) << (2 * (i % 4)));
  }
  return bytes;
}

std::vector<TernaryCode> unpack_codes(const std::vector<std::uint8_t>& bytes,
                                      std::size_t n) {
  if (n > 4 * bytes.size()) {
    throw std::invalid_argument(
        "unpack_codes: requested " + std::to_string(n) + " codes but only " +
        std::to_string(4 * bytes.size()) + " slots are available");
  }
  std::vector<TernaryCode> codes(n);
  for (std::size_t i = 0; i < n; ++i) {
    codes[i] = static_cast<TernaryCode>((bytes[i / 4] >> (2 * (i % 4))) & 3u);
  }
  return codes;
}

}  // namespace szt
