#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace szt {

// Minimal SHA-256 (FIPS 180-4) used for checkpoint and file digests.
class Sha256 {
 public:
  Sha256() { reset(); }

  void reset();
  void update(const void* data, std::size_t len);
  std::array<std::uint8_t, 32> digest();

  static std::string hex(const std::array<std::uint8_t, 32>& d);
  static std::string hash_hex(const void* data, std::size_t len);
  static std::string hash_file_hex(const std::string& path);  // throws IoError

 private:
  void process_block(const std::uint8_t* p);

  std::uint32_t h_[8];
  std::uint64_t total_len_ = 0;
  std::uint8_t buf_[64];
  std::size_t buf_len_ = 0;
};

}  // namespace szt
