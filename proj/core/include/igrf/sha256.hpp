#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace igrf {

/// Streaming SHA-256, used for manifest content hashes.
class Sha256 {
 public:
  Sha256();
  void update(const void* data, std::size_t len);
  void update(std::string_view s) { update(s.data(), s.size()); }
  /// Finalizes and returns the lowercase hex digest. The object must not be reused.
  std::string hex_digest();

 private:
  void process_block(const std::uint8_t* block);

  std::uint32_t state_[8];
  std::uint8_t buffer_[64];
  std::uint64_t bit_count_ = 0;
  std::size_t buffer_len_ = 0;
};

std::string sha256_hex(std::string_view data);
/// Hash of a file's bytes. Throws DataError if the file cannot be read.
std::string sha256_file(const std::string& path);

}  // namespace igrf
