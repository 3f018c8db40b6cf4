#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace wordgraph {

// Incremental SHA-256 (FIPS 180-4). Small and dependency-free; used to
// fingerprint pipeline inputs and artifacts in the run manifest.
class Sha256 {
 public:
  Sha256() { reset(); }

  void reset();
  void update(const void* data, std::size_t len);
  std::array<std::uint8_t, 32> finish();

  // Convenience one-shot helpers returning lowercase hex.
  static std::string hex_digest(std::string_view data);
  static std::string hex_digest_file(const std::string& path);  // throws IoError

 private:
  void process_block(const std::uint8_t* block);

  std::array<std::uint32_t, 8> state_;
  std::array<std::uint8_t, 64> buffer_;
  std::size_t buffered_ = 0;
  std::uint64_t total_bytes_ = 0;
};

std::string to_hex(const std::array<std::uint8_t, 32>& digest);

}  // namespace wordgraph
