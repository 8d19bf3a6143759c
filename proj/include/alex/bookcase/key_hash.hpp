#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace alex::bookcase {

// Argon2id cost. The defaults are libsodium's interactive limits; tests use
// minimum() to stay fast.
struct KeyHashParams {
  unsigned long long ops_limit;
  std::size_t mem_limit;

  static KeyHashParams interactive() noexcept;
  static KeyHashParams minimum() noexcept;
};

// Self-describing salted hash string; the key itself is never kept.
std::string hash_key(std::string_view key, const KeyHashParams& params);
bool verify_key(const std::string& hash, std::string_view key) noexcept;

// Hex of `bytes` random bytes from the system CSPRNG.
std::string random_hex(std::size_t bytes);

}  // namespace alex::bookcase
