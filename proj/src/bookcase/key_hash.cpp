#include "alex/bookcase/key_hash.hpp"

#include <sodium.h>

#include <vector>

#include "alex/error.hpp"

namespace alex::bookcase {

namespace {

void ensure_sodium() {
  static const int rc = sodium_init();
  if (rc < 0) throw Error(Errc::storage, "libsodium failed to initialise");
}

}  // namespace

KeyHashParams KeyHashParams::interactive() noexcept {
  return {crypto_pwhash_OPSLIMIT_INTERACTIVE, crypto_pwhash_MEMLIMIT_INTERACTIVE};
}

KeyHashParams KeyHashParams::minimum() noexcept { return {crypto_pwhash_OPSLIMIT_MIN, crypto_pwhash_MEMLIMIT_MIN}; }

std::string hash_key(std::string_view key, const KeyHashParams& params) {
  ensure_sodium();
  char out[crypto_pwhash_STRBYTES];
  if (crypto_pwhash_str(out, key.data(), key.size(), params.ops_limit, params.mem_limit) != 0) {
    throw Error(Errc::storage, "key hashing ran out of memory");
  }
  return out;
}

bool verify_key(const std::string& hash, std::string_view key) noexcept {
  if (sodium_init() < 0) return false;
  return crypto_pwhash_str_verify(hash.c_str(), key.data(), key.size()) == 0;
}

std::string random_hex(std::size_t bytes) {
  ensure_sodium();
  std::vector<unsigned char> buf(bytes);
  randombytes_buf(buf.data(), buf.size());
  std::string hex(bytes * 2 + 1, '\0');
  sodium_bin2hex(hex.data(), hex.size(), buf.data(), buf.size());
  hex.pop_back();
  return hex;
}

}  // namespace alex::bookcase
