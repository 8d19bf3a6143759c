#pragma once

// Little-endian fixed-width encoding shared by the index files. Readers throw
// Errc::corrupt_index on truncation.

#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

#include "alex/error.hpp"

namespace alex::search::detail {

class Writer {
 public:
  void bytes(std::string_view s) { out_.append(s); }
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.append(s);
  }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  void expect(std::string_view magic, std::uint8_t version) {
    if (in_.substr(0, magic.size()) != magic) fail("bad magic");
    pos_ = magic.size();
    if (u8() != version) fail("unsupported version");
  }
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(in_[pos_++]);
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<std::uint8_t>(in_[pos_++])) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<std::uint8_t>(in_[pos_++])) << (8 * i);
    return v;
  }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  std::string str() {
    auto n = u32();
    need(n);
    std::string s(in_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  // A count about to drive a loop; each element takes at least `min_size` bytes.
  std::uint32_t count(std::size_t min_size) {
    auto n = u32();
    if (min_size && n > (in_.size() - pos_) / min_size) fail("count exceeds file size");
    return n;
  }
  void finish() const {
    if (pos_ != in_.size()) fail("trailing bytes");
  }
  [[noreturn]] static void fail(const std::string& what) { throw Error(Errc::corrupt_index, "index file: " + what); }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) fail("truncated");
  }
  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace alex::search::detail
