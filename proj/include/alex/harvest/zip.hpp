#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace alex::harvest {

// Minimal deflate zip writer. Every entry is stamped 1980-01-01 00:00, the
// earliest DOS time, so equal input gives equal bytes.
class ZipWriter {
 public:
  void add(std::string_view name, std::string_view data);
  std::string finish();

 private:
  struct Entry {
    std::string name;
    std::uint32_t crc = 0;
    std::uint32_t compressed = 0;
    std::uint32_t size = 0;
    std::uint16_t method = 0;
    std::uint32_t offset = 0;
  };
  std::string out_;
  std::vector<Entry> entries_;
};

struct ZipEntry {
  std::string name;
  std::string data;
};

// Reads archives produced by ZipWriter (stored or deflated entries).
// Throws Errc::invalid_value on anything else.
std::vector<ZipEntry> read_zip(std::string_view bytes);

}  // namespace alex::harvest
