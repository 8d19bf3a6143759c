#include "alex/harvest/zip.hpp"

#include <zlib.h>

#include "alex/error.hpp"

namespace alex::harvest {

namespace {

constexpr std::uint16_t kDosDate = (0 << 9) | (1 << 5) | 1;  // 1980-01-01
constexpr std::uint16_t kDosTime = 0;

void put16(std::string& s, std::uint16_t v) {
  s.push_back(static_cast<char>(v & 0xFF));
  s.push_back(static_cast<char>(v >> 8));
}
void put32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
std::uint16_t get16(std::string_view s, std::size_t at) {
  if (at + 2 > s.size()) throw Error(Errc::invalid_value, "zip: truncated");
  return static_cast<std::uint16_t>(static_cast<unsigned char>(s[at]) | (static_cast<unsigned char>(s[at + 1]) << 8));
}
std::uint32_t get32(std::string_view s, std::size_t at) { return get16(s, at) | (std::uint32_t(get16(s, at + 2)) << 16); }

std::string deflate_raw(std::string_view data) {
  z_stream zs{};
  deflateInit2(&zs, 9, Z_DEFLATED, -MAX_WBITS, 8, Z_DEFAULT_STRATEGY);
  std::string out(deflateBound(&zs, static_cast<uLong>(data.size())), '\0');
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  deflate(&zs, Z_FINISH);
  out.resize(zs.total_out);
  deflateEnd(&zs);
  return out;
}

std::string inflate_raw(std::string_view data, std::uint32_t size) {
  std::string out(size, '\0');
  z_stream zs{};
  inflateInit2(&zs, -MAX_WBITS);
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = size;
  int rc = inflate(&zs, Z_FINISH);
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || zs.total_out != size) throw Error(Errc::invalid_value, "zip: bad deflate data");
  return out;
}

}  // namespace

void ZipWriter::add(std::string_view name, std::string_view data) {
  Entry e;
  e.name = std::string(name);
  e.crc = static_cast<std::uint32_t>(crc32(0, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size())));
  e.size = static_cast<std::uint32_t>(data.size());
  auto packed = deflate_raw(data);
  e.method = packed.size() < data.size() ? 8 : 0;
  std::string_view body = e.method == 8 ? std::string_view(packed) : data;
  e.compressed = static_cast<std::uint32_t>(body.size());
  e.offset = static_cast<std::uint32_t>(out_.size());

  put32(out_, 0x04034b50);
  put16(out_, 20);
  put16(out_, 0);
  put16(out_, e.method);
  put16(out_, kDosTime);
  put16(out_, kDosDate);
  put32(out_, e.crc);
  put32(out_, e.compressed);
  put32(out_, e.size);
  put16(out_, static_cast<std::uint16_t>(e.name.size()));
  put16(out_, 0);
  out_ += e.name;
  out_.append(body);
  entries_.push_back(std::move(e));
}

std::string ZipWriter::finish() {
  auto dir_start = static_cast<std::uint32_t>(out_.size());
  for (const auto& e : entries_) {
    put32(out_, 0x02014b50);
    put16(out_, 20);  // made by: MS-DOS, 2.0
    put16(out_, 20);
    put16(out_, 0);
    put16(out_, e.method);
    put16(out_, kDosTime);
    put16(out_, kDosDate);
    put32(out_, e.crc);
    put32(out_, e.compressed);
    put32(out_, e.size);
    put16(out_, static_cast<std::uint16_t>(e.name.size()));
    put16(out_, 0);
    put16(out_, 0);
    put16(out_, 0);
    put16(out_, 0);
    put32(out_, 0);
    put32(out_, e.offset);
    out_ += e.name;
  }
  auto dir_size = static_cast<std::uint32_t>(out_.size()) - dir_start;
  put32(out_, 0x06054b50);
  put16(out_, 0);
  put16(out_, 0);
  put16(out_, static_cast<std::uint16_t>(entries_.size()));
  put16(out_, static_cast<std::uint16_t>(entries_.size()));
  put32(out_, dir_size);
  put32(out_, dir_start);
  put16(out_, 0);
  entries_.clear();
  return std::move(out_);
}

std::vector<ZipEntry> read_zip(std::string_view s) {
  if (s.size() < 22) throw Error(Errc::invalid_value, "zip: too short");
  auto eocd = s.size() - 22;
  if (get32(s, eocd) != 0x06054b50) throw Error(Errc::invalid_value, "zip: no end record");
  auto count = get16(s, eocd + 10);
  std::size_t at = get32(s, eocd + 16);
  std::vector<ZipEntry> out;
  for (std::uint16_t i = 0; i < count; ++i) {
    if (get32(s, at) != 0x02014b50) throw Error(Errc::invalid_value, "zip: bad directory entry");
    auto method = get16(s, at + 10);
    auto crc = get32(s, at + 16);
    auto compressed = get32(s, at + 20);
    auto size = get32(s, at + 24);
    auto name_len = get16(s, at + 28);
    auto extra = get16(s, at + 30);
    auto comment = get16(s, at + 32);
    auto offset = get32(s, at + 42);
    if (at + 46 + name_len > s.size()) throw Error(Errc::invalid_value, "zip: truncated name");
    ZipEntry e{std::string(s.substr(at + 46, name_len)), {}};
    at += 46 + name_len + extra + comment;

    if (get32(s, offset) != 0x04034b50) throw Error(Errc::invalid_value, "zip: bad local header");
    auto data_at = offset + 30 + get16(s, offset + 26) + get16(s, offset + 28);
    if (data_at + compressed > s.size()) throw Error(Errc::invalid_value, "zip: truncated data");
    auto body = s.substr(data_at, compressed);
    if (method == 0) {
      e.data = std::string(body);
    } else if (method == 8) {
      e.data = inflate_raw(body, size);
    } else {
      throw Error(Errc::invalid_value, "zip: unsupported method");
    }
    if (crc32(0, reinterpret_cast<const Bytef*>(e.data.data()), static_cast<uInt>(e.data.size())) != crc) {
      throw Error(Errc::invalid_value, "zip: crc mismatch in " + e.name);
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace alex::harvest
