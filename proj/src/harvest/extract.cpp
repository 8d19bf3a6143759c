#include "alex/harvest/extract.hpp"

#include <zlib.h>

#include <charconv>
#include <ctime>
#include <map>

#include "alex/error.hpp"
#include "alex/text/tokenize.hpp"
#include "alex/text/utf8.hpp"

namespace alex::harvest {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool pending = false;
  for (char c : s) {
    if (is_space(c)) {
      pending = !out.empty();
      continue;
    }
    if (pending) out += ' ';
    pending = false;
    out += c;
  }
  return out;
}

const std::map<std::string, char32_t, std::less<>>& entity_table() {
  static const std::map<std::string, char32_t, std::less<>> table{
      {"amp", U'&'},      {"lt", U'<'},       {"gt", U'>'},       {"quot", U'"'},     {"apos", U'\''},
      {"nbsp", 0xA0},     {"copy", 0xA9},     {"reg", 0xAE},      {"shy", 0xAD},      {"laquo", 0xAB},
      {"raquo", 0xBB},    {"eacute", 0xE9},   {"egrave", 0xE8},   {"ecirc", 0xEA},    {"euml", 0xEB},
      {"aacute", 0xE1},   {"agrave", 0xE0},   {"acirc", 0xE2},    {"auml", 0xE4},     {"ouml", 0xF6},
      {"uuml", 0xFC},     {"ccedil", 0xE7},   {"ntilde", 0xF1},   {"szlig", 0xDF},    {"iacute", 0xED},
      {"oacute", 0xF3},   {"uacute", 0xFA},   {"Eacute", 0xC9},   {"Auml", 0xC4},     {"Ouml", 0xD6},
      {"Uuml", 0xDC},     {"aelig", 0xE6},    {"AElig", 0xC6},    {"ndash", 0x2013},  {"mdash", 0x2014},
      {"lsquo", 0x2018},  {"rsquo", 0x2019},  {"ldquo", 0x201C},  {"rdquo", 0x201D},  {"hellip", 0x2026},
      {"middot", 0xB7},   {"sect", 0xA7},     {"para", 0xB6},     {"pound", 0xA3},    {"deg", 0xB0},
  };
  return table;
}

std::optional<std::string> parse_http_date(std::string_view v) {
  std::tm tm{};
  std::string s(v);
  if (!strptime(s.c_str(), "%a, %d %b %Y %H:%M:%S", &tm)) return std::nullopt;
  char buf[40];  // room for any int fields, keeps -Wformat-truncation quiet
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday);
  return std::string(buf);
}

// Position of the tag name start after '<', case-insensitive match of `name`
// followed by a delimiter.
bool tag_is(std::string_view html, std::size_t lt, std::string_view name) {
  if (html.size() < lt + 1 + name.size()) return false;
  auto candidate = text::fold_case(html.substr(lt + 1, name.size()));
  if (candidate != name) return false;
  if (html.size() == lt + 1 + name.size()) return true;
  char d = html[lt + 1 + name.size()];
  return d == '>' || d == '/' || is_space(d);
}

std::size_t find_tag(std::string_view html, std::string_view name, std::size_t from) {
  while (true) {
    auto lt = html.find('<', from);
    if (lt == std::string_view::npos) return lt;
    if (tag_is(html, lt, name)) return lt;
    from = lt + 1;
  }
}

bool is_block(std::string_view name) {
  static const char* blocks[] = {"p", "div", "h1", "h2", "h3", "h4", "h5", "h6", "li", "ul", "ol", "tr", "table",
                                 "blockquote", "pre", "hr", "section", "article", "dd", "dt", "dl", "title", "body"};
  for (auto b : blocks) {
    if (name == b) return true;
  }
  return false;
}

}  // namespace

std::string decode_entities(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    if (s[i] != '&') {
      out += s[i++];
      continue;
    }
    auto semi = s.find(';', i);
    if (semi == std::string_view::npos || semi - i > 12) {
      out += s[i++];
      continue;
    }
    auto name = s.substr(i + 1, semi - i - 1);
    std::optional<char32_t> cp;
    if (name.size() > 1 && name[0] == '#') {
      bool hex = name[1] == 'x' || name[1] == 'X';
      auto digits = name.substr(hex ? 2 : 1);
      std::uint32_t v = 0;
      auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v, hex ? 16 : 10);
      if (ec == std::errc() && p == digits.data() + digits.size() && !digits.empty()) {
        cp = (v == 0 || v > 0x10FFFF || (v >= 0xD800 && v <= 0xDFFF)) ? 0xFFFD : v;
      }
    } else if (auto it = entity_table().find(name); it != entity_table().end()) {
      cp = it->second;
    }
    if (!cp) {
      out += s[i++];
      continue;
    }
    text::append_utf8(out, *cp);
    i = semi + 1;
  }
  return out;
}

std::string html_to_text(std::string_view html) {
  std::string out;
  std::string run;  // inline text since the last break
  bool in_pre = false;
  auto flush = [&](std::string_view sep) {
    auto t = in_pre ? run : collapse_whitespace(run);
    run.clear();
    if (!t.empty()) out += decode_entities(t);
    if (!out.empty() && !out.ends_with(sep) && !out.ends_with("\n\n")) out += sep;
  };
  for (std::size_t i = 0; i < html.size();) {
    if (html[i] != '<') {
      run += html[i++];
      continue;
    }
    if (html.substr(i, 4) == "<!--") {
      auto end = html.find("-->", i + 4);
      i = end == std::string_view::npos ? html.size() : end + 3;
      continue;
    }
    auto gt = html.find('>', i);
    if (gt == std::string_view::npos) {
      run += html.substr(i);
      break;
    }
    auto tag = html.substr(i + 1, gt - i - 1);
    bool closing = !tag.empty() && tag[0] == '/';
    if (closing) tag.remove_prefix(1);
    auto name_end = tag.find_first_of(" \t\r\n/>");
    auto name = text::fold_case(tag.substr(0, name_end));
    i = gt + 1;

    if (!closing && (name == "script" || name == "style" || name == "head")) {
      auto end = find_tag(html, "/" + name, i);
      if (end == std::string_view::npos) break;
      auto close = html.find('>', end);
      i = close == std::string_view::npos ? html.size() : close + 1;
      continue;
    }
    if (name == "br") {
      flush("\n");
    } else if (is_block(name)) {
      flush("\n\n");
      if (name == "pre") in_pre = !closing;
    }
  }
  flush("\n");
  return out;
}

std::string gunzip(std::string_view data, std::uint64_t max_bytes) {
  z_stream zs{};
  if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK) throw Error(Errc::conversion_unsupported, "cannot start gzip decoder");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  std::string out;
  char buf[1 << 15];
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = reinterpret_cast<Bytef*>(buf);
    zs.avail_out = sizeof buf;
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      throw Error(Errc::conversion_unsupported, "not a readable gzip stream");
    }
    out.append(buf, sizeof buf - zs.avail_out);
    if (out.size() > max_bytes) {
      inflateEnd(&zs);
      throw Error(Errc::oversize, "gzip content exceeds the size limit");
    }
    if (rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0) {
      inflateEnd(&zs);
      throw Error(Errc::conversion_unsupported, "truncated gzip stream");
    }
  }
  inflateEnd(&zs);
  return out;
}

ExtractedMetadata extract_metadata(const FetchResult& f) {
  ExtractedMetadata m;
  m.url = f.url;
  m.mime_type = f.mime_type;
  m.length_bytes = f.length_bytes;
  if (f.last_modified) {
    m.date = parse_http_date(*f.last_modified);
    if (m.date) m.year = std::stoi(m.date->substr(0, 4));
  }

  bool html = f.mime_type == "text/html" || f.mime_type == "application/xhtml+xml";
  if (html || f.mime_type.starts_with("text/")) text::require_utf8(f.body);
  if (html) {
    auto open = find_tag(f.body, "title", 0);
    if (open != std::string::npos) {
      auto start = f.body.find('>', open);
      auto close = start == std::string::npos ? std::string::npos : find_tag(f.body, "/title", start);
      if (close != std::string::npos) {
        auto title = collapse_whitespace(decode_entities(std::string_view(f.body).substr(start + 1, close - start - 1)));
        if (!title.empty()) m.title = std::move(title);
      }
    }
  } else if (f.mime_type == "text/plain") {
    std::string_view body = f.body;
    while (!body.empty()) {
      auto nl = body.find('\n');
      auto line = body.substr(0, nl);
      body = nl == std::string_view::npos ? std::string_view{} : body.substr(nl + 1);
      auto trimmed = collapse_whitespace(line);
      if (!trimmed.empty()) {
        m.title = std::string(text::utf8_prefix(trimmed, kMaxPlainTitleChars));
        break;
      }
    }
  }
  return m;
}

std::string document_text(const FetchResult& f) {
  auto as_text = [](const std::string& mime, std::string body) -> std::string {
    if (mime == "text/plain") {
      text::require_utf8(body);
      return body;
    }
    if (mime == "text/html" || mime == "application/xhtml+xml") {
      text::require_utf8(body);
      return html_to_text(body);
    }
    throw Error(Errc::conversion_unsupported, "cannot archive content of type " + mime);
  };
  if (f.mime_type == "application/gzip" || f.mime_type == "application/x-gzip") {
    auto inner = gunzip(f.body);
    auto mime = sniff_mime_type(inner);
    return as_text(mime, std::move(inner));
  }
  return as_text(f.mime_type, f.body);
}

}  // namespace alex::harvest
