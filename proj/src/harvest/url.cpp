#include "alex/harvest/url.hpp"

#include <vector>

#include <charconv>

#include "alex/error.hpp"
#include "alex/text/tokenize.hpp"

namespace alex::harvest {

std::string Url::origin() const { return scheme + "://" + host + ":" + std::to_string(port); }

std::string Url::str() const {
  bool default_port = (scheme == "http" && port == 80) || (scheme == "https" && port == 443);
  return scheme + "://" + host + (default_port ? "" : ":" + std::to_string(port)) + target;
}

Url parse_url(std::string_view s) {
  auto sep = s.find("://");
  if (sep == std::string_view::npos || sep == 0) throw Error(Errc::validation, "not an absolute URL: '" + std::string(s) + "'");
  Url u;
  u.scheme = text::fold_case(s.substr(0, sep));
  if (u.scheme != "http" && u.scheme != "https") {
    throw Error(Errc::unsupported_scheme, "only http and https can be fetched: '" + std::string(s) + "'");
  }
  auto rest = s.substr(sep + 3);
  auto slash = rest.find_first_of("/?#");
  auto authority = rest.substr(0, slash);
  auto target = slash == std::string_view::npos ? std::string_view("/") : rest.substr(slash);
  if (auto hash = target.find('#'); hash != std::string_view::npos) target = target.substr(0, hash);
  u.target = target.empty() || target.front() != '/' ? "/" + std::string(target) : std::string(target);
  if (auto at = authority.rfind('@'); at != std::string_view::npos) authority = authority.substr(at + 1);

  u.port = u.scheme == "https" ? 443 : 80;
  auto colon = authority.rfind(':');
  if (colon != std::string_view::npos && authority.find(']') == std::string_view::npos) {
    auto port = authority.substr(colon + 1);
    unsigned value = 0;
    auto [p, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
    if (ec != std::errc() || p != port.data() + port.size() || value == 0 || value > 65535) {
      throw Error(Errc::validation, "bad port in URL: '" + std::string(s) + "'");
    }
    u.port = static_cast<std::uint16_t>(value);
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) throw Error(Errc::validation, "URL has no host: '" + std::string(s) + "'");
  u.host = text::fold_case(authority);
  return u;
}

namespace {

// Drops "." and ".." segments from the path part of a target.
std::string remove_dot_segments(const std::string& target) {
  auto q = target.find('?');
  std::string path = target.substr(0, q);
  std::vector<std::string> segs;
  std::size_t start = 1;
  while (start <= path.size()) {
    auto slash = path.find('/', start);
    auto seg = path.substr(start, slash == std::string::npos ? std::string::npos : slash - start);
    bool last = slash == std::string::npos;
    if (seg == "..") {
      if (!segs.empty()) segs.pop_back();
      if (last) segs.emplace_back();
    } else if (seg == ".") {
      if (last) segs.emplace_back();
    } else {
      segs.push_back(seg);
    }
    if (last) break;
    start = slash + 1;
  }
  std::string out;
  for (const auto& s : segs) out += "/" + s;
  if (out.empty()) out = "/";
  return q == std::string::npos ? out : out + target.substr(q);
}

}  // namespace

Url resolve_url(const Url& base, std::string_view ref) {
  if (ref.find("://") != std::string_view::npos) return parse_url(ref);
  if (ref.starts_with("//")) return parse_url(base.scheme + ":" + std::string(ref));
  Url u = base;
  if (ref.starts_with('/')) {
    u.target = std::string(ref);
  } else if (ref.starts_with('?')) {
    u.target = base.target.substr(0, base.target.find('?')) + std::string(ref);
  } else {
    auto path = base.target.substr(0, base.target.find('?'));
    u.target = path.substr(0, path.rfind('/') + 1) + std::string(ref);
  }
  u.target = remove_dot_segments(u.target);
  return u;
}

}  // namespace alex::harvest
