#include "alex/catalog/policy.hpp"

#include <algorithm>
#include <cctype>

#include "alex/error.hpp"

namespace alex::catalog {

namespace {

bool is_tchar(char c) {
  if (std::isalnum(static_cast<unsigned char>(c))) return true;
  switch (c) {
    case '!': case '#': case '$': case '%': case '&': case '\'': case '*': case '+':
    case '-': case '.': case '^': case '_': case '`': case '|': case '~':
      return true;
    default:
      return false;
  }
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

void skip_ows(std::string_view s, std::size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

std::string_view read_token(std::string_view s, std::size_t& i) {
  auto start = i;
  while (i < s.size() && is_tchar(s[i])) ++i;
  return s.substr(start, i - start);
}

[[noreturn]] void malformed(std::string_view s) {
  throw Error(Errc::validation, "malformed media type '" + std::string(s) + "'");
}

bool listed(const std::vector<std::string>& list, const std::string& essence) {
  return std::find(list.begin(), list.end(), essence) != list.end();
}

}  // namespace

std::string_view to_string(PolicyRule r) noexcept {
  switch (r) {
    case PolicyRule::license: return "license";
    case PolicyRule::incomplete: return "incomplete";
    case PolicyRule::format_unalterable: return "format-unalterable";
    case PolicyRule::format_unsupported: return "format-unsupported";
  }
  return "license";
}

std::optional<License> parse_license(std::string_view s) noexcept {
  if (s == "public-domain") return License::public_domain;
  if (s == "free") return License::free;
  if (s == "restricted") return License::restricted;
  return std::nullopt;
}

MediaType parse_media_type(std::string_view s) {
  MediaType mt;
  std::size_t i = 0;
  skip_ows(s, i);
  auto type = read_token(s, i);
  if (type.empty() || i >= s.size() || s[i] != '/') malformed(s);
  ++i;
  auto subtype = read_token(s, i);
  if (subtype.empty()) malformed(s);
  mt.type = lower(type);
  mt.subtype = lower(subtype);
  skip_ows(s, i);
  while (i < s.size()) {
    if (s[i] != ';') malformed(s);
    ++i;
    skip_ows(s, i);
    auto name = read_token(s, i);
    if (name.empty() || i >= s.size() || s[i] != '=') malformed(s);
    ++i;
    std::string value;
    if (i < s.size() && s[i] == '"') {
      ++i;
      bool closed = false;
      while (i < s.size()) {
        char c = s[i++];
        if (c == '\\' && i < s.size()) {
          value += s[i++];
        } else if (c == '"') {
          closed = true;
          break;
        } else {
          value += c;
        }
      }
      if (!closed) malformed(s);
    } else {
      auto tok = read_token(s, i);
      if (tok.empty()) malformed(s);
      value = std::string(tok);
    }
    mt.params.emplace_back(lower(name), std::move(value));
    skip_ows(s, i);
  }
  return mt;
}

bool is_valid_media_type(std::string_view s) noexcept {
  try {
    parse_media_type(s);
    return true;
  } catch (const Error&) {
    return false;
  }
}

PolicyDecision evaluate_policy(std::string_view mime_type, License license, bool complete,
                               const PolicyConfig& config) {
  const auto essence = parse_media_type(mime_type).essence();

  PolicyDecision d;
  if (license == License::restricted) d.reasons.push_back(PolicyRule::license);
  if (!complete) d.reasons.push_back(PolicyRule::incomplete);

  std::optional<int> rank;
  if (essence == "text/plain") {
    rank = 1;
  } else if (essence == "text/html" || essence == "application/xhtml+xml") {
    rank = 2;
  } else if (listed(config.compressed_types, essence)) {
    rank = 3;
  } else if (listed(config.word_processor_types, essence)) {
    rank = 4;
  } else if (listed(config.unalterable_types, essence)) {
    d.reasons.push_back(PolicyRule::format_unalterable);
  } else {
    d.reasons.push_back(PolicyRule::format_unsupported);
  }

  d.accepted = d.reasons.empty();
  if (d.accepted) d.preference_rank = rank;
  return d;
}

}  // namespace alex::catalog
