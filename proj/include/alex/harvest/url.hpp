#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace alex::harvest {

struct Url {
  std::string scheme;  // lowercased
  std::string host;
  std::uint16_t port = 0;
  std::string target;  // path plus query, at least "/"

  std::string origin() const;  // scheme://host:port
  std::string str() const;
  bool operator==(const Url&) const = default;
};

// Absolute URLs only. Throws Errc::unsupported_scheme for anything but
// http and https, Errc::validation when malformed.
Url parse_url(std::string_view s);

// Resolves a Location header against the URL it came from.
Url resolve_url(const Url& base, std::string_view reference);

}  // namespace alex::harvest
