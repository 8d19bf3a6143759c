#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "alex/harvest/url.hpp"

namespace alex::harvest {

struct FetchOptions {
  int max_redirects = 5;
  std::chrono::milliseconds timeout{30'000};
  std::string user_agent = "AlexCatalogueHarvester/1.0";
  bool obey_robots = true;
  std::uint64_t max_body_bytes = 256ull << 20;
};

struct FetchResult {
  std::string url;  // after redirects
  int status = 0;
  std::string mime_type;  // type/subtype, from Content-Type or sniffed
  std::uint64_t length_bytes = 0;
  std::optional<std::string> last_modified;  // raw header value
  std::string body;
  std::vector<std::pair<std::string, std::string>> headers;  // as received
};

// Guesses a media type from leading bytes.
std::string sniff_mime_type(std::string_view body);

// Rules from one robots.txt for one user agent.
class RobotsRules {
 public:
  static RobotsRules parse(std::string_view robots_txt, std::string_view user_agent);
  // Longest matching rule decides; Allow wins a tie; no match allows.
  bool allows(std::string_view target) const;

 private:
  std::vector<std::pair<bool, std::string>> rules_;  // (allow, path prefix)
};

// HTTP(S) client with redirect, timeout and robots handling. Thread-safe.
//
// Errors: Errc::unsupported_scheme, Errc::network, Errc::timeout,
// Errc::not_found (404) or Errc::http_status for other non-2xx statuses,
// Errc::redirect_limit, Errc::redirect_loop, Errc::robots_disallowed.
class Fetcher {
 public:
  explicit Fetcher(FetchOptions options = {});

  const FetchOptions& options() const noexcept { return options_; }

  FetchResult fetch(const std::string& url);
  // HEAD, repeated as GET when the server refuses HEAD.
  FetchResult probe(const std::string& url);

 private:
  FetchResult request(const std::string& url, bool head);
  bool robots_allow(const Url& url);

  FetchOptions options_;
  std::mutex robots_mutex_;
  std::map<std::string, RobotsRules> robots_;
};

}  // namespace alex::harvest
