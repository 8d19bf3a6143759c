#include "alex/harvest/fetch.hpp"

#include <httplib.h>

#include <set>

#include "alex/catalog/policy.hpp"
#include "alex/error.hpp"
#include "alex/text/tokenize.hpp"
#include "alex/text/utf8.hpp"

namespace alex::harvest {

namespace {

bool is_redirect(int status) { return status == 301 || status == 302 || status == 303 || status == 307 || status == 308; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::unique_ptr<httplib::Client> make_client(const Url& u, const FetchOptions& o) {
  auto cli = std::make_unique<httplib::Client>(u.origin());
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(o.timeout);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(o.timeout - secs);
  cli->set_connection_timeout(secs.count(), usecs.count());
  cli->set_read_timeout(secs.count(), usecs.count());
  cli->set_write_timeout(secs.count(), usecs.count());
  cli->set_follow_location(false);
  cli->set_keep_alive(false);
  return cli;
}

}  // namespace

std::string sniff_mime_type(std::string_view body) {
  auto head = text::fold_case(trim(body.substr(0, 512)).substr(0, 64));
  if (body.starts_with("%PDF")) return "application/pdf";
  if (body.size() >= 2 && static_cast<unsigned char>(body[0]) == 0x1f && static_cast<unsigned char>(body[1]) == 0x8b) {
    return "application/gzip";
  }
  if (body.starts_with("PK\x03\x04")) return "application/zip";
  if (body.starts_with("{\\rtf")) return "application/rtf";
  if (body.starts_with("\xD0\xCF\x11\xE0")) return "application/msword";
  if (head.starts_with("<!doctype html") || head.starts_with("<html")) return "text/html";
  if (text::is_valid_utf8(body)) return "text/plain";
  return "application/octet-stream";
}

RobotsRules RobotsRules::parse(std::string_view robots_txt, std::string_view user_agent) {
  auto agent = text::fold_case(user_agent);
  auto product = agent.substr(0, agent.find('/'));

  struct Group {
    std::vector<std::string> agents;
    std::vector<std::pair<bool, std::string>> rules;
  };
  std::vector<Group> groups;
  bool in_agents = false;
  while (!robots_txt.empty()) {
    auto nl = robots_txt.find('\n');
    auto line = robots_txt.substr(0, nl);
    robots_txt = nl == std::string_view::npos ? std::string_view{} : robots_txt.substr(nl + 1);
    line = trim(line.substr(0, line.find('#')));
    auto colon = line.find(':');
    if (colon == std::string_view::npos) continue;
    auto key = text::fold_case(trim(line.substr(0, colon)));
    auto value = std::string(trim(line.substr(colon + 1)));
    if (key == "user-agent") {
      if (!in_agents) groups.emplace_back();
      groups.back().agents.push_back(text::fold_case(value));
      in_agents = true;
    } else if ((key == "allow" || key == "disallow") && !groups.empty()) {
      in_agents = false;
      if (!value.empty()) groups.back().rules.emplace_back(key == "allow", value);
    } else {
      in_agents = false;
    }
  }

  RobotsRules out;
  const Group* wildcard = nullptr;
  for (const auto& g : groups) {
    for (const auto& a : g.agents) {
      if (a == "*") {
        if (!wildcard) wildcard = &g;
      } else if (!product.empty() && product.find(a) != std::string::npos) {
        out.rules_ = g.rules;
        return out;
      }
    }
  }
  if (wildcard) out.rules_ = wildcard->rules;
  return out;
}

bool RobotsRules::allows(std::string_view target) const {
  std::size_t best = 0;
  bool allow = true;
  for (const auto& [is_allow, prefix] : rules_) {
    if (!target.starts_with(prefix)) continue;
    if (prefix.size() > best || (prefix.size() == best && is_allow)) {
      best = prefix.size();
      allow = is_allow;
    }
  }
  return allow;
}

Fetcher::Fetcher(FetchOptions options) : options_(std::move(options)) {}

bool Fetcher::robots_allow(const Url& url) {
  if (!options_.obey_robots) return true;
  auto key = url.origin();
  {
    std::lock_guard g(robots_mutex_);
    if (auto it = robots_.find(key); it != robots_.end()) return it->second.allows(url.target);
  }
  RobotsRules rules;
  auto cli = make_client(url, options_);
  httplib::Headers headers{{"User-Agent", options_.user_agent}};
  if (auto res = cli->Get("/robots.txt", headers); res && res->status >= 200 && res->status < 300) {
    rules = RobotsRules::parse(res->body, options_.user_agent);
  }
  std::lock_guard g(robots_mutex_);
  return robots_.emplace(key, rules).first->second.allows(url.target);
}

FetchResult Fetcher::request(const std::string& start, bool head) {
  auto url = parse_url(start);
  std::set<std::string> seen{url.str()};
  for (int redirects = 0;; ++redirects) {
    if (!robots_allow(url)) {
      throw Error(Errc::robots_disallowed, url.str() + " is excluded by the site's robots.txt");
    }
    auto cli = make_client(url, options_);
    httplib::Headers headers{{"User-Agent", options_.user_agent}, {"Accept", "*/*"}};
    auto began = std::chrono::steady_clock::now();
    httplib::Result res;
    if (head) {
      res = cli->Head(url.target, headers);
    } else {
      std::string body;
      bool oversize = false;
      res = cli->Get(url.target, headers, [&](const char* data, std::size_t n) {
        if (body.size() + n > options_.max_body_bytes) {
          oversize = true;
          return false;
        }
        body.append(data, n);
        return true;
      });
      if (oversize) throw Error(Errc::oversize, url.str() + " is larger than the fetch limit");
      if (res) res->body = std::move(body);
    }
    if (!res) {
      auto err = res.error();
      auto elapsed = std::chrono::steady_clock::now() - began;
      if (err == httplib::Error::ConnectionTimeout ||
          ((err == httplib::Error::Read || err == httplib::Error::Write) && elapsed >= options_.timeout * 9 / 10)) {
        throw Error(Errc::timeout, url.str() + ": timed out");
      }
      throw Error(Errc::network, url.str() + ": " + httplib::to_string(err));
    }

    if (is_redirect(res->status) && res->has_header("Location")) {
      auto next = resolve_url(url, res->get_header_value("Location"));
      if (!seen.insert(next.str()).second) throw Error(Errc::redirect_loop, "redirect loop at " + next.str(), res->status);
      if (redirects + 1 > options_.max_redirects) {
        throw Error(Errc::redirect_limit, "more than " + std::to_string(options_.max_redirects) + " redirects from " + start,
                    res->status);
      }
      url = std::move(next);
      continue;
    }
    if (res->status == 404) throw Error(Errc::not_found, url.str() + ": 404 Not Found", 404);
    if (res->status < 200 || res->status >= 300) {
      throw Error(Errc::http_status, url.str() + ": HTTP status " + std::to_string(res->status), res->status);
    }

    FetchResult out;
    out.url = url.str();
    out.status = res->status;
    for (const auto& [k, v] : res->headers) out.headers.emplace_back(k, v);
    if (res->has_header("Last-Modified")) out.last_modified = res->get_header_value("Last-Modified");
    out.body = std::move(res->body);
    out.length_bytes = out.body.size();
    auto content_type = res->get_header_value("Content-Type");
    try {
      out.mime_type = content_type.empty() ? sniff_mime_type(out.body) : catalog::parse_media_type(content_type).essence();
    } catch (const Error&) {
      out.mime_type = sniff_mime_type(out.body);
    }
    return out;
  }
}

FetchResult Fetcher::fetch(const std::string& url) { return request(url, false); }

FetchResult Fetcher::probe(const std::string& url) {
  try {
    return request(url, true);
  } catch (const Error& e) {
    if (e.code() == Errc::http_status && (e.status() == 405 || e.status() == 501 || e.status() == 403)) {
      return request(url, false);
    }
    throw;
  }
}

}  // namespace alex::harvest
