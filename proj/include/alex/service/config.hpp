#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "alex/bookcase/key_hash.hpp"

namespace alex::service {

struct ServiceConfig {
  std::string bind_address = "127.0.0.1";
  int port = 8080;
  std::filesystem::path data_root;
  std::string admin_token;
  std::chrono::seconds token_ttl = std::chrono::hours(24);
  std::chrono::milliseconds fetch_timeout{30'000};
  bool obey_robots = true;
  std::filesystem::path outbox;      // <data_root>/outbox.jsonl when empty
  std::string public_base;           // http://<bind>:<port> when empty
  std::filesystem::path static_dir;  // built UI assets, served under /static
  bookcase::KeyHashParams key_hashing = bookcase::KeyHashParams::interactive();

  std::string base_url() const;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

// The process environment.
std::optional<std::string> process_env(const std::string& name);

// Reads the JSON config file (when given), then applies ALEX_* overrides:
//
//   ALEX_DATA_ROOT  ALEX_BIND  ALEX_PORT  ALEX_ADMIN_TOKEN
//   ALEX_TOKEN_TTL_SECONDS  ALEX_FETCH_TIMEOUT_MS  ALEX_OBEY_ROBOTS
//   ALEX_OUTBOX  ALEX_PUBLIC_BASE  ALEX_STATIC_DIR
//
// File keys are the same names, lowercased, without the prefix
// (data_root, bind, port, ...). Throws Errc::validation on bad values.
ServiceConfig load_config(const std::optional<std::filesystem::path>& file, const EnvLookup& env = process_env);

// Data root exists (or can be made) and is writable; admin token set.
void check_config(const ServiceConfig& config);

}  // namespace alex::service
