#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "alex/service/config.hpp"

namespace alex::cli {

inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kUsage = 2;

struct Io {
  std::istream& in;
  std::ostream& out;  // data
  std::ostream& err;  // diagnostics, prompts
  service::EnvLookup env = service::process_env;
  // Called by `serve` once the port is bound; returning stops the server.
  // Empty means wait for SIGINT or SIGTERM.
  std::function<void(int port)> serve_until;
};

// args[0] is the program name. Returns the exit code.
int run(const std::vector<std::string>& args, Io io);

}  // namespace alex::cli
