#include "alex/service/config.hpp"

#include <unistd.h>

#include <cstdlib>
#include <json.hpp>

#include "alex/error.hpp"
#include "alex/fsutil.hpp"

namespace alex::service {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

long long to_integer(const std::string& name, const std::string& value, long long lo, long long hi) {
  std::size_t used = 0;
  long long n = 0;
  try {
    n = std::stoll(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size() || n < lo || n > hi) {
    throw Error(Errc::validation, name + " must be an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                      "], got '" + value + "'");
  }
  return n;
}

bool to_bool(const std::string& name, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes") return true;
  if (value == "0" || value == "false" || value == "no") return false;
  throw Error(Errc::validation, name + " must be true or false, got '" + value + "'");
}

// One setting from either source, as text.
void apply(ServiceConfig& c, const std::string& key, const std::string& value) {
  if (key == "data_root") {
    c.data_root = value;
  } else if (key == "bind") {
    c.bind_address = value;
  } else if (key == "port") {
    c.port = static_cast<int>(to_integer(key, value, 0, 65535));
  } else if (key == "admin_token") {
    c.admin_token = value;
  } else if (key == "token_ttl_seconds") {
    c.token_ttl = std::chrono::seconds(to_integer(key, value, 1, 365LL * 24 * 3600));
  } else if (key == "fetch_timeout_ms") {
    c.fetch_timeout = std::chrono::milliseconds(to_integer(key, value, 1, 600'000));
  } else if (key == "obey_robots") {
    c.obey_robots = to_bool(key, value);
  } else if (key == "outbox") {
    c.outbox = value;
  } else if (key == "public_base") {
    c.public_base = value;
  } else if (key == "static_dir") {
    c.static_dir = value;
  } else {
    throw Error(Errc::validation, "unknown configuration key '" + key + "'");
  }
}

const char* kKeys[] = {"data_root",        "bind",        "port",   "admin_token", "token_ttl_seconds",
                       "fetch_timeout_ms", "obey_robots", "outbox", "public_base", "static_dir"};

}  // namespace

std::string ServiceConfig::base_url() const {
  if (!public_base.empty()) return public_base;
  return "http://" + bind_address + ":" + std::to_string(port);
}

std::optional<std::string> process_env(const std::string& name) {
  if (const char* v = std::getenv(name.c_str())) return std::string(v);
  return std::nullopt;
}

ServiceConfig load_config(const std::optional<fs::path>& file, const EnvLookup& env) {
  ServiceConfig c;
  if (file) {
    auto doc = json::parse(read_file(*file), nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
      throw Error(Errc::validation, file->string() + " is not a JSON object");
    }
    for (const auto& [key, value] : doc.items()) {
      apply(c, key, value.is_string() ? value.get<std::string>() : value.dump());
    }
  }
  for (const char* key : kKeys) {
    std::string name = "ALEX_";
    for (const char* p = key; *p; ++p) name += static_cast<char>(std::toupper(static_cast<unsigned char>(*p)));
    if (auto v = env(name)) apply(c, key, *v);
  }
  return c;
}

void check_config(const ServiceConfig& c) {
  if (c.data_root.empty()) throw Error(Errc::validation, "no data root configured (ALEX_DATA_ROOT)");
  if (c.admin_token.empty()) throw Error(Errc::validation, "no admin token configured (ALEX_ADMIN_TOKEN)");
  std::error_code ec;
  fs::create_directories(c.data_root, ec);
  if (!fs::is_directory(c.data_root)) throw Error(Errc::storage, c.data_root.string() + " is not a directory");
  if (::access(c.data_root.c_str(), W_OK) != 0) throw Error(Errc::storage, c.data_root.string() + " is not writable");
}

}  // namespace alex::service
