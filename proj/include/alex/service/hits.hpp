#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <string>

#include <json.hpp>

namespace alex::service {

// Requests per route per UTC day, kept in a JSON file. Paths under /static/
// and /robots.txt are never counted.
class HitCounter {
 public:
  using Clock = std::function<std::chrono::system_clock::time_point()>;

  explicit HitCounter(std::filesystem::path file, Clock clock = {});

  static bool counted(std::string_view path) noexcept;

  // `route` is the route pattern, e.g. "GET /texts/{id}".
  void record(const std::string& route, std::string_view path);
  std::uint64_t total(const std::string& day) const;
  std::string today() const;
  nlohmann::json to_json() const;

 private:
  nlohmann::json build() const;

  std::filesystem::path file_;
  Clock clock_;
  mutable std::mutex mutex_;
  std::map<std::string, std::map<std::string, std::uint64_t>> days_;
};

}  // namespace alex::service
