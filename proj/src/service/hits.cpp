#include "alex/service/hits.hpp"

#include <ctime>

#include "alex/fsutil.hpp"

namespace alex::service {

using nlohmann::json;

HitCounter::HitCounter(std::filesystem::path file, Clock clock) : file_(std::move(file)), clock_(std::move(clock)) {
  if (!std::filesystem::exists(file_)) return;
  auto doc = json::parse(read_file(file_), nullptr, false);
  if (doc.is_discarded() || !doc.contains("days")) return;  // start over rather than refuse to serve
  for (const auto& [day, routes] : doc["days"].items()) {
    for (const auto& [route, n] : routes["routes"].items()) days_[day][route] = n.get<std::uint64_t>();
  }
}

bool HitCounter::counted(std::string_view path) noexcept {
  return !(path == "/robots.txt" || path == "/static" || path.starts_with("/static/") || path == "/favicon.ico");
}

std::string HitCounter::today() const {
  auto t = std::chrono::system_clock::to_time_t(clock_ ? clock_() : std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[16];
  std::strftime(buf, sizeof buf, "%Y-%m-%d", &tm);
  return buf;
}

void HitCounter::record(const std::string& route, std::string_view path) {
  if (!counted(path)) return;
  auto day = today();
  std::lock_guard g(mutex_);
  ++days_[day][route];
  write_file_atomic(file_, build().dump(1));
}

std::uint64_t HitCounter::total(const std::string& day) const {
  std::lock_guard g(mutex_);
  auto it = days_.find(day);
  if (it == days_.end()) return 0;
  std::uint64_t n = 0;
  for (const auto& [r, c] : it->second) n += c;
  return n;
}

json HitCounter::to_json() const {
  std::lock_guard g(mutex_);
  return build();
}

json HitCounter::build() const {
  json days = json::object();
  for (const auto& [d, routes] : days_) {
    std::uint64_t total = 0;
    for (const auto& [r, n] : routes) total += n;
    days[d] = {{"total", total}, {"routes", routes}};
  }
  return {{"days", days}};
}

}  // namespace alex::service
