#include "alex/harvest/links.hpp"

#include <chrono>
#include <ctime>

#include "alex/error.hpp"

namespace alex::harvest {

std::size_t LinkReport::failures() const {
  std::size_t n = 0;
  for (const auto& r : rows) n += !r.ok;
  return n;
}

std::string utc_timestamp() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

LinkReport check_links(const std::vector<catalog::TemplateRecord>& records, Fetcher& fetcher,
                       const std::function<std::string()>& clock) {
  LinkReport report;
  for (const auto& r : records) {
    LinkRow row;
    row.id = r.id;
    row.url = r.url;
    try {
      auto res = fetcher.probe(r.url);
      row.status = res.status;
      row.ok = true;
    } catch (const Error& e) {
      row.status = e.status();
      row.error = std::string(to_string(e.code()));
    }
    row.checked_at = clock();
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace alex::harvest
