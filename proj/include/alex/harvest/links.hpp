#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "alex/catalog/record.hpp"
#include "alex/harvest/fetch.hpp"

namespace alex::harvest {

struct LinkRow {
  std::int64_t id = 0;
  std::string url;
  int status = 0;  // 0 when no response was received
  bool ok = false;
  std::string checked_at;  // ISO 8601 UTC
  std::string error;       // error code name, empty when ok
};

struct LinkReport {
  std::vector<LinkRow> rows;  // one per record, in input order
  std::size_t failures() const;
};

std::string utc_timestamp();

// Probes every original url. Never modifies the catalogue.
LinkReport check_links(const std::vector<catalog::TemplateRecord>& records, Fetcher& fetcher,
                       const std::function<std::string()>& clock = utc_timestamp);

}  // namespace alex::harvest
