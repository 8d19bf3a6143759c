#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "alex/store/catalogue.hpp"

namespace alex::harvest {

struct ManifestEntry {
  std::string path;
  std::uint64_t size = 0;
  bool operator==(const ManifestEntry&) const = default;
};

struct InstantLibrary {
  std::string zip;
  std::vector<ManifestEntry> manifest;
  // One `path<TAB>size` line per entry.
  std::string manifest_text() const;
};

// Every archived text whose directory slug starts with slugify(collection),
// with its template record (.tpl) and descriptor (.src) beside it, in path
// order. Throws Errc::empty_collection when nothing matches.
InstantLibrary build_instant_library(store::Catalogue& catalogue, std::string_view collection,
                                     std::string_view service_base);

}  // namespace alex::harvest
