#include "alex/harvest/instant_library.hpp"

#include <algorithm>

#include "alex/catalog/archive_layout.hpp"
#include "alex/catalog/template_format.hpp"
#include "alex/error.hpp"
#include "alex/harvest/zip.hpp"
#include "alex/search/descriptor.hpp"

namespace alex::harvest {

std::string InstantLibrary::manifest_text() const {
  std::string out;
  for (const auto& e : manifest) out += e.path + "\t" + std::to_string(e.size) + "\n";
  return out;
}

InstantLibrary build_instant_library(store::Catalogue& catalogue, std::string_view collection,
                                     std::string_view service_base) {
  auto prefix = catalog::slugify(collection);
  auto snap = catalogue.snapshot();
  std::vector<std::pair<std::string, std::string>> files;
  if (!prefix.empty()) {
    for (const auto& [id, r] : snap->metadata.records()) {
      if (!catalog::slugify(r.directory).starts_with(prefix) || !snap->content.count(id)) continue;
      files.emplace_back(catalog::archive_path_for(r), catalogue.archived_text(id));
      files.emplace_back(catalog::archive_sibling_path(r, ".tpl"), catalog::render_template(r));
      files.emplace_back(catalog::archive_sibling_path(r, ".src"),
                         search::render_descriptor(search::make_descriptor(r, service_base)));
    }
  }
  if (files.empty()) throw Error(Errc::empty_collection, "no archived texts in collection '" + std::string(collection) + "'");
  std::sort(files.begin(), files.end());

  InstantLibrary lib;
  ZipWriter zip;
  for (const auto& [path, data] : files) {
    zip.add(path, data);
    lib.manifest.push_back({path, data.size()});
  }
  lib.zip = zip.finish();
  return lib;
}

}  // namespace alex::harvest
