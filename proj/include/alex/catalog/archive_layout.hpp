#pragma once

#include <string>
#include <string_view>

#include "alex/catalog/record.hpp"

namespace alex::catalog {

// Lowercase ASCII alphanumerics; every run of anything else becomes a single
// hyphen; no leading or trailing hyphen.
std::string slugify(std::string_view s);

// `<directory-slug>/<id>-<title-slug>.txt`, relative to the archive root.
std::string archive_path_for(const TemplateRecord& record);

// Same stem as archive_path_for with a different extension (".tpl", ".src").
std::string archive_sibling_path(const TemplateRecord& record, std::string_view extension);

}  // namespace alex::catalog
