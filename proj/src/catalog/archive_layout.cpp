#include "alex/catalog/archive_layout.hpp"

#include <cctype>

namespace alex::catalog {

std::string slugify(std::string_view s) {
  std::string out;
  bool pending_hyphen = false;
  for (unsigned char c : s) {
    if (c < 0x80 && std::isalnum(c)) {
      if (pending_hyphen && !out.empty()) out += '-';
      pending_hyphen = false;
      out += static_cast<char>(std::tolower(c));
    } else {
      pending_hyphen = true;
    }
  }
  return out;
}

std::string archive_sibling_path(const TemplateRecord& record, std::string_view extension) {
  std::string path = slugify(record.directory);
  path += '/';
  path += std::to_string(record.id);
  auto title = slugify(record.title);
  if (!title.empty()) {
    path += '-';
    path += title;
  }
  path += extension;
  return path;
}

std::string archive_path_for(const TemplateRecord& record) {
  return archive_sibling_path(record, ".txt");
}

}  // namespace alex::catalog
