#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "alex/catalog/authority.hpp"
#include "alex/catalog/policy.hpp"
#include "alex/catalog/record.hpp"

namespace alex::catalog {

enum class ViolationKind {
  invalid_id,
  empty_title,
  no_authors,
  unknown_author,
  unknown_publisher,
  unknown_subject,
  unknown_genre,
  invalid_mime,
  forbidden_mime,
  invalid_directory,
  invalid_year,
};

std::string_view to_string(ViolationKind k) noexcept;

struct Violation {
  std::string field;
  ViolationKind kind;
  std::string message;
};

using ValidationReport = std::vector<Violation>;

struct ValidationOptions {
  // Directory values accepted verbatim besides the `<Collection> - <start>-<end>`
  // century form.
  std::vector<std::string> collection_roots;
  PolicyConfig policy;
};

// True for "American - 1800-1899": a collection name, " - ", then a century
// span whose start is a multiple of 100 and whose end is start + 99.
bool is_century_directory(std::string_view directory) noexcept;

ValidationReport validate_record(const TemplateRecord& record, const AuthoritySet& authorities,
                                 const VocabularySet& vocabularies,
                                 const ValidationOptions& options = {});

}  // namespace alex::catalog
