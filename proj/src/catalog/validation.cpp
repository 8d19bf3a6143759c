#include "alex/catalog/validation.hpp"

#include <algorithm>
#include <charconv>

namespace alex::catalog {

namespace {

std::optional<int> parse_year(std::string_view s) {
  if (s.empty() || s.size() > 4) return std::nullopt;
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

// "1800-1899" from "American - 1800-1899", or empty.
std::string_view century_span(std::string_view directory) {
  auto sep = directory.rfind(" - ");
  if (sep == std::string_view::npos || sep == 0) return {};
  auto span = directory.substr(sep + 3);
  auto dash = span.find('-');
  if (dash == std::string_view::npos) return {};
  auto start = parse_year(span.substr(0, dash));
  auto end = parse_year(span.substr(dash + 1));
  if (!start || !end || *start % 100 != 0 || *end != *start + 99) return {};
  return span;
}

}  // namespace

std::string_view to_string(ViolationKind k) noexcept {
  switch (k) {
    case ViolationKind::invalid_id: return "invalid-id";
    case ViolationKind::empty_title: return "empty-title";
    case ViolationKind::no_authors: return "no-authors";
    case ViolationKind::unknown_author: return "unknown-author";
    case ViolationKind::unknown_publisher: return "unknown-publisher";
    case ViolationKind::unknown_subject: return "unknown-subject";
    case ViolationKind::unknown_genre: return "unknown-genre";
    case ViolationKind::invalid_mime: return "invalid-mime";
    case ViolationKind::forbidden_mime: return "forbidden-mime";
    case ViolationKind::invalid_directory: return "invalid-directory";
    case ViolationKind::invalid_year: return "invalid-year";
  }
  return "invalid-id";
}

bool is_century_directory(std::string_view directory) noexcept {
  return !century_span(directory).empty();
}

ValidationReport validate_record(const TemplateRecord& r, const AuthoritySet& authorities,
                                 const VocabularySet& vocabularies,
                                 const ValidationOptions& options) {
  ValidationReport report;
  auto add = [&](std::string field, ViolationKind kind, std::string message) {
    report.push_back({std::move(field), kind, std::move(message)});
  };

  if (r.id <= 0) add("id", ViolationKind::invalid_id, "id must be a positive integer");
  if (r.title.empty()) add("title", ViolationKind::empty_title, "title is empty");

  if (r.authors.empty()) add("authors", ViolationKind::no_authors, "at least one author is required");
  for (const auto& a : r.authors) {
    if (!authorities.authors.contains(a)) {
      add("authors", ViolationKind::unknown_author, "author '" + a + "' is not in the authority list");
    }
  }
  if (r.publisher && !authorities.publishers.contains(*r.publisher)) {
    add("publisher", ViolationKind::unknown_publisher,
        "publisher '" + *r.publisher + "' is not in the authority list");
  }
  for (const auto& s : r.subjects) {
    if (!vocabularies.subjects.contains(s)) {
      add("subjects", ViolationKind::unknown_subject, "subject '" + s + "' is not in the vocabulary");
    }
  }
  for (const auto& g : r.genres) {
    if (!vocabularies.genres.contains(g)) {
      add("genres", ViolationKind::unknown_genre, "genre '" + g + "' is not in the vocabulary");
    }
  }

  if (r.year_conceived < 0 || r.year_conceived > 9999) {
    add("year_conceived", ViolationKind::invalid_year, "year must be 0 (unknown) or a year");
  }
  if (r.year_published < 0 || r.year_published > 9999) {
    add("year_published", ViolationKind::invalid_year, "year must be 0 (unknown) or a year");
  }

  if (!is_valid_media_type(r.mime_type)) {
    add("mime_type", ViolationKind::invalid_mime, "malformed media type '" + r.mime_type + "'");
  } else {
    auto essence = parse_media_type(r.mime_type).essence();
    const auto& banned = options.policy.unalterable_types;
    if (std::find(banned.begin(), banned.end(), essence) != banned.end()) {
      add("mime_type", ViolationKind::forbidden_mime, "unalterable format '" + essence + "'");
    }
  }

  const auto& roots = options.collection_roots;
  bool is_root = std::find(roots.begin(), roots.end(), r.directory) != roots.end();
  if (!is_root) {
    auto span = century_span(r.directory);
    if (span.empty()) {
      add("directory", ViolationKind::invalid_directory,
          "directory '" + r.directory + "' is neither '<Collection> - <start>-<end>' nor a collection root");
    } else if (!authorities.time_periods.entries().empty() &&
               !authorities.time_periods.contains(span)) {
      add("directory", ViolationKind::invalid_directory,
          "time period '" + std::string(span) + "' is not in the authority list");
    }
  }

  return report;
}

}  // namespace alex::catalog
