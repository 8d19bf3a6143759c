#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "alex/catalog/authority.hpp"
#include "alex/catalog/record.hpp"
#include "alex/search/lexicon.hpp"
#include "alex/search/query.hpp"

namespace alex::search {

inline constexpr std::size_t kFieldCount = 5;

// The strings indexed under each field for one record.
using FieldTexts = std::array<std::vector<std::string>, kFieldCount>;

// Inverted index over catalogue records. title holds title, subtitle and
// alternate title; author holds each author key and its display form;
// subject and genre hold the assigned terms; any holds all of those plus the
// publisher and author statement.
class MetadataIndex {
 public:
  static FieldTexts field_texts(const catalog::TemplateRecord& record, const catalog::AuthoritySet& authorities);

  // Replaces any record with the same id.
  void index_record(const catalog::TemplateRecord& record, const catalog::AuthoritySet& authorities);
  bool remove_record(std::int64_t id);

  const catalog::TemplateRecord* find(std::int64_t id) const noexcept;
  const std::map<std::int64_t, catalog::TemplateRecord>& records() const noexcept { return records_; }
  const std::map<std::string, std::set<std::int64_t>>& postings(Field field) const noexcept {
    return postings_[static_cast<std::size_t>(field)];
  }

  // Record ids matching one atom; an unqualified atom searches `any`.
  std::set<std::int64_t> matches(const Atom& atom, const QueryFlags& flags) const;
  // Strict left-to-right evaluation of the clause list.
  std::set<std::int64_t> evaluate(const Query& query) const;

  // "ALXM" + version byte. The records themselves live in the catalogue
  // file; deserialize takes them and throws Errc::corrupt_index when the
  // file does not describe exactly those records under these authorities.
  std::string serialize() const;
  static MetadataIndex deserialize(std::string_view bytes, std::map<std::int64_t, catalog::TemplateRecord> records,
                                   const catalog::AuthoritySet& authorities);

  bool operator==(const MetadataIndex& o) const {
    return records_ == o.records_ && texts_ == o.texts_ && postings_ == o.postings_;
  }

 private:
  void add_postings(std::int64_t id, const FieldTexts& texts);
  void remove_postings(std::int64_t id, const FieldTexts& texts);

  std::map<std::int64_t, catalog::TemplateRecord> records_;
  std::map<std::int64_t, FieldTexts> texts_;
  std::array<std::map<std::string, std::set<std::int64_t>>, kFieldCount> postings_;
  std::array<Lexicon, kFieldCount> lexicons_;
};

// Result shapes for the three output options.
enum class OutputOption { titles, titles_authors_links, full_records };

std::string_view to_string(OutputOption o) noexcept;
// Accepts "titles", "titles-authors-links", "full-records" and "1".."3".
std::optional<OutputOption> parse_output_option(std::string_view s) noexcept;

inline constexpr std::string_view kNoSubjects = "(No subjects supplied.)";
inline constexpr std::string_view kNoGenres = "(No genres supplied.)";

struct TitleHit {
  std::int64_t id = 0;
  std::string title;
  std::string url;  // original location
  bool operator==(const TitleHit&) const = default;
};

struct LinkedHit {
  TitleHit base;
  std::vector<std::string> authors;
  std::string archived_link;
  std::string typeset_link;
  std::string content_search_link;
  bool operator==(const LinkedHit&) const = default;
};

struct FullHit {
  LinkedHit linked;
  catalog::TemplateRecord record;
  std::string physical_description;  // e.g. "576333 bytes, text/html"
  // Assigned terms, or the single notice string when there are none.
  std::vector<std::string> subjects;
  std::vector<std::string> genres;
  bool operator==(const FullHit&) const = default;
};

using MetadataResults = std::variant<std::vector<TitleHit>, std::vector<LinkedHit>, std::vector<FullHit>>;

// Service-relative links for a record.
std::string archived_link(std::int64_t id);
std::string typeset_link(std::int64_t id);
std::string content_search_link(std::int64_t id);

// Hits ordered by case-folded title, then id.
MetadataResults search_metadata(const MetadataIndex& index, const Query& query,
                                OutputOption output = OutputOption::titles_authors_links);

}  // namespace alex::search
