#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "alex/search/lexicon.hpp"
#include "alex/search/query.hpp"
#include "alex/text/paragraphs.hpp"

namespace alex::search {

struct Posting {
  std::uint32_t ordinal = 0;
  std::vector<std::uint32_t> positions;  // strictly increasing
  std::uint32_t tf() const noexcept { return static_cast<std::uint32_t>(positions.size()); }
  bool operator==(const Posting&) const = default;
};

enum class Direction { next, prev };
std::optional<Direction> parse_direction(std::string_view s) noexcept;

// Paragraph-level inverted index of one archived text. Every paragraph is a
// record; keys are tokens in their original case.
class ContentIndex {
 public:
  ContentIndex() = default;
  static ContentIndex build(const text::ParagraphizedText& text);

  std::int64_t doc_id() const noexcept { return doc_id_; }
  std::size_t paragraph_count() const noexcept { return paragraphs_.size(); }
  const std::vector<text::Paragraph>& paragraphs() const noexcept { return paragraphs_; }
  // Throws Errc::unknown_paragraph.
  const text::Paragraph& paragraph(std::uint32_t ordinal) const;
  std::uint32_t token_count(std::uint32_t ordinal) const { return lengths_.at(ordinal); }
  const std::map<std::string, std::vector<Posting>>& terms() const noexcept { return terms_; }

  // Paragraph ordinal -> frequency of the atom (occurrences of a term or
  // prefix, or of the whole phrase). Field qualifiers are ignored here.
  std::map<std::uint32_t, std::uint32_t> frequencies(const Atom& atom, const QueryFlags& flags) const;

  // Neighbour of a paragraph, or nullopt at the document boundary. Throws
  // Errc::unknown_paragraph for an ordinal outside the document.
  std::optional<text::Paragraph> adjacent(std::uint32_t ordinal, Direction direction) const;

  // Versioned binary form ("ALXC" + version byte). deserialize throws
  // Errc::corrupt_index on anything it cannot trust.
  std::string serialize() const;
  static ContentIndex deserialize(std::string_view bytes);

  bool operator==(const ContentIndex& o) const {
    return doc_id_ == o.doc_id_ && paragraphs_ == o.paragraphs_ && lengths_ == o.lengths_ && terms_ == o.terms_;
  }

 private:
  std::map<std::uint32_t, std::vector<std::uint32_t>> positions_of(std::string_view token,
                                                                   const QueryFlags& flags) const;

  std::int64_t doc_id_ = 0;
  std::vector<text::Paragraph> paragraphs_;
  std::vector<std::uint32_t> lengths_;
  std::map<std::string, std::vector<Posting>> terms_;
  Lexicon lexicon_;
};

struct ParagraphHit {
  std::int64_t doc_id = 0;
  std::uint32_t ordinal = 0;
  double score = 0;
  std::string excerpt;
  bool operator==(const ParagraphHit&) const = default;
};

inline constexpr std::size_t kExcerptChars = 70;

// First kExcerptChars code points.
std::string make_excerpt(std::string_view paragraph_text);

// Ranks matching paragraphs across the selected documents (duplicates are
// ignored). score = sum over distinct non-negated atoms a of
// tf(a,p) * ln(1 + N/df(a)) / sqrt(len(p)), N = paragraphs searched,
// df(a) = paragraphs containing a.
//
// Throws Errc::empty_selection or Errc::unsupported_in_content.
std::vector<ParagraphHit> search_content(const std::vector<const ContentIndex*>& documents, const Query& query);

}  // namespace alex::search
