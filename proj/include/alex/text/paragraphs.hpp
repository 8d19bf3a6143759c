#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "alex/catalog/record.hpp"

namespace alex::text {

struct Paragraph {
  std::uint32_t ordinal = 0;
  std::uint64_t byte_offset = 0;
  std::string text;  // one or more lines, never a blank line
  bool operator==(const Paragraph&) const = default;
};

// An archived text split into blank-line-delimited paragraph records.
struct ParagraphizedText {
  std::int64_t doc_id = 0;
  std::vector<Paragraph> paragraphs;
  bool operator==(const ParagraphizedText&) const = default;
};

// Canonical text: LF line endings, no trailing whitespace on any line,
// paragraphs separated by exactly one blank line, a single final LF (or the
// empty string). add_blank_lines additionally makes every source line its
// own paragraph. Throws Errc::encoding on invalid UTF-8.
std::string reformat(std::string_view raw_text, catalog::ReformatMethod method);

ParagraphizedText segment(std::string_view canonical_text, std::int64_t doc_id);

// Inverse of segment on canonical input.
std::string reassemble(const ParagraphizedText& text);

}  // namespace alex::text
