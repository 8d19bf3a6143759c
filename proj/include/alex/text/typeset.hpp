#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace alex::text {

enum class Font { helvetica, times, courier };

std::string_view to_string(Font f) noexcept;
std::optional<Font> parse_font(std::string_view s) noexcept;

// Modeled advance of every glyph, as a fraction of the point size.
double advance_factor(Font f) noexcept;

inline constexpr double kLetterWidthPt = 612.0;
inline constexpr double kLetterHeightPt = 792.0;

struct TypesetOptions {
  Font font = Font::times;
  double size_pt = 12.0;  // [8, 24]
  double margins_pt = 72.0;
  double line_spacing = 1.2;

  double printable_width() const noexcept { return kLetterWidthPt - 2 * margins_pt; }
  double advance() const noexcept { return size_pt * advance_factor(font); }
};

// Throws Errc::validation when the options are out of range.
void validate(const TypesetOptions& options);

// Maps UTF-8 onto the Latin-1 subset the base fonts can show; anything else
// becomes '?'. Control characters become spaces.
std::string to_latin1(std::string_view utf8);

// Greedy word wrap of one paragraph (already Latin-1) at `max_chars` glyphs
// per line; words longer than a line are hard-broken.
std::vector<std::string> wrap_paragraph(std::string_view latin1, std::size_t max_chars);

// Pages of rendered lines; an empty string is a blank line.
std::vector<std::vector<std::string>> layout_pages(std::string_view canonical_text,
                                                   const TypesetOptions& options,
                                                   std::string_view title);

// Self-contained PDF 1.4 document using only a base-14 font, uncompressed
// ASCII content streams, letter pages, centered page numbers. Identical
// inputs give identical bytes.
std::string typeset(std::string_view canonical_text, const TypesetOptions& options,
                    std::string_view title);

}  // namespace alex::text
