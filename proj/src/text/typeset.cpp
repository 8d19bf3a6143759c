#include "alex/text/typeset.hpp"

#include <cmath>
#include <cstdio>

#include "alex/error.hpp"
#include "alex/text/paragraphs.hpp"
#include "alex/text/utf8.hpp"

namespace alex::text {

namespace {

std::string_view base_font_name(Font f) {
  switch (f) {
    case Font::helvetica: return "Helvetica";
    case Font::times: return "Times-Roman";
    case Font::courier: return "Courier";
  }
  return "Times-Roman";
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

// PDF literal string body, ASCII only.
std::string pdf_escape(std::string_view latin1) {
  std::string out;
  for (unsigned char c : latin1) {
    if (c == '(' || c == ')' || c == '\\') {
      out += '\\';
      out += static_cast<char>(c);
    } else if (c < 0x20 || c >= 0x7F) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\%03o", c);
      out += buf;
    } else {
      out += static_cast<char>(c);
    }
  }
  return out;
}

std::size_t chars_per_line(const TypesetOptions& o) {
  // Tolerance keeps an exact fit (e.g. 468 / 7.8 = 60) from rounding down.
  return static_cast<std::size_t>(std::floor(o.printable_width() / o.advance() + 1e-9));
}

std::size_t lines_per_page(const TypesetOptions& o) {
  double usable = kLetterHeightPt - 2 * o.margins_pt - o.size_pt;
  double lh = o.size_pt * o.line_spacing;
  if (usable < 0) return 1;
  return static_cast<std::size_t>(std::floor(usable / lh + 1e-9)) + 1;
}

}  // namespace

std::string_view to_string(Font f) noexcept {
  switch (f) {
    case Font::helvetica: return "helvetica";
    case Font::times: return "times";
    case Font::courier: return "courier";
  }
  return "times";
}

std::optional<Font> parse_font(std::string_view s) noexcept {
  if (s == "helvetica") return Font::helvetica;
  if (s == "times") return Font::times;
  if (s == "courier") return Font::courier;
  return std::nullopt;
}

double advance_factor(Font f) noexcept {
  switch (f) {
    case Font::courier: return 0.60;
    case Font::helvetica: return 0.52;
    case Font::times: return 0.50;
  }
  return 0.50;
}

void validate(const TypesetOptions& o) {
  if (!(o.size_pt >= 8.0 && o.size_pt <= 24.0)) {
    throw Error(Errc::validation, "font size must be between 8 and 24 points");
  }
  if (!(o.margins_pt > 0.0) || !(o.printable_width() > 0.0) ||
      !(kLetterHeightPt - 2 * o.margins_pt > o.size_pt)) {
    throw Error(Errc::validation, "margins leave no printable area");
  }
  if (!(o.line_spacing >= 1.0 && o.line_spacing <= 4.0)) {
    throw Error(Errc::validation, "line spacing must be between 1 and 4");
  }
  if (o.printable_width() < o.advance()) {
    throw Error(Errc::validation, "printable width is narrower than one glyph");
  }
}

std::string to_latin1(std::string_view utf8) {
  std::string out;
  out.reserve(utf8.size());
  for (std::size_t i = 0; i < utf8.size();) {
    char32_t cp = next_code_point(utf8, i);
    if (cp < 0x20 || cp == 0x7F) {
      out += ' ';
    } else if (cp < 0x7F || (cp >= 0xA0 && cp <= 0xFF)) {
      out += static_cast<char>(cp);
    } else {
      out += '?';
    }
  }
  return out;
}

std::vector<std::string> wrap_paragraph(std::string_view text, std::size_t max_chars) {
  std::vector<std::string> lines;
  std::string line;
  auto flush = [&] {
    if (!line.empty()) lines.push_back(std::move(line));
    line.clear();
  };
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text[i] == ' ') ++i;
    if (i >= text.size()) break;
    auto end = text.find(' ', i);
    if (end == std::string_view::npos) end = text.size();
    auto word = text.substr(i, end - i);
    i = end;

    if (word.size() > max_chars) {
      flush();
      while (word.size() > max_chars) {
        lines.emplace_back(word.substr(0, max_chars));
        word.remove_prefix(max_chars);
      }
      line = std::string(word);
      continue;
    }
    std::size_t needed = line.empty() ? word.size() : line.size() + 1 + word.size();
    if (needed > max_chars) flush();
    if (!line.empty()) line += ' ';
    line += word;
  }
  flush();
  return lines;
}

std::vector<std::vector<std::string>> layout_pages(std::string_view canonical_text,
                                                   const TypesetOptions& options,
                                                   std::string_view title) {
  validate(options);
  const auto width = chars_per_line(options);
  const auto per_page = lines_per_page(options);

  // Blank entries separate blocks and are dropped at the top of a page.
  std::vector<std::string> flow;
  auto add_block = [&](std::string_view utf8) {
    auto lines = wrap_paragraph(to_latin1(utf8), width);
    if (lines.empty()) return;
    if (!flow.empty()) flow.emplace_back();
    for (auto& l : lines) flow.push_back(std::move(l));
  };
  add_block(title);
  for (const auto& p : segment(canonical_text, 0).paragraphs) add_block(p.text);

  std::vector<std::vector<std::string>> pages(1);
  for (auto& line : flow) {
    if (pages.back().size() == per_page) pages.emplace_back();
    if (line.empty() && pages.back().empty()) continue;
    pages.back().push_back(std::move(line));
  }
  return pages;
}

std::string typeset(std::string_view canonical_text, const TypesetOptions& options,
                    std::string_view title) {
  const auto pages = layout_pages(canonical_text, options, title);
  const double lh = options.size_pt * options.line_spacing;
  const double top = kLetterHeightPt - options.margins_pt - options.size_pt;
  const std::string font_op = "/F1 " + number(options.size_pt) + " Tf\n";

  std::vector<std::string> objects;  // object k is objects[k - 1]
  objects.push_back("<< /Type /Catalog /Pages 2 0 R >>");
  objects.emplace_back();  // page tree, filled below
  objects.push_back("<< /Type /Font /Subtype /Type1 /BaseFont /" +
                    std::string(base_font_name(options.font)) + " /Encoding /WinAnsiEncoding >>");
  objects.push_back("<< /Title (" + pdf_escape(to_latin1(title)) + ") /Producer (alex-catalogue) >>");

  std::string kids;
  for (std::size_t p = 0; p < pages.size(); ++p) {
    std::string content;
    for (std::size_t k = 0; k < pages[p].size(); ++k) {
      if (pages[p][k].empty()) continue;
      content += "BT\n" + font_op + number(options.margins_pt) + " " + number(top - k * lh) +
                 " Td\n(" + pdf_escape(pages[p][k]) + ") Tj\nET\n";
    }
    auto label = std::to_string(p + 1);
    double label_width = label.size() * options.advance();
    content += "BT\n" + font_op + number((kLetterWidthPt - label_width) / 2) + " " +
               number(options.margins_pt / 2) + " Td\n(" + label + ") Tj\nET\n";

    auto page_obj = objects.size() + 1;
    auto content_obj = page_obj + 1;
    objects.push_back("<< /Type /Page /Parent 2 0 R /MediaBox [0 0 612 792] "
                      "/Resources << /Font << /F1 3 0 R >> >> /Contents " +
                      std::to_string(content_obj) + " 0 R >>");
    objects.push_back("<< /Length " + std::to_string(content.size()) + " >>\nstream\n" + content +
                      "endstream");
    if (!kids.empty()) kids += ' ';
    kids += std::to_string(page_obj) + " 0 R";
  }
  objects[1] = "<< /Type /Pages /Kids [" + kids + "] /Count " + std::to_string(pages.size()) + " >>";

  std::string out = "%PDF-1.4\n";
  std::vector<std::size_t> offsets;
  for (std::size_t k = 0; k < objects.size(); ++k) {
    offsets.push_back(out.size());
    out += std::to_string(k + 1) + " 0 obj\n" + objects[k] + "\nendobj\n";
  }
  auto xref_at = out.size();
  out += "xref\n0 " + std::to_string(objects.size() + 1) + "\n0000000000 65535 f \n";
  for (auto off : offsets) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%010zu 00000 n \n", off);
    out += buf;
  }
  out += "trailer\n<< /Size " + std::to_string(objects.size() + 1) +
         " /Root 1 0 R /Info 4 0 R >>\nstartxref\n" + std::to_string(xref_at) + "\n%%EOF";
  return out;
}

}  // namespace alex::text
