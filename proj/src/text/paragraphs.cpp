#include "alex/text/paragraphs.hpp"

#include "alex/text/utf8.hpp"

namespace alex::text {

namespace {

bool is_trailing_space(char c) {
  return c == ' ' || c == '\t' || c == '\f' || c == '\v';
}

}  // namespace

std::string reformat(std::string_view raw, catalog::ReformatMethod method) {
  require_utf8(raw);
  const bool line_per_paragraph = method == catalog::ReformatMethod::add_blank_lines;

  std::string out;
  out.reserve(raw.size() + raw.size() / 16);
  bool in_paragraph = false;
  std::size_t i = 0;
  while (i <= raw.size()) {
    // Lines end at LF, CR LF, or a lone CR.
    std::size_t end = i;
    while (end < raw.size() && raw[end] != '\n' && raw[end] != '\r') ++end;
    auto line = raw.substr(i, end - i);
    while (!line.empty() && is_trailing_space(line.back())) line.remove_suffix(1);

    if (line.empty()) {
      in_paragraph = false;
    } else {
      if (!out.empty()) out += (in_paragraph && !line_per_paragraph) ? "\n" : "\n\n";
      out += line;
      in_paragraph = true;
    }

    if (end >= raw.size()) break;
    i = end + ((raw[end] == '\r' && end + 1 < raw.size() && raw[end + 1] == '\n') ? 2 : 1);
  }
  if (!out.empty()) out += '\n';
  return out;
}

ParagraphizedText segment(std::string_view text, std::int64_t doc_id) {
  ParagraphizedText result;
  result.doc_id = doc_id;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text[i] == '\n') ++i;
    if (i >= text.size()) break;
    auto end = text.find("\n\n", i);
    std::size_t stop = end == std::string_view::npos ? text.size() : end;
    auto body = text.substr(i, stop - i);
    while (!body.empty() && body.back() == '\n') body.remove_suffix(1);
    result.paragraphs.push_back(
        {static_cast<std::uint32_t>(result.paragraphs.size()), i, std::string(body)});
    i = stop;
  }
  return result;
}

std::string reassemble(const ParagraphizedText& text) {
  std::string out;
  for (const auto& p : text.paragraphs) {
    if (!out.empty()) out += "\n\n";
    out += p.text;
  }
  if (!out.empty()) out += '\n';
  return out;
}

}  // namespace alex::text
