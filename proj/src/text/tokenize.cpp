#include "alex/text/tokenize.hpp"

#include "alex/text/utf8.hpp"

namespace alex::text {

namespace {

char32_t fold(char32_t cp) noexcept {
  if (cp >= U'A' && cp <= U'Z') return cp + 32;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  return cp;
}

}  // namespace

bool is_word_code_point(char32_t cp) noexcept {
  if (cp < 0x80) {
    return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z') || (cp >= U'0' && cp <= U'9') ||
           cp == U'\'';
  }
  if (cp == 0x2019) return true;  // typographic apostrophe
  if (cp >= 0xC0 && cp <= 0x24F) return cp != 0xD7 && cp != 0xF7;
  if (cp >= 0x370 && cp <= 0x52F) return true;  // Greek, Cyrillic
  return false;
}

std::string fold_case(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) append_utf8(out, fold(next_code_point(s, i)));
  return out;
}

std::vector<Token> tokenize(std::string_view text, bool case_sensitive) {
  std::vector<Token> tokens;
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    tokens.push_back({std::move(current), static_cast<std::uint32_t>(tokens.size())});
    current.clear();
  };
  for (std::size_t i = 0; i < text.size();) {
    char32_t cp = next_code_point(text, i);
    if (is_word_code_point(cp)) {
      append_utf8(current, case_sensitive ? cp : fold(cp));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

std::vector<std::string> token_texts(std::string_view text, bool case_sensitive) {
  std::vector<std::string> out;
  for (auto& t : tokenize(text, case_sensitive)) out.push_back(std::move(t.text));
  return out;
}

}  // namespace alex::text
