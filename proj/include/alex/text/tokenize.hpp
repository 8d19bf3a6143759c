#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace alex::text {

struct Token {
  std::string text;
  std::uint32_t position = 0;  // token index, 0-based
  bool operator==(const Token&) const = default;
};

// Lowercases ASCII and Latin-1 letters; other code points pass through.
std::string fold_case(std::string_view s);

bool is_word_code_point(char32_t cp) noexcept;

// Tokens are maximal runs of letters, digits and apostrophes. Folded to
// lowercase unless case_sensitive.
std::vector<Token> tokenize(std::string_view text, bool case_sensitive = false);

// Token texts only.
std::vector<std::string> token_texts(std::string_view text, bool case_sensitive = false);

}  // namespace alex::text
