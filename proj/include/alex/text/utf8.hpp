#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace alex::text {

bool is_valid_utf8(std::string_view s) noexcept;

// Throws Errc::encoding when `s` is not valid UTF-8.
void require_utf8(std::string_view s);

// The first `max_chars` code points of a valid UTF-8 string.
std::string_view utf8_prefix(std::string_view s, std::size_t max_chars) noexcept;

std::size_t utf8_length(std::string_view s) noexcept;

void append_utf8(std::string& out, char32_t cp);

// Decodes the code point starting at s[i] and advances i. Invalid bytes
// decode as U+FFFD one byte at a time.
char32_t next_code_point(std::string_view s, std::size_t& i) noexcept;

}  // namespace alex::text
