#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "alex/harvest/fetch.hpp"

namespace alex::harvest {

inline constexpr std::size_t kMaxPlainTitleChars = 120;

struct ExtractedMetadata {
  std::string url;
  std::optional<std::string> title;  // nullopt: the curator must supply one
  std::string mime_type;
  std::uint64_t length_bytes = 0;
  std::optional<std::string> date;  // YYYY-MM-DD from Last-Modified
  std::optional<std::int32_t> year;
};

// HTML: the first title element, entities decoded and whitespace collapsed.
// Plain text: the first nonempty line, at most 120 characters. Other types
// carry no title. Throws Errc::encoding when a text body is not UTF-8.
ExtractedMetadata extract_metadata(const FetchResult& fetched);

// Decodes named and numeric character references.
std::string decode_entities(std::string_view s);

// Readable text of an HTML page: block elements become paragraph breaks,
// script and style content is dropped, other markup removed.
std::string html_to_text(std::string_view html);

// Throws Errc::conversion_unsupported when the data is not gzip.
std::string gunzip(std::string_view data, std::uint64_t max_bytes = 256ull << 20);

// The archivable text of a fetched document: plain text as is, HTML
// converted, gzip unpacked (and converted when it holds HTML). Throws
// Errc::conversion_unsupported for other types and Errc::encoding for
// text that is not UTF-8.
std::string document_text(const FetchResult& fetched);

}  // namespace alex::harvest
