#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace alex::catalog {

enum class TemplateType { document };

enum class ReformatMethod { already_delimited, add_blank_lines };

std::string_view to_string(TemplateType t) noexcept;
std::string_view to_string(ReformatMethod m) noexcept;
std::optional<TemplateType> parse_template_type(std::string_view s) noexcept;
std::optional<ReformatMethod> parse_reformat_method(std::string_view s) noexcept;

// Catalogue record for one text. Years use 0 for "unknown".
struct TemplateRecord {
  std::int64_t id = 0;
  std::string title;
  std::optional<std::string> subtitle;
  std::optional<std::string> alternate_title;
  std::vector<std::string> authors;  // author authority keys
  std::optional<std::string> author_statement;
  std::int32_t year_conceived = 0;
  std::optional<std::string> publisher;  // publisher authority key
  std::int32_t year_published = 0;
  std::string url;
  std::optional<std::string> proxy_url;  // stored and served, never interpreted
  std::uint64_t size_bytes = 0;
  std::string mime_type;
  TemplateType template_type = TemplateType::document;
  std::vector<std::string> subjects;
  std::vector<std::string> genres;
  std::string directory;
  ReformatMethod reformat_method = ReformatMethod::already_delimited;
  std::optional<std::string> note;

  bool operator==(const TemplateRecord&) const = default;
};

}  // namespace alex::catalog
