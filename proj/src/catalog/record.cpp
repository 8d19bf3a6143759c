#include "alex/catalog/record.hpp"

namespace alex::catalog {

std::string_view to_string(TemplateType) noexcept { return "DOCUMENT"; }

std::string_view to_string(ReformatMethod m) noexcept {
  return m == ReformatMethod::add_blank_lines ? "add-blank-lines" : "already-delimited";
}

std::optional<TemplateType> parse_template_type(std::string_view s) noexcept {
  if (s == "DOCUMENT") return TemplateType::document;
  return std::nullopt;
}

std::optional<ReformatMethod> parse_reformat_method(std::string_view s) noexcept {
  if (s == "already-delimited") return ReformatMethod::already_delimited;
  if (s == "add-blank-lines") return ReformatMethod::add_blank_lines;
  return std::nullopt;
}

}  // namespace alex::catalog
