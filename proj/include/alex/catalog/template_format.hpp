#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "alex/catalog/record.hpp"

namespace alex::catalog {

// Line-oriented `Field-Name: value` records. Multi-line values continue on
// lines indented by one space; list fields repeat their line. Optional
// fields are omitted when absent.
//
//   Template-Type: DOCUMENT
//   ID: 26
//   Title: Adventures Of Huckleberry Finn
//   Author: Twain, Mark
//   ...
std::string render_template(const TemplateRecord& record);

// Throws Errc::unknown_field, Errc::missing_required_field,
// Errc::duplicate_field or Errc::invalid_value.
TemplateRecord parse_template(std::string_view text);

// A catalogue file holds records separated by a single blank line.
std::string render_catalogue(const std::vector<TemplateRecord>& records);
std::vector<TemplateRecord> parse_catalogue(std::string_view text);

}  // namespace alex::catalog
