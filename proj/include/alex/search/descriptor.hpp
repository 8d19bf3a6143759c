#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "alex/catalog/record.hpp"

namespace alex::search {

// Source description pointing at the content index of one text, in the
// same `Name: value` line form as template records:
//
//   Database-Name: alex-26-adventures-of-huckleberry-finn
//   Description: Adventures Of Huckleberry Finn
//   Host: http://localhost:8080
//   Port: 8080
//   Path: /content-search
//   Doc-Id: 26
struct Descriptor {
  std::string database_name;
  std::string description;
  std::string host;
  std::uint16_t port = 80;
  std::string path;
  std::int64_t doc_id = 0;
  bool operator==(const Descriptor&) const = default;
};

// service_base is an absolute http(s) URL; the port defaults from its scheme.
Descriptor make_descriptor(const catalog::TemplateRecord& record, std::string_view service_base);

std::string render_descriptor(const Descriptor& d);
// Throws Errc::invalid_value, Errc::unknown_field, Errc::duplicate_field or
// Errc::missing_required_field.
Descriptor parse_descriptor(std::string_view text);

}  // namespace alex::search
