#include "alex/search/descriptor.hpp"

#include <charconv>
#include <map>

#include "alex/catalog/archive_layout.hpp"
#include "alex/error.hpp"

namespace alex::search {

namespace {

constexpr std::string_view kFields[] = {"Database-Name", "Description", "Host", "Port", "Path", "Doc-Id"};

template <typename T>
T parse_number(std::string_view field, std::string_view v) {
  T out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty()) {
    throw Error(Errc::invalid_value, std::string(field) + ": not a number: '" + std::string(v) + "'");
  }
  return out;
}

std::string one_line(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

}  // namespace

Descriptor make_descriptor(const catalog::TemplateRecord& record, std::string_view service_base) {
  Descriptor d;
  d.database_name = "alex-" + std::to_string(record.id);
  auto slug = catalog::slugify(record.title);
  if (!slug.empty()) d.database_name += "-" + slug;
  d.description = one_line(record.title);
  while (!service_base.empty() && service_base.back() == '/') service_base.remove_suffix(1);
  d.host = std::string(service_base);
  d.port = service_base.starts_with("https://") ? 443 : 80;
  auto scheme_end = service_base.find("://");
  auto authority = service_base.substr(scheme_end == std::string_view::npos ? 0 : scheme_end + 3);
  authority = authority.substr(0, authority.find('/'));
  if (auto colon = authority.rfind(':'); colon != std::string_view::npos && authority.back() != ']') {
    d.port = parse_number<std::uint16_t>("Host", authority.substr(colon + 1));
  }
  d.path = "/content-search";
  d.doc_id = record.id;
  return d;
}

std::string render_descriptor(const Descriptor& d) {
  std::string out;
  out += "Database-Name: " + d.database_name + "\n";
  out += "Description: " + d.description + "\n";
  out += "Host: " + d.host + "\n";
  out += "Port: " + std::to_string(d.port) + "\n";
  out += "Path: " + d.path + "\n";
  out += "Doc-Id: " + std::to_string(d.doc_id) + "\n";
  return out;
}

Descriptor parse_descriptor(std::string_view text) {
  std::map<std::string, std::string, std::less<>> values;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw Error(Errc::invalid_value, "descriptor line without a colon: '" + std::string(line) + "'");
    }
    auto name = line.substr(0, colon);
    auto value = line.substr(colon + 1);
    if (value.starts_with(' ')) value.remove_prefix(1);
    if (std::find(std::begin(kFields), std::end(kFields), name) == std::end(kFields)) {
      throw Error(Errc::unknown_field, "unknown descriptor field '" + std::string(name) + "'");
    }
    if (!values.emplace(std::string(name), std::string(value)).second) {
      throw Error(Errc::duplicate_field, "duplicate descriptor field '" + std::string(name) + "'");
    }
  }
  for (auto f : kFields) {
    if (!values.count(f)) throw Error(Errc::missing_required_field, "descriptor lacks " + std::string(f));
  }
  Descriptor d;
  d.database_name = values["Database-Name"];
  d.description = values["Description"];
  d.host = values["Host"];
  d.port = parse_number<std::uint16_t>("Port", values["Port"]);
  d.path = values["Path"];
  d.doc_id = parse_number<std::int64_t>("Doc-Id", values["Doc-Id"]);
  return d;
}

}  // namespace alex::search
