#include "alex/catalog/template_format.hpp"

#include <array>
#include <charconv>
#include <map>

#include "alex/error.hpp"

namespace alex::catalog {

namespace {

enum class Field {
  template_type, id, title, subtitle, alternate_title, author, author_statement,
  year_conceived, publisher, year_published, url, proxy_url, size, mime_type,
  subject, genre, directory, reformat_method, note,
};

struct FieldSpec {
  Field field;
  std::string_view name;
  bool required;
  bool repeated;
};

constexpr std::array<FieldSpec, 19> kFields{{
    {Field::template_type, "Template-Type", true, false},
    {Field::id, "ID", true, false},
    {Field::title, "Title", true, false},
    {Field::subtitle, "Subtitle", false, false},
    {Field::alternate_title, "Alternate-Title", false, false},
    {Field::author, "Author", false, true},
    {Field::author_statement, "Author-Statement", false, false},
    {Field::year_conceived, "Year-Conceived", true, false},
    {Field::publisher, "Publisher", false, false},
    {Field::year_published, "Year-Published", true, false},
    {Field::url, "URL", true, false},
    {Field::proxy_url, "Proxy-URL", false, false},
    {Field::size, "Size", true, false},
    {Field::mime_type, "MIME-Type", true, false},
    {Field::subject, "Subject", false, true},
    {Field::genre, "Genre", false, true},
    {Field::directory, "Directory", true, false},
    {Field::reformat_method, "Reformat-Method", true, false},
    {Field::note, "Note", false, false},
}};

const FieldSpec* find_field(std::string_view name) {
  for (const auto& f : kFields) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

void emit(std::string& out, std::string_view name, std::string_view value) {
  out += name;
  out += ':';
  bool first = true;
  while (true) {
    auto nl = value.find('\n');
    auto line = value.substr(0, nl);
    if (first) {
      if (!line.empty()) {
        out += ' ';
        out += line;
      }
      first = false;
    } else {
      out += "\n ";
      out += line;
    }
    if (nl == std::string_view::npos) break;
    value.remove_prefix(nl + 1);
  }
  out += '\n';
}

void emit_optional(std::string& out, std::string_view name, const std::optional<std::string>& value) {
  if (value) emit(out, name, std::string_view(*value));
}

template <typename Int>
Int parse_int(std::string_view name, std::string_view value) {
  Int v{};
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (value.empty() || ec != std::errc{} || p != value.data() + value.size()) {
    throw Error(Errc::invalid_value,
                std::string(name) + ": '" + std::string(value) + "' is not an integer");
  }
  return v;
}

}  // namespace

std::string render_template(const TemplateRecord& r) {
  std::string out;
  emit(out, "Template-Type", to_string(r.template_type));
  emit(out, "ID", std::to_string(r.id));
  emit(out, "Title", r.title);
  emit_optional(out, "Subtitle", r.subtitle);
  emit_optional(out, "Alternate-Title", r.alternate_title);
  for (const auto& a : r.authors) emit(out, "Author", a);
  emit_optional(out, "Author-Statement", r.author_statement);
  emit(out, "Year-Conceived", std::to_string(r.year_conceived));
  emit_optional(out, "Publisher", r.publisher);
  emit(out, "Year-Published", std::to_string(r.year_published));
  emit(out, "URL", r.url);
  emit_optional(out, "Proxy-URL", r.proxy_url);
  emit(out, "Size", std::to_string(r.size_bytes));
  emit(out, "MIME-Type", r.mime_type);
  for (const auto& s : r.subjects) emit(out, "Subject", s);
  for (const auto& g : r.genres) emit(out, "Genre", g);
  emit(out, "Directory", r.directory);
  emit(out, "Reformat-Method", to_string(r.reformat_method));
  emit_optional(out, "Note", r.note);
  return out;
}

TemplateRecord parse_template(std::string_view text) {
  // Collect (field, value) pairs first so continuation lines can extend the
  // most recent value.
  std::vector<std::pair<const FieldSpec*, std::string>> values;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);

    if (line.empty()) {
      if (text.find_first_not_of('\n') == std::string_view::npos) break;
      throw Error(Errc::invalid_value, "line " + std::to_string(line_no) + ": blank line inside record");
    }
    if (line.front() == ' ') {
      if (values.empty()) {
        throw Error(Errc::invalid_value,
                    "line " + std::to_string(line_no) + ": continuation without a field");
      }
      values.back().second += '\n';
      values.back().second += line.substr(1);
      continue;
    }
    auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw Error(Errc::invalid_value, "line " + std::to_string(line_no) + ": expected 'Field-Name: value'");
    }
    auto name = line.substr(0, colon);
    const auto* spec = find_field(name);
    if (!spec) throw Error(Errc::unknown_field, "unknown field '" + std::string(name) + "'");
    auto value = line.substr(colon + 1);
    if (!value.empty() && value.front() == ' ') value.remove_prefix(1);
    values.emplace_back(spec, std::string(value));
  }

  std::map<Field, int> seen;
  TemplateRecord r;
  r.authors.clear();
  for (auto& [spec, value] : values) {
    if (++seen[spec->field] > 1 && !spec->repeated) {
      throw Error(Errc::duplicate_field, "field '" + std::string(spec->name) + "' appears twice");
    }
    switch (spec->field) {
      case Field::template_type: {
        auto t = parse_template_type(value);
        if (!t) throw Error(Errc::invalid_value, "unsupported template type '" + value + "'");
        r.template_type = *t;
        break;
      }
      case Field::id: r.id = parse_int<std::int64_t>(spec->name, value); break;
      case Field::title: r.title = std::move(value); break;
      case Field::subtitle: r.subtitle = std::move(value); break;
      case Field::alternate_title: r.alternate_title = std::move(value); break;
      case Field::author: r.authors.push_back(std::move(value)); break;
      case Field::author_statement: r.author_statement = std::move(value); break;
      case Field::year_conceived: r.year_conceived = parse_int<std::int32_t>(spec->name, value); break;
      case Field::publisher: r.publisher = std::move(value); break;
      case Field::year_published: r.year_published = parse_int<std::int32_t>(spec->name, value); break;
      case Field::url: r.url = std::move(value); break;
      case Field::proxy_url: r.proxy_url = std::move(value); break;
      case Field::size: r.size_bytes = parse_int<std::uint64_t>(spec->name, value); break;
      case Field::mime_type: r.mime_type = std::move(value); break;
      case Field::subject: r.subjects.push_back(std::move(value)); break;
      case Field::genre: r.genres.push_back(std::move(value)); break;
      case Field::directory: r.directory = std::move(value); break;
      case Field::reformat_method: {
        auto m = parse_reformat_method(value);
        if (!m) throw Error(Errc::invalid_value, "unknown reformat method '" + value + "'");
        r.reformat_method = *m;
        break;
      }
      case Field::note: r.note = std::move(value); break;
    }
  }

  for (const auto& f : kFields) {
    if (f.required && !seen.contains(f.field)) {
      throw Error(Errc::missing_required_field, "missing required field '" + std::string(f.name) + "'");
    }
  }
  return r;
}

std::string render_catalogue(const std::vector<TemplateRecord>& records) {
  std::string out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i) out += '\n';
    out += render_template(records[i]);
  }
  return out;
}

std::vector<TemplateRecord> parse_catalogue(std::string_view text) {
  std::vector<TemplateRecord> records;
  std::size_t start = 0;
  while (start < text.size()) {
    while (start < text.size() && text[start] == '\n') ++start;
    if (start >= text.size()) break;
    auto sep = text.find("\n\n", start);
    auto end = sep == std::string_view::npos ? text.size() : sep + 1;
    records.push_back(parse_template(text.substr(start, end - start)));
    start = end;
  }
  return records;
}

}  // namespace alex::catalog
