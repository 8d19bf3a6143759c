#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace alex::search {

enum class Connective { and_, or_, not_ };
enum class Field { title, author, subject, genre, any };
enum class SortOrder { relevance, position };

std::string_view to_string(Connective c) noexcept;
std::string_view to_string(Field f) noexcept;
std::string_view to_string(SortOrder s) noexcept;
std::optional<Field> parse_field(std::string_view s) noexcept;
std::optional<SortOrder> parse_sort_order(std::string_view s) noexcept;

// Token texts keep the case they were typed in; matching decides whether
// case matters.
struct Term {
  std::string text;
  bool operator==(const Term&) const = default;
};
struct Truncation {
  std::string prefix;
  bool operator==(const Truncation&) const = default;
};
struct Phrase {
  std::vector<std::string> tokens;  // at least two
  bool operator==(const Phrase&) const = default;
};

struct Atom {
  std::variant<Term, Truncation, Phrase> kind;
  std::optional<Field> field;
  bool operator==(const Atom&) const = default;
};

struct Clause {
  Connective connective = Connective::and_;
  Atom atom;
  bool operator==(const Clause&) const = default;
};

struct QueryFlags {
  bool case_sensitive = false;
  bool stemmed = false;
  SortOrder sort = SortOrder::relevance;
  bool operator==(const QueryFlags&) const = default;
};

// A flat clause list evaluated strictly left to right. The first clause's
// connective is always AND; NOT applies to the single atom after it.
struct Query {
  std::vector<Clause> clauses;
  QueryFlags flags;
  bool operator==(const Query&) const = default;
};

inline constexpr std::size_t kMinTruncationPrefix = 2;

// Grammar: whitespace-separated words; standalone AND/OR/NOT (any case) are
// connectives, AND by default, "AND NOT" is NOT; "double quotes" make a
// phrase; a trailing '*' truncates; `field:word` or `field:"a phrase"`
// qualifies a field. Parentheses are rejected.
//
// Throws Errc::empty_query, Errc::unbalanced_quote, Errc::unsupported_nesting,
// Errc::short_truncation, or Errc::bad_query.
Query parse_query(std::string_view input, QueryFlags flags = {});

// Canonical text form; parse_query(to_string(q), q.flags) == q.
std::string to_string(const Query& q);

// Whether any clause carries a field qualifier.
bool has_field_qualifier(const Query& q) noexcept;

}  // namespace alex::search
