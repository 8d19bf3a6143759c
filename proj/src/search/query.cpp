#include "alex/search/query.hpp"

#include "alex/error.hpp"
#include "alex/text/tokenize.hpp"
#include "alex/text/utf8.hpp"

namespace alex::search {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

enum class LexKind { word, quoted, connective };

struct Lexeme {
  LexKind kind;
  std::string text;
  std::optional<Field> field;
  Connective connective = Connective::and_;
};

std::optional<Connective> as_connective(std::string_view w) {
  auto folded = text::fold_case(w);
  if (folded == "and") return Connective::and_;
  if (folded == "or") return Connective::or_;
  if (folded == "not") return Connective::not_;
  return std::nullopt;
}

// Splits a leading `field:` off a word when the name is a known field.
std::optional<Field> take_field(std::string& word) {
  auto colon = word.find(':');
  if (colon == std::string::npos || colon == 0) return std::nullopt;
  auto field = parse_field(text::fold_case(std::string_view(word).substr(0, colon)));
  if (field) word.erase(0, colon + 1);
  return field;
}

std::vector<Lexeme> lex(std::string_view input) {
  std::vector<Lexeme> out;
  std::size_t i = 0;
  while (i < input.size()) {
    if (is_space(input[i])) {
      ++i;
      continue;
    }
    std::string word;
    while (i < input.size() && !is_space(input[i]) && input[i] != '"') word += input[i++];

    if (i < input.size() && input[i] == '"') {
      std::optional<Field> field;
      if (!word.empty()) {
        auto w = word;
        field = take_field(w);
        if (field && w.empty()) {
          word.clear();
        } else {
          field.reset();
          out.push_back({LexKind::word, word, take_field(word)});
          word.clear();
        }
      }
      auto close = input.find('"', i + 1);
      if (close == std::string_view::npos) throw Error(Errc::unbalanced_quote, "unbalanced double quote");
      out.push_back({LexKind::quoted, std::string(input.substr(i + 1, close - i - 1)), field});
      i = close + 1;
      continue;
    }

    if (auto c = as_connective(word)) {
      out.push_back({LexKind::connective, word, std::nullopt, *c});
    } else {
      auto field = take_field(word);
      out.push_back({LexKind::word, std::move(word), field});
    }
  }
  return out;
}

Atom atom_from_tokens(std::vector<std::string> tokens, std::optional<Field> field, std::string_view source) {
  if (tokens.empty()) {
    throw Error(Errc::bad_query, "'" + std::string(source) + "' contains nothing searchable");
  }
  if (tokens.size() == 1) return {Term{std::move(tokens.front())}, field};
  return {Phrase{std::move(tokens)}, field};
}

Atom atom_from_lexeme(const Lexeme& lx) {
  if (lx.kind == LexKind::quoted) return atom_from_tokens(text::token_texts(lx.text, true), lx.field, lx.text);

  std::string_view w = lx.text;
  if (!w.empty() && w.back() == '*') {
    auto prefix = w.substr(0, w.size() - 1);
    if (prefix.find('*') != std::string_view::npos) {
      throw Error(Errc::bad_query, "'" + lx.text + "': only a single trailing '*' is supported");
    }
    auto tokens = text::token_texts(prefix, true);
    if (tokens.size() > 1) {
      throw Error(Errc::bad_query, "'" + lx.text + "': truncation applies to a single word");
    }
    if (tokens.empty() || text::utf8_length(tokens.front()) < kMinTruncationPrefix) {
      throw Error(Errc::short_truncation, "'" + lx.text + "': truncation needs at least " +
                                              std::to_string(kMinTruncationPrefix) + " characters");
    }
    return {Truncation{std::move(tokens.front())}, lx.field};
  }
  if (w.find('*') != std::string_view::npos) {
    throw Error(Errc::bad_query, "'" + lx.text + "': '*' is only allowed at the end of a word");
  }
  return atom_from_tokens(text::token_texts(w, true), lx.field, w);
}

void append_atom(std::string& out, const Atom& atom) {
  if (atom.field) {
    out += to_string(*atom.field);
    out += ':';
  }
  if (const auto* t = std::get_if<Term>(&atom.kind)) {
    if (as_connective(t->text) || t->text.find(':') != std::string::npos) {
      out += '"' + t->text + '"';
    } else {
      out += t->text;
    }
  } else if (const auto* tr = std::get_if<Truncation>(&atom.kind)) {
    out += tr->prefix + "*";
  } else {
    const auto& p = std::get<Phrase>(atom.kind);
    out += '"';
    for (std::size_t i = 0; i < p.tokens.size(); ++i) {
      if (i) out += ' ';
      out += p.tokens[i];
    }
    out += '"';
  }
}

}  // namespace

std::string_view to_string(Connective c) noexcept {
  switch (c) {
    case Connective::and_: return "AND";
    case Connective::or_: return "OR";
    case Connective::not_: return "NOT";
  }
  return "AND";
}

std::string_view to_string(Field f) noexcept {
  switch (f) {
    case Field::title: return "title";
    case Field::author: return "author";
    case Field::subject: return "subject";
    case Field::genre: return "genre";
    case Field::any: return "any";
  }
  return "any";
}

std::string_view to_string(SortOrder s) noexcept {
  return s == SortOrder::position ? "position" : "relevance";
}

std::optional<Field> parse_field(std::string_view s) noexcept {
  if (s == "title") return Field::title;
  if (s == "author") return Field::author;
  if (s == "subject") return Field::subject;
  if (s == "genre") return Field::genre;
  if (s == "any") return Field::any;
  return std::nullopt;
}

std::optional<SortOrder> parse_sort_order(std::string_view s) noexcept {
  if (s == "relevance") return SortOrder::relevance;
  if (s == "position") return SortOrder::position;
  return std::nullopt;
}

Query parse_query(std::string_view input, QueryFlags flags) {
  auto first = input.find_first_not_of(" \t\n\r\f\v");
  if (first == std::string_view::npos) throw Error(Errc::empty_query, "query is empty");

  bool in_quote = false;
  for (char c : input) {
    if (c == '"') in_quote = !in_quote;
    if (!in_quote && (c == '(' || c == ')')) {
      throw Error(Errc::unsupported_nesting, "nested queries are not supported");
    }
  }

  Query q;
  q.flags = flags;
  bool pending = false;
  Connective next = Connective::and_;
  for (const auto& lx : lex(input)) {
    if (lx.kind == LexKind::connective) {
      if (q.clauses.empty()) {
        throw Error(Errc::bad_query, "a query cannot start with '" + lx.text + "'");
      }
      if (pending && next == Connective::and_ && lx.connective == Connective::not_) {
        next = Connective::not_;
      } else if (pending) {
        throw Error(Errc::bad_query, "consecutive connectives before '" + lx.text + "'");
      } else {
        next = lx.connective;
      }
      pending = true;
      continue;
    }
    q.clauses.push_back({q.clauses.empty() ? Connective::and_ : next, atom_from_lexeme(lx)});
    pending = false;
    next = Connective::and_;
  }
  if (pending) throw Error(Errc::bad_query, "query ends with a connective");
  if (q.clauses.empty()) throw Error(Errc::empty_query, "query is empty");
  return q;
}

std::string to_string(const Query& q) {
  std::string out;
  for (std::size_t i = 0; i < q.clauses.size(); ++i) {
    if (i) {
      out += ' ';
      out += to_string(q.clauses[i].connective);
      out += ' ';
    }
    append_atom(out, q.clauses[i].atom);
  }
  return out;
}

bool has_field_qualifier(const Query& q) noexcept {
  for (const auto& c : q.clauses) {
    if (c.atom.field) return true;
  }
  return false;
}

}  // namespace alex::search
