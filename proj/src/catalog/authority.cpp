#include "alex/catalog/authority.hpp"

#include <algorithm>

#include "alex/error.hpp"
#include "alex/fsutil.hpp"

namespace alex::catalog {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kHeaderPrefix = "# alex-list v1 ";

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

// Skips the header (checking its kind) and blank lines.
std::vector<std::string_view> body_lines(std::string_view text, std::string_view kind) {
  auto lines = split_lines(text);
  std::vector<std::string_view> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto line = lines[i];
    if (i == 0 && line.starts_with("#")) {
      if (!line.starts_with(kHeaderPrefix) || line.substr(kHeaderPrefix.size()) != kind) {
        throw Error(Errc::validation, "list header does not declare '" + std::string(kind) + "'");
      }
      continue;
    }
    if (line.empty()) continue;
    out.push_back(line);
  }
  return out;
}

fs::path authority_path(const fs::path& root, AuthorityKind kind) {
  switch (kind) {
    case AuthorityKind::author: return root / "authorities" / "authors.txt";
    case AuthorityKind::publisher: return root / "authorities" / "publishers.txt";
    case AuthorityKind::time_period: return root / "authorities" / "time-periods.txt";
  }
  return {};
}

fs::path vocabulary_path(const fs::path& root, VocabularyKind kind) {
  return root / "vocabularies" / (kind == VocabularyKind::subject ? "subjects.txt" : "genres.txt");
}

AuthorityList load_list(const fs::path& root, AuthorityKind kind) {
  auto p = authority_path(root, kind);
  if (!fs::exists(p)) return AuthorityList(kind);
  return parse_authority_file(read_file(p), kind);
}

Vocabulary load_vocab(const fs::path& root, VocabularyKind kind) {
  auto p = vocabulary_path(root, kind);
  if (!fs::exists(p)) return Vocabulary(kind);
  return parse_vocabulary_file(read_file(p), kind);
}

}  // namespace

std::string_view to_string(AuthorityKind k) noexcept {
  switch (k) {
    case AuthorityKind::author: return "author";
    case AuthorityKind::publisher: return "publisher";
    case AuthorityKind::time_period: return "time-period";
  }
  return "author";
}

std::string_view to_string(VocabularyKind k) noexcept {
  return k == VocabularyKind::subject ? "subject" : "genre";
}

void AuthorityList::add(std::string key, std::string display) {
  if (key.empty()) throw Error(Errc::validation, "authority key is empty");
  if (display.empty()) throw Error(Errc::validation, "authority display for '" + key + "' is empty");
  if (contains(key)) throw Error(Errc::validation, "duplicate authority key '" + key + "'");
  entries_.push_back({std::move(key), std::move(display)});
}

bool AuthorityList::contains(std::string_view key) const noexcept { return find(key) != nullptr; }

const AuthorityEntry* AuthorityList::find(std::string_view key) const noexcept {
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const AuthorityEntry& e) { return e.key == key; });
  return it == entries_.end() ? nullptr : &*it;
}

void Vocabulary::add(std::string term) {
  if (term.empty()) throw Error(Errc::validation, "vocabulary term is empty");
  if (contains(term)) throw Error(Errc::validation, "duplicate vocabulary term '" + term + "'");
  terms_.push_back(std::move(term));
}

bool Vocabulary::contains(std::string_view term) const noexcept {
  return std::find(terms_.begin(), terms_.end(), term) != terms_.end();
}

std::string render_authority_file(const AuthorityList& list) {
  std::string out(kHeaderPrefix);
  out += to_string(list.kind());
  out += '\n';
  for (const auto& e : list.entries()) {
    out += e.key;
    out += '\t';
    out += e.display;
    out += '\n';
  }
  return out;
}

AuthorityList parse_authority_file(std::string_view text, AuthorityKind kind) {
  AuthorityList list(kind);
  for (auto line : body_lines(text, to_string(kind))) {
    auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      // A bare key doubles as its own display form.
      list.add(std::string(line), std::string(line));
    } else {
      list.add(std::string(line.substr(0, tab)), std::string(line.substr(tab + 1)));
    }
  }
  return list;
}

std::string render_vocabulary_file(const Vocabulary& vocab) {
  std::string out(kHeaderPrefix);
  out += to_string(vocab.kind());
  out += '\n';
  for (const auto& t : vocab.terms()) {
    out += t;
    out += '\n';
  }
  return out;
}

Vocabulary parse_vocabulary_file(std::string_view text, VocabularyKind kind) {
  Vocabulary vocab(kind);
  for (auto line : body_lines(text, to_string(kind))) vocab.add(std::string(line));
  return vocab;
}

AuthoritySet load_authorities(const fs::path& root) {
  return {load_list(root, AuthorityKind::author), load_list(root, AuthorityKind::publisher),
          load_list(root, AuthorityKind::time_period)};
}

VocabularySet load_vocabularies(const fs::path& root) {
  return {load_vocab(root, VocabularyKind::subject), load_vocab(root, VocabularyKind::genre)};
}

void save_authorities(const fs::path& root, const AuthoritySet& set) {
  for (const auto* list : {&set.authors, &set.publishers, &set.time_periods}) {
    write_file_atomic(authority_path(root, list->kind()), render_authority_file(*list));
  }
}

void save_vocabularies(const fs::path& root, const VocabularySet& set) {
  for (const auto* v : {&set.subjects, &set.genres}) {
    write_file_atomic(vocabulary_path(root, v->kind()), render_vocabulary_file(*v));
  }
}

}  // namespace alex::catalog
