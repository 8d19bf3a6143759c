#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace alex::catalog {

enum class AuthorityKind { author, publisher, time_period };
enum class VocabularyKind { subject, genre };

std::string_view to_string(AuthorityKind k) noexcept;
std::string_view to_string(VocabularyKind k) noexcept;

struct AuthorityEntry {
  std::string key;
  std::string display;
  bool operator==(const AuthorityEntry&) const = default;
};

// Ordered list of canonical name forms. Author keys are stored inverted
// ("Twain, Mark").
class AuthorityList {
 public:
  explicit AuthorityList(AuthorityKind kind = AuthorityKind::author) : kind_(kind) {}

  AuthorityKind kind() const noexcept { return kind_; }
  const std::vector<AuthorityEntry>& entries() const noexcept { return entries_; }

  // Throws Errc::validation on a duplicate key or empty key/display.
  void add(std::string key, std::string display);
  bool contains(std::string_view key) const noexcept;
  const AuthorityEntry* find(std::string_view key) const noexcept;

  bool operator==(const AuthorityList&) const = default;

 private:
  AuthorityKind kind_;
  std::vector<AuthorityEntry> entries_;
};

class Vocabulary {
 public:
  explicit Vocabulary(VocabularyKind kind = VocabularyKind::subject) : kind_(kind) {}

  VocabularyKind kind() const noexcept { return kind_; }
  const std::vector<std::string>& terms() const noexcept { return terms_; }

  void add(std::string term);
  bool contains(std::string_view term) const noexcept;

  bool operator==(const Vocabulary&) const = default;

 private:
  VocabularyKind kind_;
  std::vector<std::string> terms_;
};

struct AuthoritySet {
  AuthorityList authors{AuthorityKind::author};
  AuthorityList publishers{AuthorityKind::publisher};
  AuthorityList time_periods{AuthorityKind::time_period};
};

struct VocabularySet {
  Vocabulary subjects{VocabularyKind::subject};
  Vocabulary genres{VocabularyKind::genre};
};

// Text file codec: a versioned header line, then one `key<TAB>display` (or a
// bare term for vocabularies) per line.
std::string render_authority_file(const AuthorityList& list);
AuthorityList parse_authority_file(std::string_view text, AuthorityKind kind);
std::string render_vocabulary_file(const Vocabulary& vocab);
Vocabulary parse_vocabulary_file(std::string_view text, VocabularyKind kind);

// <dir>/authorities/{authors,publishers,time-periods}.txt and
// <dir>/vocabularies/{subjects,genres}.txt. Missing files load as empty lists.
AuthoritySet load_authorities(const std::filesystem::path& root);
VocabularySet load_vocabularies(const std::filesystem::path& root);
void save_authorities(const std::filesystem::path& root, const AuthoritySet& set);
void save_vocabularies(const std::filesystem::path& root, const VocabularySet& set);

}  // namespace alex::catalog
