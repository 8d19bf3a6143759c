#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "alex/search/query.hpp"

namespace alex::search {

// The set of exact-case dictionary keys of an index, with lookups by folded
// form and by stem so that a query token can be matched under any flags.
class Lexicon {
 public:
  void add(const std::string& key);
  void remove(const std::string& key);
  bool empty() const noexcept { return exact_.empty(); }

  // Keys equal to `token` under the flags: exact, folded, or same stem of the
  // folded form. Stemming implies case folding.
  std::vector<const std::string*> match_term(std::string_view token, const QueryFlags& flags) const;
  // Keys starting with `prefix`, folded unless case_sensitive. Stemming does
  // not apply to truncation.
  std::vector<const std::string*> match_prefix(std::string_view prefix, bool case_sensitive) const;

  bool operator==(const Lexicon& other) const { return exact_ == other.exact_; }

 private:
  std::set<std::string> exact_;
  std::map<std::string, std::set<std::string>> folded_;
  std::map<std::string, std::set<std::string>> stemmed_;
};

// Whether a document token equals a query token under the flags. Same rule
// as Lexicon::match_term.
bool token_matches(std::string_view query_token, std::string_view doc_token, const QueryFlags& flags);

// Normalized form of a query token under the flags.
std::string normalize_token(std::string_view token, const QueryFlags& flags);

}  // namespace alex::search
