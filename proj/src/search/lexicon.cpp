#include "alex/search/lexicon.hpp"

#include "alex/text/porter.hpp"
#include "alex/text/tokenize.hpp"

namespace alex::search {

namespace {

void erase_from(std::map<std::string, std::set<std::string>>& m, const std::string& bucket,
                const std::string& key) {
  auto it = m.find(bucket);
  if (it == m.end()) return;
  it->second.erase(key);
  if (it->second.empty()) m.erase(it);
}

void append(std::vector<const std::string*>& out, const std::map<std::string, std::set<std::string>>& m,
            const std::string& bucket) {
  auto it = m.find(bucket);
  if (it == m.end()) return;
  for (const auto& k : it->second) out.push_back(&k);
}

}  // namespace

std::string normalize_token(std::string_view token, const QueryFlags& flags) {
  if (flags.stemmed) return text::stem(text::fold_case(token));
  if (!flags.case_sensitive) return text::fold_case(token);
  return std::string(token);
}

bool token_matches(std::string_view query_token, std::string_view doc_token, const QueryFlags& flags) {
  return normalize_token(query_token, flags) == normalize_token(doc_token, flags);
}

void Lexicon::add(const std::string& key) {
  if (!exact_.insert(key).second) return;
  auto folded = text::fold_case(key);
  stemmed_[text::stem(folded)].insert(key);
  folded_[std::move(folded)].insert(key);
}

void Lexicon::remove(const std::string& key) {
  if (!exact_.erase(key)) return;
  auto folded = text::fold_case(key);
  erase_from(stemmed_, text::stem(folded), key);
  erase_from(folded_, folded, key);
}

std::vector<const std::string*> Lexicon::match_term(std::string_view token, const QueryFlags& flags) const {
  std::vector<const std::string*> out;
  if (flags.stemmed) {
    append(out, stemmed_, text::stem(text::fold_case(token)));
  } else if (!flags.case_sensitive) {
    append(out, folded_, text::fold_case(token));
  } else if (auto it = exact_.find(std::string(token)); it != exact_.end()) {
    out.push_back(&*it);
  }
  return out;
}

std::vector<const std::string*> Lexicon::match_prefix(std::string_view prefix, bool case_sensitive) const {
  std::vector<const std::string*> out;
  if (case_sensitive) {
    for (auto it = exact_.lower_bound(std::string(prefix)); it != exact_.end() && it->starts_with(prefix); ++it) {
      out.push_back(&*it);
    }
    return out;
  }
  auto folded = text::fold_case(prefix);
  for (auto it = folded_.lower_bound(folded); it != folded_.end() && it->first.starts_with(folded); ++it) {
    for (const auto& k : it->second) out.push_back(&k);
  }
  return out;
}

}  // namespace alex::search
