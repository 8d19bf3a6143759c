#include "alex/search/content_index.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "alex/error.hpp"
#include "alex/text/tokenize.hpp"
#include "alex/text/utf8.hpp"
#include "binary_io.hpp"

namespace alex::search {

namespace {

constexpr std::string_view kMagic = "ALXC";
constexpr std::uint8_t kVersion = 1;

using Frequencies = std::map<std::uint32_t, std::uint32_t>;

// Identity of an atom for scoring: two atoms that always match the same
// paragraphs count once.
std::string atom_key(const Atom& atom, const QueryFlags& flags) {
  std::string key;
  if (const auto* t = std::get_if<Term>(&atom.kind)) {
    key = "t:" + normalize_token(t->text, flags);
  } else if (const auto* tr = std::get_if<Truncation>(&atom.kind)) {
    key = "p:" + (flags.case_sensitive ? tr->prefix : text::fold_case(tr->prefix));
  } else {
    key = "q:";
    for (const auto& tok : std::get<Phrase>(atom.kind).tokens) key += normalize_token(tok, flags) + '\x1f';
  }
  return key;
}

}  // namespace

std::optional<Direction> parse_direction(std::string_view s) noexcept {
  if (s == "next") return Direction::next;
  if (s == "prev") return Direction::prev;
  return std::nullopt;
}

ContentIndex ContentIndex::build(const text::ParagraphizedText& text) {
  ContentIndex idx;
  idx.doc_id_ = text.doc_id;
  idx.paragraphs_ = text.paragraphs;
  idx.lengths_.reserve(text.paragraphs.size());
  for (std::uint32_t ord = 0; ord < text.paragraphs.size(); ++ord) {
    auto tokens = text::tokenize(text.paragraphs[ord].text, true);
    idx.lengths_.push_back(static_cast<std::uint32_t>(tokens.size()));
    for (const auto& tok : tokens) {
      auto& postings = idx.terms_[tok.text];
      if (postings.empty() || postings.back().ordinal != ord) postings.push_back({ord, {}});
      postings.back().positions.push_back(tok.position);
    }
  }
  for (const auto& [key, _] : idx.terms_) idx.lexicon_.add(key);
  return idx;
}

const text::Paragraph& ContentIndex::paragraph(std::uint32_t ordinal) const {
  if (ordinal >= paragraphs_.size()) {
    throw Error(Errc::unknown_paragraph, "document " + std::to_string(doc_id_) + " has no paragraph " +
                                             std::to_string(ordinal));
  }
  return paragraphs_[ordinal];
}

std::map<std::uint32_t, std::vector<std::uint32_t>> ContentIndex::positions_of(std::string_view token,
                                                                                const QueryFlags& flags) const {
  std::map<std::uint32_t, std::vector<std::uint32_t>> out;
  auto keys = lexicon_.match_term(token, flags);
  for (const auto* key : keys) {
    for (const auto& p : terms_.at(*key)) {
      auto& v = out[p.ordinal];
      v.insert(v.end(), p.positions.begin(), p.positions.end());
    }
  }
  if (keys.size() > 1) {
    for (auto& [_, v] : out) std::sort(v.begin(), v.end());
  }
  return out;
}

std::map<std::uint32_t, std::uint32_t> ContentIndex::frequencies(const Atom& atom, const QueryFlags& flags) const {
  Frequencies tf;
  auto accumulate = [&](const std::vector<const std::string*>& keys) {
    for (const auto* key : keys) {
      for (const auto& p : terms_.at(*key)) tf[p.ordinal] += p.tf();
    }
  };
  if (const auto* t = std::get_if<Term>(&atom.kind)) {
    accumulate(lexicon_.match_term(t->text, flags));
    return tf;
  }
  if (const auto* tr = std::get_if<Truncation>(&atom.kind)) {
    accumulate(lexicon_.match_prefix(tr->prefix, flags.case_sensitive));
    return tf;
  }

  const auto& tokens = std::get<Phrase>(atom.kind).tokens;
  std::vector<std::map<std::uint32_t, std::vector<std::uint32_t>>> per_token;
  for (const auto& tok : tokens) {
    per_token.push_back(positions_of(tok, flags));
    if (per_token.back().empty()) return tf;
  }
  for (const auto& [ord, starts] : per_token.front()) {
    std::uint32_t count = 0;
    for (auto start : starts) {
      bool all = true;
      for (std::size_t i = 1; i < per_token.size() && all; ++i) {
        auto it = per_token[i].find(ord);
        all = it != per_token[i].end() &&
              std::binary_search(it->second.begin(), it->second.end(), start + static_cast<std::uint32_t>(i));
      }
      if (all) ++count;
    }
    if (count) tf[ord] = count;
  }
  return tf;
}

std::optional<text::Paragraph> ContentIndex::adjacent(std::uint32_t ordinal, Direction direction) const {
  paragraph(ordinal);
  if (direction == Direction::prev) {
    if (ordinal == 0) return std::nullopt;
    return paragraphs_[ordinal - 1];
  }
  if (ordinal + 1 >= paragraphs_.size()) return std::nullopt;
  return paragraphs_[ordinal + 1];
}

std::string ContentIndex::serialize() const {
  detail::Writer w;
  w.bytes(kMagic);
  w.u8(kVersion);
  w.i64(doc_id_);
  w.u32(static_cast<std::uint32_t>(paragraphs_.size()));
  for (std::size_t i = 0; i < paragraphs_.size(); ++i) {
    w.u64(paragraphs_[i].byte_offset);
    w.u32(lengths_[i]);
    w.str(paragraphs_[i].text);
  }
  w.u32(static_cast<std::uint32_t>(terms_.size()));
  for (const auto& [key, postings] : terms_) {
    w.str(key);
    w.u32(static_cast<std::uint32_t>(postings.size()));
    for (const auto& p : postings) {
      w.u32(p.ordinal);
      w.u32(p.tf());
      for (auto pos : p.positions) w.u32(pos);
    }
  }
  return w.take();
}

ContentIndex ContentIndex::deserialize(std::string_view bytes) {
  using detail::Reader;
  Reader r(bytes);
  r.expect(kMagic, kVersion);
  ContentIndex idx;
  idx.doc_id_ = r.i64();
  auto n = r.count(16);
  for (std::uint32_t i = 0; i < n; ++i) {
    text::Paragraph p;
    p.ordinal = i;
    p.byte_offset = r.u64();
    idx.lengths_.push_back(r.u32());
    p.text = r.str();
    idx.paragraphs_.push_back(std::move(p));
  }
  auto terms = r.count(8);
  std::vector<std::uint32_t> seen(n, 0);
  for (std::uint32_t t = 0; t < terms; ++t) {
    auto key = r.str();
    if (key.empty() || idx.terms_.count(key)) Reader::fail("bad term key");
    auto& postings = idx.terms_[key];
    auto np = r.count(8);
    for (std::uint32_t j = 0; j < np; ++j) {
      Posting p;
      p.ordinal = r.u32();
      if (p.ordinal >= n || (!postings.empty() && postings.back().ordinal >= p.ordinal)) {
        Reader::fail("posting ordinal out of order");
      }
      auto tf = r.count(4);
      if (tf == 0) Reader::fail("empty posting");
      for (std::uint32_t k = 0; k < tf; ++k) {
        auto pos = r.u32();
        if ((!p.positions.empty() && p.positions.back() >= pos) || pos >= idx.lengths_[p.ordinal]) {
          Reader::fail("positions not increasing");
        }
        p.positions.push_back(pos);
      }
      seen[p.ordinal] += tf;
      postings.push_back(std::move(p));
    }
    idx.lexicon_.add(key);
  }
  r.finish();
  if (seen != idx.lengths_) Reader::fail("paragraph lengths disagree with postings");
  return idx;
}

std::string make_excerpt(std::string_view paragraph_text) {
  return std::string(text::utf8_prefix(paragraph_text, kExcerptChars));
}

std::vector<ParagraphHit> search_content(const std::vector<const ContentIndex*>& documents, const Query& query) {
  std::vector<const ContentIndex*> docs;
  std::set<std::int64_t> ids;
  for (const auto* d : documents) {
    if (d && ids.insert(d->doc_id()).second) docs.push_back(d);
  }
  if (docs.empty()) throw Error(Errc::empty_selection, "no documents selected for content search");
  if (has_field_qualifier(query)) {
    throw Error(Errc::unsupported_in_content, "field qualifiers do not apply to content searches");
  }
  if (query.clauses.empty()) throw Error(Errc::empty_query, "query is empty");

  const auto& flags = query.flags;
  std::size_t total_paragraphs = 0;
  for (const auto* d : docs) total_paragraphs += d->paragraph_count();

  // Distinct atoms; frequencies per document per atom.
  std::vector<std::string> atom_keys;
  std::vector<std::size_t> clause_atom;
  std::vector<bool> positive;
  std::vector<const Atom*> atoms;
  for (const auto& c : query.clauses) {
    auto key = atom_key(c.atom, flags);
    auto it = std::find(atom_keys.begin(), atom_keys.end(), key);
    std::size_t a = it - atom_keys.begin();
    if (it == atom_keys.end()) {
      atom_keys.push_back(key);
      atoms.push_back(&c.atom);
      positive.push_back(false);
    }
    if (c.connective != Connective::not_) positive[a] = true;
    clause_atom.push_back(a);
  }

  std::vector<std::vector<Frequencies>> freq(docs.size());
  std::vector<std::size_t> df(atoms.size(), 0);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      freq[d].push_back(docs[d]->frequencies(*atoms[a], flags));
      df[a] += freq[d].back().size();
    }
  }

  std::vector<ParagraphHit> hits;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    std::set<std::uint32_t> acc;
    for (std::size_t c = 0; c < query.clauses.size(); ++c) {
      const auto& f = freq[d][clause_atom[c]];
      switch (c == 0 ? Connective::and_ : query.clauses[c].connective) {
        case Connective::and_:
          if (c == 0) {
            for (const auto& [ord, _] : f) acc.insert(ord);
          } else {
            std::erase_if(acc, [&](std::uint32_t ord) { return !f.count(ord); });
          }
          break;
        case Connective::or_:
          for (const auto& [ord, _] : f) acc.insert(ord);
          break;
        case Connective::not_:
          std::erase_if(acc, [&](std::uint32_t ord) { return f.count(ord) > 0; });
          break;
      }
    }
    for (auto ord : acc) {
      double sum = 0;
      for (std::size_t a = 0; a < atoms.size(); ++a) {
        if (!positive[a]) continue;
        auto it = freq[d][a].find(ord);
        if (it == freq[d][a].end()) continue;
        sum += it->second * std::log(1.0 + double(total_paragraphs) / double(df[a]));
      }
      auto len = docs[d]->token_count(ord);
      double score = len ? sum / std::sqrt(double(len)) : 0.0;
      hits.push_back({docs[d]->doc_id(), ord, score, make_excerpt(docs[d]->paragraph(ord).text)});
    }
  }

  auto by_position = [](const ParagraphHit& a, const ParagraphHit& b) {
    return std::tie(a.doc_id, a.ordinal) < std::tie(b.doc_id, b.ordinal);
  };
  if (flags.sort == SortOrder::position) {
    std::sort(hits.begin(), hits.end(), by_position);
  } else {
    std::sort(hits.begin(), hits.end(), [&](const ParagraphHit& a, const ParagraphHit& b) {
      if (a.score != b.score) return a.score > b.score;
      return by_position(a, b);
    });
  }
  return hits;
}

}  // namespace alex::search
