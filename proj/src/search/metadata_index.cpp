#include "alex/search/metadata_index.hpp"

#include <algorithm>

#include "alex/error.hpp"
#include "alex/text/tokenize.hpp"
#include "binary_io.hpp"

namespace alex::search {

namespace {

constexpr std::string_view kMagic = "ALXM";
constexpr std::uint8_t kVersion = 1;

std::size_t slot(Field f) { return static_cast<std::size_t>(f); }

void push_unique(std::vector<std::string>& v, const std::string& s) {
  if (!s.empty() && std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

bool phrase_in(const std::vector<std::string>& phrase, const std::vector<std::string>& tokens,
               const QueryFlags& flags) {
  if (tokens.size() < phrase.size()) return false;
  for (std::size_t start = 0; start + phrase.size() <= tokens.size(); ++start) {
    bool all = true;
    for (std::size_t i = 0; i < phrase.size() && all; ++i) all = token_matches(phrase[i], tokens[start + i], flags);
    if (all) return true;
  }
  return false;
}

}  // namespace

FieldTexts MetadataIndex::field_texts(const catalog::TemplateRecord& r, const catalog::AuthoritySet& authorities) {
  FieldTexts t;
  auto& title = t[slot(Field::title)];
  push_unique(title, r.title);
  if (r.subtitle) push_unique(title, *r.subtitle);
  if (r.alternate_title) push_unique(title, *r.alternate_title);

  auto& author = t[slot(Field::author)];
  for (const auto& key : r.authors) {
    push_unique(author, key);
    if (const auto* e = authorities.authors.find(key)) push_unique(author, e->display);
  }
  for (const auto& s : r.subjects) push_unique(t[slot(Field::subject)], s);
  for (const auto& g : r.genres) push_unique(t[slot(Field::genre)], g);

  auto& any = t[slot(Field::any)];
  for (auto f : {Field::title, Field::author, Field::subject, Field::genre}) {
    for (const auto& s : t[slot(f)]) push_unique(any, s);
  }
  if (r.publisher) {
    push_unique(any, *r.publisher);
    if (const auto* e = authorities.publishers.find(*r.publisher)) push_unique(any, e->display);
  }
  if (r.author_statement) push_unique(any, *r.author_statement);
  return t;
}

void MetadataIndex::add_postings(std::int64_t id, const FieldTexts& texts) {
  for (std::size_t f = 0; f < kFieldCount; ++f) {
    for (const auto& s : texts[f]) {
      for (auto& tok : text::token_texts(s, true)) {
        lexicons_[f].add(tok);
        postings_[f][std::move(tok)].insert(id);
      }
    }
  }
}

void MetadataIndex::remove_postings(std::int64_t id, const FieldTexts& texts) {
  for (std::size_t f = 0; f < kFieldCount; ++f) {
    for (const auto& s : texts[f]) {
      for (const auto& tok : text::token_texts(s, true)) {
        auto it = postings_[f].find(tok);
        if (it == postings_[f].end()) continue;
        it->second.erase(id);
        if (it->second.empty()) {
          postings_[f].erase(it);
          lexicons_[f].remove(tok);
        }
      }
    }
  }
}

void MetadataIndex::index_record(const catalog::TemplateRecord& record, const catalog::AuthoritySet& authorities) {
  remove_record(record.id);
  auto texts = field_texts(record, authorities);
  add_postings(record.id, texts);
  texts_[record.id] = std::move(texts);
  records_[record.id] = record;
}

bool MetadataIndex::remove_record(std::int64_t id) {
  auto it = texts_.find(id);
  if (it == texts_.end()) return false;
  remove_postings(id, it->second);
  texts_.erase(it);
  records_.erase(id);
  return true;
}

const catalog::TemplateRecord* MetadataIndex::find(std::int64_t id) const noexcept {
  auto it = records_.find(id);
  return it == records_.end() ? nullptr : &it->second;
}

std::set<std::int64_t> MetadataIndex::matches(const Atom& atom, const QueryFlags& flags) const {
  auto f = slot(atom.field.value_or(Field::any));
  const auto& postings = postings_[f];
  std::set<std::int64_t> out;
  auto collect = [&](const std::vector<const std::string*>& keys) {
    for (const auto* k : keys) {
      const auto& ids = postings.at(*k);
      out.insert(ids.begin(), ids.end());
    }
  };
  if (const auto* t = std::get_if<Term>(&atom.kind)) {
    collect(lexicons_[f].match_term(t->text, flags));
    return out;
  }
  if (const auto* tr = std::get_if<Truncation>(&atom.kind)) {
    collect(lexicons_[f].match_prefix(tr->prefix, flags.case_sensitive));
    return out;
  }

  // Phrase: candidates hold every token somewhere in the field; confirm
  // adjacency against the indexed strings.
  const auto& phrase = std::get<Phrase>(atom.kind).tokens;
  std::set<std::int64_t> candidates;
  for (std::size_t i = 0; i < phrase.size(); ++i) {
    std::set<std::int64_t> ids;
    for (const auto* k : lexicons_[f].match_term(phrase[i], flags)) {
      const auto& p = postings.at(*k);
      ids.insert(p.begin(), p.end());
    }
    if (i == 0) {
      candidates = std::move(ids);
    } else {
      std::erase_if(candidates, [&](std::int64_t id) { return !ids.count(id); });
    }
    if (candidates.empty()) return out;
  }
  for (auto id : candidates) {
    for (const auto& s : texts_.at(id)[f]) {
      if (phrase_in(phrase, text::token_texts(s, true), flags)) {
        out.insert(id);
        break;
      }
    }
  }
  return out;
}

std::set<std::int64_t> MetadataIndex::evaluate(const Query& query) const {
  std::set<std::int64_t> acc;
  for (std::size_t c = 0; c < query.clauses.size(); ++c) {
    auto ids = matches(query.clauses[c].atom, query.flags);
    auto conn = c == 0 ? Connective::and_ : query.clauses[c].connective;
    if (c == 0) {
      acc = std::move(ids);
    } else if (conn == Connective::and_) {
      std::erase_if(acc, [&](std::int64_t id) { return !ids.count(id); });
    } else if (conn == Connective::or_) {
      acc.insert(ids.begin(), ids.end());
    } else {
      std::erase_if(acc, [&](std::int64_t id) { return ids.count(id) > 0; });
    }
  }
  return acc;
}

std::string MetadataIndex::serialize() const {
  detail::Writer w;
  w.bytes(kMagic);
  w.u8(kVersion);
  w.u32(static_cast<std::uint32_t>(texts_.size()));
  for (const auto& [id, texts] : texts_) {
    w.i64(id);
    for (const auto& strings : texts) {
      w.u32(static_cast<std::uint32_t>(strings.size()));
      for (const auto& s : strings) w.str(s);
    }
  }
  for (const auto& postings : postings_) {
    w.u32(static_cast<std::uint32_t>(postings.size()));
    for (const auto& [key, ids] : postings) {
      w.str(key);
      w.u32(static_cast<std::uint32_t>(ids.size()));
      for (auto id : ids) w.i64(id);
    }
  }
  return w.take();
}

MetadataIndex MetadataIndex::deserialize(std::string_view bytes,
                                         std::map<std::int64_t, catalog::TemplateRecord> records,
                                         const catalog::AuthoritySet& authorities) {
  using detail::Reader;
  Reader r(bytes);
  r.expect(kMagic, kVersion);
  MetadataIndex idx;
  auto n = r.count(8 + 4 * kFieldCount);
  for (std::uint32_t i = 0; i < n; ++i) {
    auto id = r.i64();
    FieldTexts texts;
    for (auto& strings : texts) {
      auto k = r.count(4);
      for (std::uint32_t j = 0; j < k; ++j) strings.push_back(r.str());
    }
    if (!records.count(id) || idx.texts_.count(id)) Reader::fail("record " + std::to_string(id) + " not in catalogue");
    idx.add_postings(id, texts);
    idx.texts_[id] = std::move(texts);
  }
  if (idx.texts_.size() != records.size()) Reader::fail("catalogue has records missing from the index");

  decltype(postings_) stored;
  for (auto& postings : stored) {
    auto k = r.count(8);
    for (std::uint32_t j = 0; j < k; ++j) {
      auto key = r.str();
      auto& ids = postings[key];
      auto m = r.count(8);
      for (std::uint32_t x = 0; x < m; ++x) ids.insert(r.i64());
    }
  }
  r.finish();
  if (stored != idx.postings_) Reader::fail("postings disagree with indexed fields");
  for (const auto& [id, texts] : idx.texts_) {
    if (texts != field_texts(records.at(id), authorities)) {
      Reader::fail("record " + std::to_string(id) + " changed since indexing");
    }
  }
  idx.records_ = std::move(records);
  return idx;
}

std::string_view to_string(OutputOption o) noexcept {
  switch (o) {
    case OutputOption::titles: return "titles";
    case OutputOption::titles_authors_links: return "titles-authors-links";
    case OutputOption::full_records: return "full-records";
  }
  return "titles-authors-links";
}

std::optional<OutputOption> parse_output_option(std::string_view s) noexcept {
  if (s == "titles" || s == "1") return OutputOption::titles;
  if (s == "titles-authors-links" || s == "2") return OutputOption::titles_authors_links;
  if (s == "full-records" || s == "3") return OutputOption::full_records;
  return std::nullopt;
}

std::string archived_link(std::int64_t id) { return "/texts/" + std::to_string(id); }
std::string typeset_link(std::int64_t id) { return "/texts/" + std::to_string(id) + "/pdf"; }
std::string content_search_link(std::int64_t id) { return "/content-search?docs=" + std::to_string(id); }

MetadataResults search_metadata(const MetadataIndex& index, const Query& query, OutputOption output) {
  std::vector<const catalog::TemplateRecord*> hits;
  for (auto id : index.evaluate(query)) hits.push_back(index.find(id));
  std::sort(hits.begin(), hits.end(), [](const auto* a, const auto* b) {
    auto ta = text::fold_case(a->title), tb = text::fold_case(b->title);
    return ta != tb ? ta < tb : a->id < b->id;
  });

  auto title_hit = [](const catalog::TemplateRecord& r) { return TitleHit{r.id, r.title, r.url}; };
  auto linked_hit = [&](const catalog::TemplateRecord& r) {
    return LinkedHit{title_hit(r), r.authors, archived_link(r.id), typeset_link(r.id), content_search_link(r.id)};
  };

  switch (output) {
    case OutputOption::titles: {
      std::vector<TitleHit> out;
      for (const auto* r : hits) out.push_back(title_hit(*r));
      return out;
    }
    case OutputOption::titles_authors_links: {
      std::vector<LinkedHit> out;
      for (const auto* r : hits) out.push_back(linked_hit(*r));
      return out;
    }
    case OutputOption::full_records: break;
  }
  std::vector<FullHit> out;
  for (const auto* r : hits) {
    FullHit h{linked_hit(*r), *r, std::to_string(r->size_bytes) + " bytes, " + r->mime_type, r->subjects, r->genres};
    if (h.subjects.empty()) h.subjects.emplace_back(kNoSubjects);
    if (h.genres.empty()) h.genres.emplace_back(kNoGenres);
    out.push_back(std::move(h));
  }
  return out;
}

}  // namespace alex::search
