#include "alex/harvest/ingest.hpp"

#include "alex/error.hpp"
#include "alex/text/paragraphs.hpp"

namespace alex::harvest {

namespace {

void stage(const store::StageHook& hook, std::string_view name) {
  if (hook) hook(name);
}

}  // namespace

DraftRecord prepare_draft(const FetchResult& fetched, const CuratorInput& c, const store::CatalogueState& state,
                          const catalog::ValidationOptions& options, std::string_view requested_url) {
  DraftRecord d;
  std::string url = requested_url.empty() ? fetched.url : std::string(requested_url);
  d.extracted = extract_metadata(fetched);
  d.policy = catalog::evaluate_policy(fetched.mime_type, c.license, c.complete, options.policy);

  auto& r = d.record;
  if (c.id) {
    r.id = *c.id;
  } else if (const auto* existing = state.find_by_url(url)) {
    r.id = existing->id;
  } else {
    r.id = state.next_id();
  }
  r.title = c.title.value_or(d.extracted.title.value_or(""));
  r.subtitle = c.subtitle;
  r.alternate_title = c.alternate_title;
  r.authors = c.authors;
  r.author_statement = c.author_statement;
  r.year_conceived = c.year_conceived.value_or(0);
  r.publisher = c.publisher;
  r.year_published = c.year_published.value_or(d.extracted.year.value_or(0));
  r.url = url;
  r.proxy_url = c.proxy_url;
  r.size_bytes = fetched.length_bytes;
  r.mime_type = fetched.mime_type;
  r.subjects = c.subjects;
  r.genres = c.genres;
  r.directory = c.directory.value_or("");
  r.reformat_method = c.reformat_method.value_or(catalog::ReformatMethod::already_delimited);
  r.note = c.note;
  d.violations = catalog::validate_record(r, state.authorities, state.vocabularies, options);
  return d;
}

std::string describe(const DraftRecord& d) {
  std::string out;
  for (auto reason : d.policy.reasons) {
    if (!out.empty()) out += "; ";
    out += "policy: " + std::string(catalog::to_string(reason));
  }
  for (const auto& v : d.violations) {
    if (!out.empty()) out += "; ";
    out += v.field + ": " + v.message;
  }
  return out;
}

IngestResult commit_draft(store::Catalogue& catalogue, const FetchResult& fetched, const DraftRecord& draft,
                          const store::StageHook& hook) {
  if (!draft.policy.accepted) throw Error(Errc::policy_rejected, "rejected by collection policy: " + describe(draft));
  if (!draft.violations.empty()) throw Error(Errc::validation, "record is not valid: " + describe(draft));

  auto raw = document_text(fetched);
  stage(hook, "converted");
  auto canonical = text::reformat(raw, draft.record.reformat_method);
  stage(hook, "reformatted");

  auto committed = catalogue.commit_document(draft.record, canonical, hook);
  IngestResult out;
  out.record = draft.record;
  out.archived_path = committed.archived_path;
  out.replaced = committed.replaced;
  out.paragraphs = catalogue.snapshot()->content_for(draft.record.id).paragraph_count();
  return out;
}

IngestResult ingest(store::Catalogue& catalogue, Fetcher& fetcher, const std::string& url, const CuratorInput& curator,
                    const catalog::ValidationOptions& options, const store::StageHook& hook) {
  auto fetched = fetcher.fetch(url);
  stage(hook, "fetched");
  auto draft = prepare_draft(fetched, curator, *catalogue.snapshot(), options, url);
  stage(hook, "drafted");
  return commit_draft(catalogue, fetched, draft, hook);
}

}  // namespace alex::harvest
