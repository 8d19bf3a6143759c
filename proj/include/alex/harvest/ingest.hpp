#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "alex/catalog/policy.hpp"
#include "alex/catalog/record.hpp"
#include "alex/catalog/validation.hpp"
#include "alex/harvest/extract.hpp"
#include "alex/harvest/fetch.hpp"
#include "alex/store/catalogue.hpp"

namespace alex::harvest {

// What the curator decides. Unset fields keep the machine-filled values.
struct CuratorInput {
  std::optional<std::int64_t> id;
  std::optional<std::string> title;
  std::optional<std::string> subtitle;
  std::optional<std::string> alternate_title;
  std::vector<std::string> authors;
  std::optional<std::string> author_statement;
  std::optional<std::int32_t> year_conceived;
  std::optional<std::string> publisher;
  std::optional<std::int32_t> year_published;
  std::optional<std::string> proxy_url;
  std::vector<std::string> subjects;
  std::vector<std::string> genres;
  std::optional<std::string> directory;
  std::optional<catalog::ReformatMethod> reformat_method;
  std::optional<std::string> note;
  catalog::License license = catalog::License::public_domain;
  bool complete = true;
};

// A record awaiting confirmation, with everything known about it.
struct DraftRecord {
  catalog::TemplateRecord record;
  ExtractedMetadata extracted;
  catalog::PolicyDecision policy;
  catalog::ValidationReport violations;
  bool ready() const noexcept { return policy.accepted && violations.empty(); }
};

// Machine fill plus curator overrides. The record keeps the url that was
// asked for (requested_url, or the fetched url when empty) rather than where
// redirects ended. The id defaults to the id already holding that url, else
// the next free id.
DraftRecord prepare_draft(const FetchResult& fetched, const CuratorInput& curator, const store::CatalogueState& state,
                          const catalog::ValidationOptions& options = {}, std::string_view requested_url = {});

struct IngestResult {
  catalog::TemplateRecord record;
  std::string archived_path;
  std::size_t paragraphs = 0;
  std::vector<std::int64_t> replaced;
};

// Converts, reformats and commits a ready draft. Throws
// Errc::policy_rejected or Errc::validation for a draft that is not ready.
IngestResult commit_draft(store::Catalogue& catalogue, const FetchResult& fetched, const DraftRecord& draft,
                          const store::StageHook& hook = {});

// fetch, extract, policy check, merge, validate, convert, reformat, then
// the catalogue transaction. Nothing is left behind on failure.
IngestResult ingest(store::Catalogue& catalogue, Fetcher& fetcher, const std::string& url, const CuratorInput& curator,
                    const catalog::ValidationOptions& options = {}, const store::StageHook& hook = {});

// Human-readable violation list for an error message.
std::string describe(const DraftRecord& draft);

}  // namespace alex::harvest
