#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "alex/catalog/authority.hpp"
#include "alex/catalog/record.hpp"
#include "alex/search/content_index.hpp"
#include "alex/search/metadata_index.hpp"
#include "alex/store/transaction.hpp"

namespace alex::store {

// One immutable view of the catalogue. Readers hold a shared_ptr and never
// see a half-applied write.
struct CatalogueState {
  std::uint64_t generation = 0;
  catalog::AuthoritySet authorities;
  catalog::VocabularySet vocabularies;
  search::MetadataIndex metadata;
  std::map<std::int64_t, std::shared_ptr<const search::ContentIndex>> content;

  const catalog::TemplateRecord* record(std::int64_t id) const noexcept { return metadata.find(id); }
  // Throws Errc::unknown_document.
  const search::ContentIndex& content_for(std::int64_t id) const;
  std::vector<const search::ContentIndex*> select(const std::vector<std::int64_t>& ids) const;
  const catalog::TemplateRecord* find_by_url(const std::string& url) const noexcept;
  std::int64_t next_id() const noexcept;
};

struct ReindexReport {
  std::size_t records = 0;
  std::size_t documents = 0;
  std::size_t paragraphs = 0;
  std::vector<std::int64_t> missing_texts;  // records whose archived text is gone
};

struct CommitResult {
  std::string archived_path;           // relative to the archive root
  std::vector<std::int64_t> replaced;  // other ids dropped because they shared the url
};

// The data root:
//
//   archive/<dir>/<id>-<title>.txt   canonical texts
//   records.tpl                      every template record
//   authorities/, vocabularies/      controlled lists
//   index/metadata.idx               metadata index
//   index/content/<id>.idx           one content index per text
//   GENERATION                       bumped by every write
//   .lock                            writer lock, shared with other processes
//
// Writes are serialized in-process by a mutex and across processes by the
// lock file; each publishes a new snapshot only after its files are in place.
class Catalogue {
 public:
  explicit Catalogue(std::filesystem::path root);

  const std::filesystem::path& root() const noexcept { return root_; }
  std::filesystem::path archive_root() const { return root_ / "archive"; }

  // Current snapshot; reloads first when another process has written.
  std::shared_ptr<const CatalogueState> snapshot();

  // Archives, indexes and catalogues one text, replacing any record with the
  // same id or the same url. `canonical_text` must already be reformatted.
  CommitResult commit_document(const catalog::TemplateRecord& record, const std::string& canonical_text,
                               const StageHook& hook = {});
  // Drops the record, its text and its index. False when unknown.
  bool remove_record(std::int64_t id, const StageHook& hook = {});
  // Rebuilds every index from the archived texts and the record file.
  ReindexReport reindex(const StageHook& hook = {});

  void set_authorities(const catalog::AuthoritySet& authorities);
  void set_vocabularies(const catalog::VocabularySet& vocabularies);

  // Throws Errc::unknown_document or Errc::storage.
  std::string archived_text(std::int64_t id);

 private:
  std::shared_ptr<const CatalogueState> load() const;
  std::uint64_t disk_generation() const;
  void refresh_locked();
  void publish(std::shared_ptr<const CatalogueState> next);

  std::filesystem::path root_;
  std::mutex writer_;
  mutable std::mutex snapshot_mutex_;
  std::shared_ptr<const CatalogueState> current_;
};

}  // namespace alex::store
