#include "alex/store/catalogue.hpp"

#include <algorithm>
#include <charconv>

#include "alex/catalog/archive_layout.hpp"
#include "alex/catalog/template_format.hpp"
#include "alex/error.hpp"
#include "alex/fsutil.hpp"
#include "alex/text/paragraphs.hpp"

namespace alex::store {

namespace fs = std::filesystem;

namespace {

const fs::path kRecords = "records.tpl";
const fs::path kGeneration = "GENERATION";
const fs::path kMetadataIndex = fs::path("index") / "metadata.idx";

fs::path content_index_path(std::int64_t id) { return fs::path("index") / "content" / (std::to_string(id) + ".idx"); }
fs::path archive_rel(const catalog::TemplateRecord& r) { return fs::path("archive") / catalog::archive_path_for(r); }

std::vector<catalog::TemplateRecord> record_list(const search::MetadataIndex& idx) {
  std::vector<catalog::TemplateRecord> out;
  for (const auto& [_, r] : idx.records()) out.push_back(r);
  return out;
}

std::shared_ptr<const search::ContentIndex> build_content(std::int64_t id, const std::string& canonical) {
  return std::make_shared<const search::ContentIndex>(search::ContentIndex::build(text::segment(canonical, id)));
}

}  // namespace

const search::ContentIndex& CatalogueState::content_for(std::int64_t id) const {
  auto it = content.find(id);
  if (it == content.end()) throw Error(Errc::unknown_document, "no indexed text with id " + std::to_string(id));
  return *it->second;
}

std::vector<const search::ContentIndex*> CatalogueState::select(const std::vector<std::int64_t>& ids) const {
  std::vector<const search::ContentIndex*> out;
  for (auto id : ids) out.push_back(&content_for(id));
  return out;
}

const catalog::TemplateRecord* CatalogueState::find_by_url(const std::string& url) const noexcept {
  for (const auto& [_, r] : metadata.records()) {
    if (r.url == url) return &r;
  }
  return nullptr;
}

std::int64_t CatalogueState::next_id() const noexcept {
  const auto& records = metadata.records();
  return records.empty() ? 1 : records.rbegin()->first + 1;
}

Catalogue::Catalogue(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_);
  RootLock lock(root_);
  FileTransaction::recover(root_);
  current_ = load();
}

std::uint64_t Catalogue::disk_generation() const {
  std::error_code ec;
  if (!fs::exists(root_ / kGeneration, ec)) return 0;
  auto text = read_file(root_ / kGeneration);
  std::uint64_t g = 0;
  std::from_chars(text.data(), text.data() + text.size(), g);
  return g;
}

std::shared_ptr<const CatalogueState> Catalogue::load() const {
  auto state = std::make_shared<CatalogueState>();
  state->generation = disk_generation();
  state->authorities = catalog::load_authorities(root_);
  state->vocabularies = catalog::load_vocabularies(root_);

  std::map<std::int64_t, catalog::TemplateRecord> records;
  if (fs::exists(root_ / kRecords)) {
    for (auto& r : catalog::parse_catalogue(read_file(root_ / kRecords))) {
      auto id = r.id;
      records[id] = std::move(r);
    }
  }

  bool loaded = false;
  if (fs::exists(root_ / kMetadataIndex)) {
    try {
      state->metadata = search::MetadataIndex::deserialize(read_file(root_ / kMetadataIndex), records,
                                                           state->authorities);
      loaded = true;
    } catch (const Error&) {
      // Stale or damaged; rebuilt below.
    }
  }
  if (!loaded) {
    for (const auto& [_, r] : records) state->metadata.index_record(r, state->authorities);
  }

  for (const auto& [id, r] : records) {
    auto idx_path = root_ / content_index_path(id);
    try {
      if (fs::exists(idx_path)) {
        auto idx = search::ContentIndex::deserialize(read_file(idx_path));
        if (idx.doc_id() == id) {
          state->content[id] = std::make_shared<const search::ContentIndex>(std::move(idx));
          continue;
        }
      }
    } catch (const Error&) {
    }
    auto text_path = root_ / archive_rel(r);
    if (fs::exists(text_path)) state->content[id] = build_content(id, read_file(text_path));
  }
  return state;
}

std::shared_ptr<const CatalogueState> Catalogue::snapshot() {
  {
    std::lock_guard g(snapshot_mutex_);
    if (current_->generation == disk_generation()) return current_;
  }
  std::lock_guard w(writer_);
  RootLock lock(root_);
  refresh_locked();
  std::lock_guard g(snapshot_mutex_);
  return current_;
}

void Catalogue::refresh_locked() {
  FileTransaction::recover(root_);
  std::shared_ptr<const CatalogueState> cur;
  {
    std::lock_guard g(snapshot_mutex_);
    cur = current_;
  }
  if (cur->generation != disk_generation()) publish(load());
}

void Catalogue::publish(std::shared_ptr<const CatalogueState> next) {
  std::lock_guard g(snapshot_mutex_);
  current_ = std::move(next);
}

CommitResult Catalogue::commit_document(const catalog::TemplateRecord& record, const std::string& canonical_text,
                                        const StageHook& hook) {
  std::lock_guard w(writer_);
  RootLock lock(root_);
  refresh_locked();
  auto base = current_;

  auto next = std::make_shared<CatalogueState>(*base);
  next->generation = base->generation + 1;
  FileTransaction txn(root_);
  CommitResult result;
  result.archived_path = catalog::archive_path_for(record);

  // Records displaced by this one: the same id, or another id with the url.
  std::vector<const catalog::TemplateRecord*> displaced;
  if (const auto* same = base->record(record.id)) displaced.push_back(same);
  for (const auto& [id, r] : base->metadata.records()) {
    if (id != record.id && r.url == record.url) {
      displaced.push_back(&r);
      result.replaced.push_back(id);
    }
  }
  for (const auto* old : displaced) {
    if (archive_rel(*old) != archive_rel(record) && fs::exists(root_ / archive_rel(*old))) {
      txn.remove(archive_rel(*old));
    }
    if (old->id != record.id) {
      if (fs::exists(root_ / content_index_path(old->id))) txn.remove(content_index_path(old->id));
      next->content.erase(old->id);
      next->metadata.remove_record(old->id);
    }
  }

  auto content = build_content(record.id, canonical_text);
  if (hook) hook("indexed");
  next->content[record.id] = content;
  next->metadata.index_record(record, next->authorities);

  txn.put(archive_rel(record), canonical_text);
  txn.put(content_index_path(record.id), content->serialize());
  txn.put(kMetadataIndex, next->metadata.serialize());
  txn.put(kRecords, catalog::render_catalogue(record_list(next->metadata)));
  txn.put(kGeneration, std::to_string(next->generation) + "\n");
  txn.commit(hook);
  publish(std::move(next));
  return result;
}

bool Catalogue::remove_record(std::int64_t id, const StageHook& hook) {
  std::lock_guard w(writer_);
  RootLock lock(root_);
  refresh_locked();
  auto base = current_;
  const auto* old = base->record(id);
  if (!old) return false;

  auto next = std::make_shared<CatalogueState>(*base);
  next->generation = base->generation + 1;
  FileTransaction txn(root_);
  if (fs::exists(root_ / archive_rel(*old))) txn.remove(archive_rel(*old));
  if (fs::exists(root_ / content_index_path(id))) txn.remove(content_index_path(id));
  next->metadata.remove_record(id);
  next->content.erase(id);
  txn.put(kMetadataIndex, next->metadata.serialize());
  txn.put(kRecords, catalog::render_catalogue(record_list(next->metadata)));
  txn.put(kGeneration, std::to_string(next->generation) + "\n");
  txn.commit(hook);
  publish(std::move(next));
  return true;
}

ReindexReport Catalogue::reindex(const StageHook& hook) {
  std::lock_guard w(writer_);
  RootLock lock(root_);
  FileTransaction::recover(root_);

  auto next = std::make_shared<CatalogueState>();
  next->generation = disk_generation() + 1;
  next->authorities = catalog::load_authorities(root_);
  next->vocabularies = catalog::load_vocabularies(root_);
  std::vector<catalog::TemplateRecord> records;
  if (fs::exists(root_ / kRecords)) records = catalog::parse_catalogue(read_file(root_ / kRecords));

  ReindexReport report;
  FileTransaction txn(root_);
  for (const auto& r : records) {
    next->metadata.index_record(r, next->authorities);
    ++report.records;
    auto text_path = root_ / archive_rel(r);
    if (!fs::exists(text_path)) {
      report.missing_texts.push_back(r.id);
      if (fs::exists(root_ / content_index_path(r.id))) txn.remove(content_index_path(r.id));
      continue;
    }
    auto content = build_content(r.id, read_file(text_path));
    report.documents += 1;
    report.paragraphs += content->paragraph_count();
    txn.put(content_index_path(r.id), content->serialize());
    next->content[r.id] = std::move(content);
  }
  // Index files for records that no longer exist.
  std::error_code ec;
  if (fs::exists(root_ / "index" / "content")) {
    for (const auto& entry : fs::directory_iterator(root_ / "index" / "content", ec)) {
      auto stem = entry.path().stem().string();
      std::int64_t id = 0;
      auto [p, e] = std::from_chars(stem.data(), stem.data() + stem.size(), id);
      bool known = e == std::errc() && p == stem.data() + stem.size() && next->metadata.find(id);
      if (entry.path().extension() == ".idx" && !known) txn.remove(fs::relative(entry.path(), root_));
    }
  }
  if (hook) hook("indexed");
  txn.put(kMetadataIndex, next->metadata.serialize());
  txn.put(kGeneration, std::to_string(next->generation) + "\n");
  txn.commit(hook);
  publish(std::move(next));
  return report;
}

void Catalogue::set_authorities(const catalog::AuthoritySet& authorities) {
  std::lock_guard w(writer_);
  RootLock lock(root_);
  catalog::save_authorities(root_, authorities);
  write_file_atomic(root_ / kGeneration, std::to_string(disk_generation() + 1) + "\n");
  publish(load());
}

void Catalogue::set_vocabularies(const catalog::VocabularySet& vocabularies) {
  std::lock_guard w(writer_);
  RootLock lock(root_);
  catalog::save_vocabularies(root_, vocabularies);
  write_file_atomic(root_ / kGeneration, std::to_string(disk_generation() + 1) + "\n");
  publish(load());
}

std::string Catalogue::archived_text(std::int64_t id) {
  auto snap = snapshot();
  const auto* r = snap->record(id);
  if (!r) throw Error(Errc::unknown_document, "no record with id " + std::to_string(id));
  auto path = root_ / archive_rel(*r);
  if (!fs::exists(path)) throw Error(Errc::unknown_document, "text of record " + std::to_string(id) + " is not archived");
  return read_file(path);
}

}  // namespace alex::store
