#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "alex/bookcase/bookcase.hpp"
#include "alex/bookcase/key_hash.hpp"
#include "alex/store/catalogue.hpp"

namespace alex::bookcase {

using Clock = std::function<std::chrono::system_clock::time_point()>;

struct StoreOptions {
  KeyHashParams hashing = KeyHashParams::interactive();
  std::chrono::seconds token_ttl = std::chrono::hours(24);
  Clock clock;                     // system clock when empty
  std::filesystem::path outbox;    // <root>/outbox.jsonl when empty
};

struct UnlockToken {
  std::string token;
  std::string name;
  std::chrono::system_clock::time_point expires;
};

enum class TargetKind { bookcase, shelf, item };
struct Target {
  TargetKind kind = TargetKind::bookcase;
  std::string id;  // shelf or item id; unused for the bookcase itself
};

// What the caller wants to save; the store fills in titles and excerpts.
struct NewBookLink {
  std::int64_t doc_id = 0;
};
struct NewBookmark {
  std::int64_t doc_id = 0;
  std::uint32_t ordinal = 0;
  std::string query;
};

struct PublishedSummary {
  std::string published_id;
  std::string name;
};

// Bookcases live in <root>/<hex of name>.json, one document each. Unlock
// tokens exist only in memory. Writes to one bookcase are serialized; other
// bookcases are not blocked.
class BookcaseStore {
 public:
  BookcaseStore(std::filesystem::path root, StoreOptions options = {});

  // Throws Errc::name_taken, Errc::empty_key or Errc::validation.
  void create(const std::string& name, const std::string& key, const std::string& hint,
              const std::string& hint_contact);
  // Throws Errc::unknown_name or Errc::auth.
  UnlockToken unlock(const std::string& name, const std::string& key);
  void lock(const std::string& token);
  // Name of the bookcase a live token opens. Throws Errc::invalid_token.
  std::string token_owner(const std::string& token);

  // Mutations. All throw Errc::invalid_token and Errc::read_only when the
  // bookcase is published.
  std::string add_shelf(const std::string& token, const std::string& label);
  // Throws Errc::not_found for an unknown shelf, Errc::dangling_reference
  // when the record or paragraph does not exist.
  std::string add_item(const std::string& token, const std::string& shelf_id,
                       const std::variant<NewBookLink, NewBookmark>& item, const store::CatalogueState& catalogue);
  // Returns the stored, sanitized text.
  std::string annotate(const std::string& token, const Target& target, std::string_view html);
  std::string publish(const std::string& token);
  // Makes a published bookcase editable again; it leaves the published list.
  void unpublish(const std::string& token);

  Bookcase owner_view(const std::string& token);
  // Throws Errc::not_found.
  Bookcase published_view(const std::string& published_id);
  std::vector<PublishedSummary> published();

  // Appends one message to the outbox; returns its delivery id.
  std::string request_hint(const std::string& name);

  // Marks items pointing at `doc_id` as removed from the catalogue, in every
  // bookcase. Returns how many items changed.
  std::size_t tombstone_document(std::int64_t doc_id);
  bool references(std::int64_t doc_id);

  bool exists(const std::string& name) const;
  const std::filesystem::path& root() const noexcept { return root_; }
  std::filesystem::path outbox() const { return options_.outbox; }

 private:
  std::chrono::system_clock::time_point now() const;
  std::filesystem::path path_for(const std::string& name) const;
  std::shared_ptr<std::mutex> mutex_for(const std::string& name);
  Bookcase load(const std::string& name) const;
  void save(const Bookcase& b) const;
  std::vector<std::string> names() const;
  // Loads, applies `f` and saves under the bookcase's writer lock.
  template <typename F>
  auto mutate(const std::string& token, F&& f, bool allow_published = false);

  std::filesystem::path root_;
  StoreOptions options_;
  std::mutex registry_;
  std::map<std::string, std::shared_ptr<std::mutex>> writers_;
  std::map<std::string, UnlockToken> tokens_;
  std::mutex outbox_mutex_;
};

}  // namespace alex::bookcase
