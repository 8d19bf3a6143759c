#include "alex/bookcase/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <ctime>
#include <fstream>

#include "alex/bookcase/sanitize.hpp"
#include "alex/error.hpp"
#include "alex/fsutil.hpp"
#include "alex/search/content_index.hpp"
#include "alex/text/utf8.hpp"

namespace alex::bookcase {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::size_t kMaxNameChars = 100;
constexpr std::size_t kMaxLabelChars = 200;
constexpr std::size_t kMaxHintChars = 500;
constexpr std::size_t kMaxQueryBytes = 1024;

std::string hex_of(std::string_view s) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (unsigned char c : s) {
    out += digits[c >> 4];
    out += digits[c & 15];
  }
  return out;
}

bool has_control(std::string_view s) {
  for (unsigned char c : s) {
    if (c < 0x20 || c == 0x7f) return true;
  }
  return false;
}

void check_line(std::string_view what, std::string_view s, std::size_t max_chars, bool required) {
  text::require_utf8(s);
  if (required && s.find_first_not_of(' ') == std::string_view::npos) {
    throw Error(Errc::validation, std::string(what) + " is empty");
  }
  if (has_control(s)) throw Error(Errc::validation, std::string(what) + " contains control characters");
  if (text::utf8_length(s) > max_chars) {
    throw Error(Errc::validation, std::string(what) + " is longer than " + std::to_string(max_chars) + " characters");
  }
}

// local@domain.tld, loosely.
bool email_shaped(std::string_view s) {
  auto at = s.find('@');
  if (at == 0 || at == std::string_view::npos || s.find('@', at + 1) != std::string_view::npos) return false;
  auto domain = s.substr(at + 1);
  auto dot = domain.rfind('.');
  if (dot == 0 || dot == std::string_view::npos || dot + 1 == domain.size()) return false;
  return s.find_first_of(" \t<>,;\"") == std::string_view::npos;
}

std::string iso_utc(std::chrono::system_clock::time_point t) {
  auto tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

BookcaseStore::BookcaseStore(fs::path root, StoreOptions options) : root_(std::move(root)), options_(std::move(options)) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec) throw Error(Errc::storage, "cannot create " + root_.string());
  if (options_.outbox.empty()) options_.outbox = root_ / "outbox.jsonl";
}

std::chrono::system_clock::time_point BookcaseStore::now() const {
  return options_.clock ? options_.clock() : std::chrono::system_clock::now();
}

fs::path BookcaseStore::path_for(const std::string& name) const { return root_ / (hex_of(name) + ".json"); }

std::shared_ptr<std::mutex> BookcaseStore::mutex_for(const std::string& name) {
  std::lock_guard g(registry_);
  auto& m = writers_[name];
  if (!m) m = std::make_shared<std::mutex>();
  return m;
}

bool BookcaseStore::exists(const std::string& name) const { return fs::exists(path_for(name)); }

Bookcase BookcaseStore::load(const std::string& name) const {
  auto path = path_for(name);
  if (!fs::exists(path)) throw Error(Errc::unknown_name, "no bookcase named '" + name + "'");
  auto doc = json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded()) throw Error(Errc::storage, "bookcase file " + path.string() + " is not JSON");
  return bookcase_from_json(doc);
}

void BookcaseStore::save(const Bookcase& b) const { write_file_atomic(path_for(b.name), to_json(b, View::stored).dump(1)); }

std::vector<std::string> BookcaseStore::names() const {
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(root_)) {
    if (e.path().extension() != ".json") continue;
    try {
      out.push_back(bookcase_from_json(json::parse(read_file(e.path()))).name);
    } catch (const std::exception&) {
      // a half-written or foreign file; skip it
    }
  }
  return out;
}

void BookcaseStore::create(const std::string& name, const std::string& key, const std::string& hint,
                           const std::string& hint_contact) {
  check_line("bookcase name", name, kMaxNameChars, true);
  // Names appear as a single path segment in the service routes.
  if (name.find('/') != std::string::npos) throw Error(Errc::validation, "bookcase names cannot contain '/'");
  if (key.empty()) throw Error(Errc::empty_key, "the key is empty");
  check_line("hint", hint, kMaxHintChars, false);
  if (!email_shaped(hint_contact)) throw Error(Errc::validation, "hint contact is not an email address");

  auto m = mutex_for(name);
  std::lock_guard g(*m);
  if (exists(name)) throw Error(Errc::name_taken, "a bookcase named '" + name + "' already exists");
  Bookcase b;
  b.name = name;
  b.key_hash = hash_key(key, options_.hashing);
  b.hint = hint;
  b.hint_contact = hint_contact;
  save(b);
}

UnlockToken BookcaseStore::unlock(const std::string& name, const std::string& key) {
  auto b = load(name);
  if (!verify_key(b.key_hash, key)) throw Error(Errc::auth, "wrong key for bookcase '" + name + "'");
  UnlockToken t{random_hex(24), name, now() + options_.token_ttl};
  std::lock_guard g(registry_);
  tokens_[t.token] = t;
  return t;
}

void BookcaseStore::lock(const std::string& token) {
  std::lock_guard g(registry_);
  if (tokens_.erase(token) == 0) throw Error(Errc::invalid_token, "token is not valid");
}

std::string BookcaseStore::token_owner(const std::string& token) {
  std::lock_guard g(registry_);
  auto it = tokens_.find(token);
  if (it == tokens_.end()) throw Error(Errc::invalid_token, "token is not valid");
  if (now() >= it->second.expires) {
    tokens_.erase(it);
    throw Error(Errc::invalid_token, "token has expired");
  }
  return it->second.name;
}

template <typename F>
auto BookcaseStore::mutate(const std::string& token, F&& f, bool allow_published) {
  auto name = token_owner(token);
  auto m = mutex_for(name);
  std::lock_guard g(*m);
  auto b = load(name);
  if (b.published() && !allow_published) {
    throw Error(Errc::read_only, "bookcase '" + name + "' is published and cannot be changed");
  }
  auto result = f(b);
  save(b);
  return result;
}

std::string BookcaseStore::add_shelf(const std::string& token, const std::string& label) {
  check_line("shelf label", label, kMaxLabelChars, true);
  return mutate(token, [&](Bookcase& b) {
    Shelf s;
    s.id = random_hex(8);
    s.label = label;
    b.shelves.push_back(s);
    return s.id;
  });
}

std::string BookcaseStore::add_item(const std::string& token, const std::string& shelf_id,
                                    const std::variant<NewBookLink, NewBookmark>& item,
                                    const store::CatalogueState& catalogue) {
  Item stored;
  stored.id = random_hex(8);
  if (const auto* l = std::get_if<NewBookLink>(&item)) {
    const auto* r = catalogue.record(l->doc_id);
    if (!r) throw Error(Errc::dangling_reference, "no record with id " + std::to_string(l->doc_id));
    stored.ref = BookLink{r->id, r->title, r->url};
  } else {
    const auto& m = std::get<NewBookmark>(item);
    if (m.query.size() > kMaxQueryBytes) throw Error(Errc::validation, "bookmark query is too long");
    text::require_utf8(m.query);
    auto it = catalogue.content.find(m.doc_id);
    if (it == catalogue.content.end()) {
      throw Error(Errc::dangling_reference, "no searchable text with id " + std::to_string(m.doc_id));
    }
    if (m.ordinal >= it->second->paragraph_count()) {
      throw Error(Errc::dangling_reference,
                  "text " + std::to_string(m.doc_id) + " has no paragraph " + std::to_string(m.ordinal));
    }
    stored.ref = Bookmark{m.doc_id, m.ordinal, m.query, search::make_excerpt(it->second->paragraph(m.ordinal).text)};
  }
  return mutate(token, [&](Bookcase& b) {
    auto* s = b.shelf(shelf_id);
    if (!s) throw Error(Errc::not_found, "no shelf '" + shelf_id + "' in this bookcase");
    s->items.push_back(stored);
    return stored.id;
  });
}

std::string BookcaseStore::annotate(const std::string& token, const Target& target, std::string_view html) {
  auto clean = sanitize_annotation(html);
  return mutate(token, [&](Bookcase& b) {
    switch (target.kind) {
      case TargetKind::bookcase:
        b.annotation = clean;
        return clean;
      case TargetKind::shelf:
        if (auto* s = b.shelf(target.id)) {
          s->annotation = clean;
          return clean;
        }
        throw Error(Errc::not_found, "no shelf '" + target.id + "' in this bookcase");
      case TargetKind::item:
        for (auto& s : b.shelves) {
          for (auto& i : s.items) {
            if (i.id == target.id) {
              i.annotation = clean;
              return clean;
            }
          }
        }
        throw Error(Errc::not_found, "no item '" + target.id + "' in this bookcase");
    }
    return clean;
  });
}

std::string BookcaseStore::publish(const std::string& token) {
  return mutate(token, [&](Bookcase& b) {
    b.published_id = random_hex(12);
    return *b.published_id;
  });
}

void BookcaseStore::unpublish(const std::string& token) {
  mutate(
      token,
      [&](Bookcase& b) {
        if (!b.published()) throw Error(Errc::validation, "bookcase '" + b.name + "' is not published");
        b.published_id.reset();
        return 0;
      },
      true);
}

Bookcase BookcaseStore::owner_view(const std::string& token) { return load(token_owner(token)); }

Bookcase BookcaseStore::published_view(const std::string& published_id) {
  for (const auto& name : names()) {
    auto b = load(name);
    if (b.published_id == published_id) return b;
  }
  throw Error(Errc::not_found, "no published bookcase '" + published_id + "'");
}

std::vector<PublishedSummary> BookcaseStore::published() {
  std::vector<PublishedSummary> out;
  for (const auto& name : names()) {
    auto b = load(name);
    if (b.published()) out.push_back({*b.published_id, b.name});
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.name < y.name; });
  return out;
}

std::string BookcaseStore::request_hint(const std::string& name) {
  auto b = load(name);
  auto id = random_hex(8);
  json msg{{"id", id}, {"timestamp", iso_utc(now())}, {"to", b.hint_contact}, {"bookcase", b.name}, {"hint", b.hint}};
  auto line = msg.dump() + "\n";
  std::lock_guard g(outbox_mutex_);
  std::error_code ec;
  if (options_.outbox.has_parent_path()) fs::create_directories(options_.outbox.parent_path(), ec);
  // O_APPEND keeps lines whole when several processes share the outbox.
  int fd = ::open(options_.outbox.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd < 0) throw Error(Errc::storage, "cannot open outbox " + options_.outbox.string());
  auto n = ::write(fd, line.data(), line.size());
  ::close(fd);
  if (n != static_cast<ssize_t>(line.size())) throw Error(Errc::storage, "short write to the outbox");
  return id;
}

std::size_t BookcaseStore::tombstone_document(std::int64_t doc_id) {
  std::size_t changed = 0;
  for (const auto& name : names()) {
    auto m = mutex_for(name);
    std::lock_guard g(*m);
    auto b = load(name);
    std::size_t here = 0;
    for (auto& s : b.shelves) {
      for (auto& i : s.items) {
        if (i.doc_id() == doc_id && !i.source_removed) {
          i.source_removed = true;
          ++here;
        }
      }
    }
    if (here) save(b);
    changed += here;
  }
  return changed;
}

bool BookcaseStore::references(std::int64_t doc_id) {
  for (const auto& name : names()) {
    for (const auto& s : load(name).shelves) {
      for (const auto& i : s.items) {
        if (i.doc_id() == doc_id && !i.source_removed) return true;
      }
    }
  }
  return false;
}

}  // namespace alex::bookcase
