#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace alex::bookcase {

// A link to a whole text. Title and url are copied at save time so the item
// still reads sensibly after its record is gone.
struct BookLink {
  std::int64_t doc_id = 0;
  std::string title;
  std::string url;
  bool operator==(const BookLink&) const = default;
};

// A saved content-search hit.
struct Bookmark {
  std::int64_t doc_id = 0;
  std::uint32_t ordinal = 0;
  std::string query;
  std::string excerpt;  // first 70 characters of the paragraph when saved
  bool operator==(const Bookmark&) const = default;
};

struct Item {
  std::string id;
  std::variant<BookLink, Bookmark> ref;
  std::string annotation;
  bool source_removed = false;  // the catalogue record was deleted later
  std::int64_t doc_id() const;
  bool operator==(const Item&) const = default;
};

struct Shelf {
  std::string id;
  std::string label;
  std::string annotation;
  std::vector<Item> items;
  bool operator==(const Shelf&) const = default;
};

struct Bookcase {
  std::string name;
  std::string key_hash;
  std::string hint;
  std::string hint_contact;
  std::string annotation;
  std::vector<Shelf> shelves;
  std::optional<std::string> published_id;  // set exactly when published

  bool published() const noexcept { return published_id.has_value(); }
  const Shelf* shelf(const std::string& id) const noexcept;
  Shelf* shelf(const std::string& id) noexcept;
  bool operator==(const Bookcase&) const = default;
};

// What a view includes. `stored` is the on-disk form; `owner` drops the key
// hash; `published` also drops the hint and its contact.
enum class View { stored, owner, published };

nlohmann::json to_json(const Bookcase& b, View view);
// Reads the stored form. Throws Errc::storage on malformed documents.
Bookcase bookcase_from_json(const nlohmann::json& j);

}  // namespace alex::bookcase
