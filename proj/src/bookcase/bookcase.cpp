#include "alex/bookcase/bookcase.hpp"

#include "alex/error.hpp"

namespace alex::bookcase {

using nlohmann::json;

std::int64_t Item::doc_id() const {
  return std::visit([](const auto& r) { return r.doc_id; }, ref);
}

const Shelf* Bookcase::shelf(const std::string& id) const noexcept {
  for (const auto& s : shelves) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

Shelf* Bookcase::shelf(const std::string& id) noexcept {
  return const_cast<Shelf*>(static_cast<const Bookcase*>(this)->shelf(id));
}

namespace {

json item_json(const Item& item) {
  json j{{"id", item.id}, {"annotation", item.annotation}, {"source_removed", item.source_removed}};
  if (const auto* l = std::get_if<BookLink>(&item.ref)) {
    j["kind"] = "book";
    j["doc_id"] = l->doc_id;
    j["title"] = l->title;
    j["url"] = l->url;
  } else {
    const auto& m = std::get<Bookmark>(item.ref);
    j["kind"] = "bookmark";
    j["doc_id"] = m.doc_id;
    j["ordinal"] = m.ordinal;
    j["query"] = m.query;
    j["excerpt"] = m.excerpt;
  }
  return j;
}

Item item_from(const json& j) {
  Item item;
  item.id = j.at("id").get<std::string>();
  item.annotation = j.at("annotation").get<std::string>();
  item.source_removed = j.at("source_removed").get<bool>();
  auto kind = j.at("kind").get<std::string>();
  if (kind == "book") {
    item.ref = BookLink{j.at("doc_id").get<std::int64_t>(), j.at("title").get<std::string>(),
                        j.at("url").get<std::string>()};
  } else if (kind == "bookmark") {
    item.ref = Bookmark{j.at("doc_id").get<std::int64_t>(), j.at("ordinal").get<std::uint32_t>(),
                        j.at("query").get<std::string>(), j.at("excerpt").get<std::string>()};
  } else {
    throw Error(Errc::storage, "unknown item kind '" + kind + "'");
  }
  return item;
}

}  // namespace

json to_json(const Bookcase& b, View view) {
  json shelves = json::array();
  for (const auto& s : b.shelves) {
    json items = json::array();
    for (const auto& i : s.items) items.push_back(item_json(i));
    shelves.push_back({{"id", s.id}, {"label", s.label}, {"annotation", s.annotation}, {"items", items}});
  }
  json j{{"name", b.name},
         {"annotation", b.annotation},
         {"shelves", shelves},
         {"published", b.published()},
         {"published_id", b.published_id ? json(*b.published_id) : json(nullptr)}};
  if (view != View::published) {
    j["hint"] = b.hint;
    j["hint_contact"] = b.hint_contact;
  }
  if (view == View::stored) j["key_hash"] = b.key_hash;
  return j;
}

Bookcase bookcase_from_json(const json& j) {
  try {
    Bookcase b;
    b.name = j.at("name").get<std::string>();
    b.key_hash = j.at("key_hash").get<std::string>();
    b.hint = j.at("hint").get<std::string>();
    b.hint_contact = j.at("hint_contact").get<std::string>();
    b.annotation = j.at("annotation").get<std::string>();
    if (!j.at("published_id").is_null()) b.published_id = j.at("published_id").get<std::string>();
    for (const auto& s : j.at("shelves")) {
      Shelf shelf;
      shelf.id = s.at("id").get<std::string>();
      shelf.label = s.at("label").get<std::string>();
      shelf.annotation = s.at("annotation").get<std::string>();
      for (const auto& i : s.at("items")) shelf.items.push_back(item_from(i));
      b.shelves.push_back(std::move(shelf));
    }
    return b;
  } catch (const json::exception& e) {
    throw Error(Errc::storage, std::string("malformed bookcase document: ") + e.what());
  }
}

}  // namespace alex::bookcase
