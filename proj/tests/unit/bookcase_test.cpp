#include <gtest/gtest.h>

#include <atomic>
#include <random>
#include <thread>

#include "alex/bookcase/key_hash.hpp"
#include "alex/bookcase/sanitize.hpp"
#include "alex/bookcase/store.hpp"
#include "alex/error.hpp"
#include "alex/search/content_index.hpp"
#include "alex/search/query.hpp"
#include "alex/text/utf8.hpp"
#include "fixtures.hpp"
#include "tempdir.hpp"

using namespace alex;
using namespace alex::bookcase;
namespace fs = std::filesystem;

namespace {

Errc error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return Errc::validation;
}

const std::string kKey = "huck&jim-1884";

const std::string kSlaveryText =
    "They said Jim was a runaway slave, and the reward for him was posted on every fence along the river.\n"
    "\n"
    "The raft drifted on through the fog.\n";

// A catalogue with Huck Finn (26) and a second Twain text (27).
struct World {
  fixture::TempDir dir;
  store::Catalogue catalogue{dir.path() / "catalogue"};
  BookcaseStore store;
  std::chrono::system_clock::time_point clock_now{std::chrono::hours(24 * 365 * 50)};

  World()
      : store(dir.path() / "bookcases", StoreOptions{.hashing = KeyHashParams::minimum(),
                                                      .clock = [this] { return clock_now; }}) {
    catalogue.set_authorities(fixture::figure_authorities());
    catalogue.set_vocabularies(fixture::figure_vocabularies());
    catalogue.commit_document(fixture::figure_record(), fixture::kHuckFinnText);
    auto r = fixture::figure_record();
    r.id = 27;
    r.title = "Slavery Along The River";
    r.url = "http://example.org/river.txt";
    catalogue.commit_document(r, kSlaveryText);
  }

  std::string open(const std::string& name = "Tom Sawyer Studies") {
    if (!store.exists(name)) store.create(name, kKey, "raft plus the year", "reader@example.org");
    return store.unlock(name, kKey).token;
  }
};

}  // namespace

// ---------------------------------------------------------------- sanitizer

TEST(SanitizeTest, AllowlistedMarkupIsKept) {
  EXPECT_EQ(sanitize_annotation("<em>theme</em>"), "<em>theme</em>");
  EXPECT_EQ(sanitize_annotation("<p>One<br>two</p><ul><li>a</li></ul><ol><li>b</li></ol><blockquote>q</blockquote>"),
            "<p>One<br>two</p><ul><li>a</li></ul><ol><li>b</li></ol><blockquote>q</blockquote>");
  EXPECT_EQ(sanitize_annotation("<STRONG>loud</STRONG>"), "<strong>loud</strong>");
  EXPECT_EQ(sanitize_annotation("plain words"), "plain words");
  EXPECT_EQ(sanitize_annotation(""), "");
}

TEST(SanitizeTest, ScriptAndStyleContentIsRemoved) {
  EXPECT_EQ(sanitize_annotation("<script>x</script>note"), "note");
  EXPECT_EQ(sanitize_annotation("a<SCRIPT type=text/javascript>alert('<p>')</script >b"), "ab");
  EXPECT_EQ(sanitize_annotation("<style>p { color: red }</style><p>kept</p>"), "<p>kept</p>");
  EXPECT_EQ(sanitize_annotation("before<script>never closed"), "before");
}

TEST(SanitizeTest, OtherTagsAndAttributesAreStripped) {
  EXPECT_EQ(sanitize_annotation("<div class=x><span>inner</span></div>"), "inner");
  EXPECT_EQ(sanitize_annotation("<p onclick=\"evil()\" style=\"x\">t</p>"), "<p>t</p>");
  EXPECT_EQ(sanitize_annotation("<img src=x onerror=alert(1)>pic"), "pic");
  EXPECT_EQ(sanitize_annotation("<!-- hidden -->shown"), "shown");
  EXPECT_EQ(sanitize_annotation("<iframe src=\"http://x\"></iframe>"), "");
}

TEST(SanitizeTest, LinksNeedHttpUrls) {
  EXPECT_EQ(sanitize_annotation("<a href=\"http://example.org/a?b=1&amp;c=2\" target=_blank>x</a>"),
            "<a href=\"http://example.org/a?b=1&amp;c=2\">x</a>");
  EXPECT_EQ(sanitize_annotation("<a href='HTTPS://example.org'>x</a>"), "<a href=\"HTTPS://example.org\">x</a>");
  EXPECT_EQ(sanitize_annotation("<a href=\"javascript:alert(1)\">x</a>"), "<a>x</a>");
  EXPECT_EQ(sanitize_annotation("<a href=\"jav&#x61;script:alert(1)\">x</a>"), "<a>x</a>");
  EXPECT_EQ(sanitize_annotation("<a href=\"data:text/html,hi\">x</a>"), "<a>x</a>");
  EXPECT_EQ(sanitize_annotation("<a href=\"http://x/\" onmouseover=\"e()\">x</a>"), "<a href=\"http://x/\">x</a>");
}

TEST(SanitizeTest, OutputIsBalancedAndEscaped) {
  EXPECT_EQ(sanitize_annotation("<p><em>open"), "<p><em>open</em></p>");
  EXPECT_EQ(sanitize_annotation("</p>stray</em>"), "stray");
  EXPECT_EQ(sanitize_annotation("<p><em>a</p>b"), "<p><em>a</em></p>b");
  EXPECT_EQ(sanitize_annotation("1 < 2 & 3 > 2"), "1 &lt; 2 &amp; 3 &gt; 2");
  EXPECT_EQ(sanitize_annotation("&lt;script&gt;"), "&lt;script&gt;");
  EXPECT_EQ(sanitize_annotation("Tom &amp; Huck"), "Tom &amp; Huck");
}

TEST(SanitizeTest, LimitsAndEncoding) {
  std::string big(kMaxAnnotationBytes, 'a');
  EXPECT_EQ(sanitize_annotation(big).size(), kMaxAnnotationBytes);
  EXPECT_EQ(error_of([&] { sanitize_annotation(big + "b"); }), Errc::oversize);
  // Stripped markup does not count against the cap.
  EXPECT_NO_THROW(sanitize_annotation(big + "<script>" + std::string(1000, 'x') + "</script>"));
  EXPECT_EQ(error_of([] { sanitize_annotation("bad \xC3"); }), Errc::encoding);
}

TEST(SanitizeTest, PropertyIdempotentAndScriptFree) {
  static const char* pieces[] = {"<p>",    "</p>",      "<em>", "</em>",   "<script>", "</script>", "<a href=\"http://x\">",
                                 "</a>",   "<br>",      "<b>",  "</div>",  "text",     " ",         "&amp;",
                                 "<",      ">",         "&",    "\"",      "<style>",  "</style>",  "<!--",
                                 "-->",    "<a href=javascript:x>", "é", "<li>", "</ol>", "<ul>"};
  std::mt19937 rng(7);
  for (int n = 0; n < 2000; ++n) {
    std::string input;
    for (int k = std::uniform_int_distribution(0, 12)(rng); k > 0; --k) {
      input += pieces[std::uniform_int_distribution<std::size_t>(0, std::size(pieces) - 1)(rng)];
    }
    auto once = sanitize_annotation(input);
    EXPECT_EQ(sanitize_annotation(once), once) << input;
    EXPECT_EQ(once.find("<script"), std::string::npos) << input;
    EXPECT_EQ(once.find("javascript"), std::string::npos) << input;
    EXPECT_TRUE(text::is_valid_utf8(once));
  }
}

// ---------------------------------------------------------------- keys

TEST(KeyHashTest, SaltedAndVerifiable) {
  auto a = hash_key(kKey, KeyHashParams::minimum());
  auto b = hash_key(kKey, KeyHashParams::minimum());
  EXPECT_NE(a, b);
  EXPECT_EQ(a.find(kKey), std::string::npos);
  EXPECT_TRUE(a.starts_with("$argon2id$"));
  EXPECT_TRUE(verify_key(a, kKey));
  EXPECT_FALSE(verify_key(a, "huck&jim-1885"));
  EXPECT_FALSE(verify_key("garbage", kKey));
  EXPECT_EQ(random_hex(16).size(), 32u);
  EXPECT_NE(random_hex(16), random_hex(16));
}

// ---------------------------------------------------------------- lifecycle

TEST(BookcaseTest, CreateAndUnlock) {
  World w;
  w.store.create("Tom Sawyer Studies", kKey, "raft plus the year", "reader@example.org");
  EXPECT_TRUE(w.store.exists("Tom Sawyer Studies"));
  EXPECT_EQ(error_of([&] { w.store.create("Tom Sawyer Studies", "other", "h", "a@b.org"); }), Errc::name_taken);
  EXPECT_EQ(error_of([&] { w.store.create("Another", "", "h", "a@b.org"); }), Errc::empty_key);
  EXPECT_EQ(error_of([&] { w.store.create("", "k", "h", "a@b.org"); }), Errc::validation);
  EXPECT_EQ(error_of([&] { w.store.create("Another", "k", "h", "not an address"); }), Errc::validation);
  EXPECT_EQ(error_of([&] { w.store.create("Line\nbreak", "k", "h", "a@b.org"); }), Errc::validation);
  EXPECT_EQ(error_of([&] { w.store.unlock("Tom Sawyer Studies", "wrong"); }), Errc::auth);
  EXPECT_EQ(error_of([&] { w.store.unlock("Nobody's", kKey); }), Errc::unknown_name);

  auto t = w.store.unlock("Tom Sawyer Studies", kKey);
  EXPECT_EQ(t.name, "Tom Sawyer Studies");
  auto view = w.store.owner_view(t.token);
  EXPECT_TRUE(view.shelves.empty());
  EXPECT_FALSE(view.published());
}

TEST(BookcaseTest, TokensLockAndExpire) {
  World w;
  auto a = w.open();
  auto b = w.store.unlock("Tom Sawyer Studies", kKey).token;
  EXPECT_NE(a, b);
  EXPECT_NO_THROW(w.store.add_shelf(a, "one"));
  EXPECT_NO_THROW(w.store.add_shelf(b, "two"));
  w.store.lock(a);
  EXPECT_EQ(error_of([&] { w.store.add_shelf(a, "three"); }), Errc::invalid_token);
  EXPECT_EQ(error_of([&] { w.store.lock(a); }), Errc::invalid_token);
  EXPECT_NO_THROW(w.store.add_shelf(b, "three"));

  w.clock_now += std::chrono::hours(24) - std::chrono::seconds(1);
  EXPECT_NO_THROW(w.store.owner_view(b));
  w.clock_now += std::chrono::seconds(1);
  EXPECT_EQ(error_of([&] { w.store.owner_view(b); }), Errc::invalid_token);
  EXPECT_EQ(error_of([&] { w.store.add_shelf("not-a-token", "x"); }), Errc::invalid_token);
}

TEST(BookcaseTest, ShelvesItemsAndBookmarks) {
  World w;
  auto t = w.open();
  auto snap = w.catalogue.snapshot();
  auto book = w.store.add_shelf(t, "01. The book");
  auto slavery = w.store.add_shelf(t, "03. Slavery");
  w.store.add_item(t, book, NewBookLink{26}, *snap);

  auto hits = search::search_content(snap->select({27}), search::parse_query("slav*"));
  ASSERT_EQ(hits.size(), 1u);
  w.store.add_item(t, slavery, NewBookmark{27, hits[0].ordinal, "slav*"}, *snap);
  w.store.add_item(t, book, NewBookmark{27, hits[0].ordinal, "slav*"}, *snap);

  auto v = w.store.owner_view(t);
  ASSERT_EQ(v.shelves.size(), 2u);
  EXPECT_EQ(v.shelves[0].label, "01. The book");
  ASSERT_EQ(v.shelves[0].items.size(), 2u);
  const auto& link = std::get<BookLink>(v.shelves[0].items[0].ref);
  EXPECT_EQ(link.doc_id, 26);
  EXPECT_EQ(link.title, "Adventures Of Huckleberry Finn");
  ASSERT_EQ(v.shelves[1].items.size(), 1u);
  const auto& mark = std::get<Bookmark>(v.shelves[1].items[0].ref);
  EXPECT_EQ(mark.query, "slav*");
  EXPECT_EQ(mark.excerpt, std::string(text::utf8_prefix(kSlaveryText, 70)));
  EXPECT_EQ(text::utf8_length(mark.excerpt), 70u);
  // The same bookmark sits on both shelves.
  EXPECT_EQ(std::get<Bookmark>(v.shelves[0].items[1].ref), mark);

  EXPECT_EQ(error_of([&] { w.store.add_item(t, book, NewBookLink{99}, *snap); }), Errc::dangling_reference);
  EXPECT_EQ(error_of([&] { w.store.add_item(t, book, NewBookmark{27, 2, "x"}, *snap); }), Errc::dangling_reference);
  EXPECT_EQ(error_of([&] { w.store.add_item(t, "nope", NewBookLink{26}, *snap); }), Errc::not_found);
  EXPECT_EQ(error_of([&] { w.store.add_shelf(t, "  "); }), Errc::validation);
}

TEST(BookcaseTest, OrderSurvivesReload) {
  World w;
  auto t = w.open();
  auto snap = w.catalogue.snapshot();
  std::vector<std::string> labels;
  for (int i = 0; i < 12; ++i) {
    labels.push_back("shelf " + std::to_string(11 - i));
    auto s = w.store.add_shelf(t, labels.back());
    for (int k = 0; k < 3; ++k) w.store.add_item(t, s, NewBookmark{26, static_cast<std::uint32_t>((i + k) % 3), "q"}, *snap);
  }
  auto before = w.store.owner_view(t);
  BookcaseStore reopened(w.dir.path() / "bookcases", {.hashing = KeyHashParams::minimum()});
  auto t2 = reopened.unlock("Tom Sawyer Studies", kKey).token;
  auto after = reopened.owner_view(t2);
  EXPECT_EQ(after, before);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    EXPECT_EQ(after.shelves[i].label, labels[i]);
    for (int k = 0; k < 3; ++k) {
      EXPECT_EQ(std::get<Bookmark>(after.shelves[i].items[k].ref).ordinal, (i + k) % 3);
    }
  }
  // Tokens are not persisted.
  EXPECT_EQ(error_of([&] { reopened.owner_view(t); }), Errc::invalid_token);
}

TEST(BookcaseTest, AnnotationsOnEveryTarget) {
  World w;
  auto t = w.open();
  auto snap = w.catalogue.snapshot();
  auto s = w.store.add_shelf(t, "The book");
  auto i = w.store.add_item(t, s, NewBookLink{26}, *snap);
  EXPECT_EQ(w.store.annotate(t, {TargetKind::bookcase, ""}, "<em>theme</em>"), "<em>theme</em>");
  EXPECT_EQ(w.store.annotate(t, {TargetKind::shelf, s}, "<script>x</script>note"), "note");
  EXPECT_EQ(w.store.annotate(t, {TargetKind::item, i}, "<p>first <b>edition</b></p>"), "<p>first edition</p>");
  auto v = w.store.owner_view(t);
  EXPECT_EQ(v.annotation, "<em>theme</em>");
  EXPECT_EQ(v.shelves[0].annotation, "note");
  EXPECT_EQ(v.shelves[0].items[0].annotation, "<p>first edition</p>");
  EXPECT_EQ(error_of([&] { w.store.annotate(t, {TargetKind::shelf, "zz"}, "x"); }), Errc::not_found);
  EXPECT_EQ(error_of([&] { w.store.annotate(t, {TargetKind::item, "zz"}, "x"); }), Errc::not_found);
  EXPECT_EQ(error_of([&] { w.store.annotate(t, {TargetKind::bookcase, ""}, std::string(70000, 'x')); }), Errc::oversize);
}

TEST(BookcaseTest, PublishIsReadOnlyUntilUnpublished) {
  World w;
  auto t = w.open();
  auto snap = w.catalogue.snapshot();
  auto s = w.store.add_shelf(t, "The book");
  auto item = w.store.add_item(t, s, NewBookLink{26}, *snap);
  w.store.annotate(t, {TargetKind::bookcase, ""}, "<p>Studies of the raft.</p>");
  auto owner_before = w.store.owner_view(t);

  auto id = w.store.publish(t);
  auto listed = w.store.published();
  ASSERT_EQ(listed.size(), 1u);
  EXPECT_EQ(listed[0].published_id, id);
  EXPECT_EQ(listed[0].name, "Tom Sawyer Studies");

  auto view = w.store.published_view(id);
  EXPECT_EQ(view.shelves, owner_before.shelves);
  EXPECT_EQ(view.annotation, owner_before.annotation);
  auto public_json = to_json(view, View::published);
  EXPECT_FALSE(public_json.contains("hint"));
  EXPECT_FALSE(public_json.contains("hint_contact"));
  EXPECT_FALSE(public_json.contains("key_hash"));
  EXPECT_TRUE(public_json["published"].get<bool>());

  EXPECT_EQ(error_of([&] { w.store.add_shelf(t, "more"); }), Errc::read_only);
  EXPECT_EQ(error_of([&] { w.store.add_item(t, s, NewBookLink{26}, *snap); }), Errc::read_only);
  EXPECT_EQ(error_of([&] { w.store.annotate(t, {TargetKind::item, item}, "x"); }), Errc::read_only);
  EXPECT_EQ(error_of([&] { w.store.annotate(t, {TargetKind::bookcase, ""}, "x"); }), Errc::read_only);
  EXPECT_EQ(error_of([&] { w.store.publish(t); }), Errc::read_only);
  EXPECT_EQ(w.store.published_view(id), view);

  w.store.unpublish(t);
  EXPECT_TRUE(w.store.published().empty());
  EXPECT_EQ(error_of([&] { w.store.published_view(id); }), Errc::not_found);
  EXPECT_NO_THROW(w.store.add_shelf(t, "more"));
  EXPECT_EQ(error_of([&] { w.store.unpublish(t); }), Errc::validation);
  EXPECT_NE(w.store.publish(t), id);
}

TEST(BookcaseTest, HintsGoToTheOutbox) {
  World w;
  w.open();
  auto outbox = w.store.outbox();
  auto id1 = w.store.request_hint("Tom Sawyer Studies");
  auto id2 = w.store.request_hint("Tom Sawyer Studies");
  EXPECT_NE(id1, id2);
  auto lines = read_file(outbox);
  EXPECT_EQ(std::count(lines.begin(), lines.end(), '\n'), 2);
  auto first = nlohmann::json::parse(lines.substr(0, lines.find('\n')));
  EXPECT_EQ(first["id"], id1);
  EXPECT_EQ(first["to"], "reader@example.org");
  EXPECT_EQ(first["hint"], "raft plus the year");
  EXPECT_EQ(first["timestamp"].get<std::string>().size(), 20u);
  EXPECT_EQ(lines.find(kKey), std::string::npos);
  EXPECT_EQ(error_of([&] { w.store.request_hint("Unknown Bookcase"); }), Errc::unknown_name);
}

TEST(BookcaseTest, KeysNeverPersisted) {
  World w;
  auto t = w.open();
  auto snap = w.catalogue.snapshot();
  auto s = w.store.add_shelf(t, "shelf");
  w.store.add_item(t, s, NewBookLink{26}, *snap);
  w.store.request_hint("Tom Sawyer Studies");
  w.store.publish(t);
  std::size_t files = 0;
  for (const auto& [path, bytes] : fixture::tree_bytes(w.dir.path())) {
    ++files;
    EXPECT_EQ(bytes.find(kKey), std::string::npos) << path;
  }
  EXPECT_GE(files, 2u);
  EXPECT_EQ(to_json(w.store.owner_view(t), View::owner).dump().find("argon2"), std::string::npos);
}

TEST(BookcaseTest, RemovedRecordsLeaveTombstones) {
  World w;
  auto t = w.open();
  auto snap = w.catalogue.snapshot();
  auto s = w.store.add_shelf(t, "The book");
  w.store.add_item(t, s, NewBookLink{26}, *snap);
  w.store.add_item(t, s, NewBookmark{27, 0, "slave"}, *snap);
  w.store.publish(t);
  EXPECT_TRUE(w.store.references(26));

  // Removing a record is not blocked by bookcases that point at it.
  ASSERT_TRUE(w.catalogue.remove_record(26));
  EXPECT_EQ(w.store.tombstone_document(26), 1u);
  EXPECT_EQ(w.store.tombstone_document(26), 0u);
  EXPECT_FALSE(w.store.references(26));
  EXPECT_TRUE(w.store.references(27));

  auto v = w.store.owner_view(t);
  ASSERT_EQ(v.shelves[0].items.size(), 2u);
  EXPECT_TRUE(v.shelves[0].items[0].source_removed);
  EXPECT_EQ(std::get<BookLink>(v.shelves[0].items[0].ref).title, "Adventures Of Huckleberry Finn");
  EXPECT_FALSE(v.shelves[0].items[1].source_removed);
}

TEST(BookcaseTest, ConcurrentWritersDoNotLoseUpdates) {
  World w;
  auto a = w.open("First");
  auto b = w.open("Second");
  constexpr int kPerThread = 15;
  std::vector<std::thread> threads;
  for (int n = 0; n < 4; ++n) {
    threads.emplace_back([&, n] {
      for (int i = 0; i < kPerThread; ++i) w.store.add_shelf(n % 2 ? a : b, std::to_string(n) + "-" + std::to_string(i));
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(w.store.owner_view(a).shelves.size(), 2u * kPerThread);
  EXPECT_EQ(w.store.owner_view(b).shelves.size(), 2u * kPerThread);
}
