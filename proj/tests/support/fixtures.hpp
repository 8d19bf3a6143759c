#pragma once

#include <random>
#include <string>
#include <vector>

#include "alex/catalog/authority.hpp"
#include "alex/catalog/record.hpp"

namespace alex::fixture {

// Paragraph quoted in the content-search discussion (Huck Finn's father).
inline const std::string kHuckFinnParagraph =
    "He was most fifty, and he looked it. His hair was long and tangled and greasy, and hung down, "
    "and you could see his eyes shining through like he was behind vines. It was all black, no gray; "
    "so was his long, mixed-up whiskers. There warn't no color in his face, where his face showed; it "
    "was white; not like another man's white, but a white to make a body sick, a white to make a "
    "body's flesh crawl- a tree-toad white, a fish-belly white. As for his clothes- just rags, that "
    "was all. He had one ankle resting on 'tother knee; the boot on that foot was busted, and two of "
    "his toes stuck through, and he worked them now and then. His hat was laying on the floor; an old "
    "black slouch with the top caved in, like a lid.";

// The Titus Andronicus passage, as it is quoted in context.
inline const std::string kTitusParagraph =
    "Titus Andronicus: How now, Lavinia! Marcus, what means this? Some book there is that she "
    "desires to see. Which is it, girl, of these? Open them, boy. But thou art deeper read, and "
    "better skill'd Come, and take choice of all my library, And so beguile thy sorrow, till the "
    "heavens Reveal the damn'd contriver of this deed. Why lifts she up her arms in sequence thus?";

// Other paragraphs, written for the fixtures.
inline const std::string kHuckFinnText =
    "I never felt easy till the raft was two mile below there and out in the middle of the "
    "Mississippi.\n\n" +
    kHuckFinnParagraph +
    "\n\nWell, the days went along, and the river went down between its banks, and we talked about "
    "a fish as big as a man.\n";

inline const std::string kTitusText =
    "Enter TITUS, MARCUS, and young LUCIUS with books under his arm.\n\n" + kTitusParagraph +
    "\n\nThe library of Marcus is small, and my books are old.\n";

inline catalog::TemplateRecord figure_record() {
  catalog::TemplateRecord r;
  r.id = 26;
  r.title = "Adventures Of Huckleberry Finn";
  r.authors = {"Twain, Mark"};
  r.year_conceived = 1885;
  r.publisher = "Virginia Tech";
  r.year_published = 0;
  r.url = "gopher://gopher.vt.edu";
  r.size_bytes = 576333;
  r.mime_type = "text/html";
  r.directory = "American - 1800-1899";
  r.reformat_method = catalog::ReformatMethod::add_blank_lines;
  return r;
}

inline catalog::AuthoritySet figure_authorities() {
  catalog::AuthoritySet a;
  a.authors.add("Twain, Mark", "Twain, Mark");
  a.authors.add("Shakespeare, William", "Shakespeare, William");
  a.publishers.add("Virginia Tech", "Virginia Tech");
  a.time_periods.add("1500-1599", "Sixteenth century");
  a.time_periods.add("1800-1899", "Nineteenth century");
  return a;
}

inline catalog::VocabularySet figure_vocabularies() {
  catalog::VocabularySet v;
  v.subjects.add("Shakespeare, William, 1564-1616");
  v.subjects.add("text collections");
  v.genres.add("Allegories");
  v.genres.add("Bildungsromane");
  return v;
}

// Random strings over an alphabet that stresses the template syntax:
// colons, leading spaces, newlines, non-ASCII.
class RandomText {
 public:
  explicit RandomText(std::uint32_t seed) : rng_(seed) {}

  std::string line(std::size_t min_len, std::size_t max_len) { return make(min_len, max_len, false); }
  std::string multiline(std::size_t max_len) { return make(0, max_len, true); }
  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin() { return below(2) == 0; }
  std::mt19937& rng() { return rng_; }

 private:
  std::string make(std::size_t min_len, std::size_t max_len, bool newlines) {
    static const std::vector<std::string> pieces{
        "a", "b", "e", "Q", "z", " ", ":", "-", "'", ",", "7", "é", "ß", "—", "\t", "Title: ", "  "};
    std::string s;
    auto n = min_len + below(max_len - min_len + 1);
    for (std::size_t i = 0; i < n; ++i) {
      if (newlines && below(12) == 0) {
        s += '\n';
      } else {
        s += pieces[below(pieces.size())];
      }
    }
    return s;
  }

  std::mt19937 rng_;
};

}  // namespace alex::fixture

namespace alex::fixture {

// A record that validates against figure_authorities()/figure_vocabularies().
inline catalog::TemplateRecord random_valid_record(RandomText& g) {
  auto maybe = [&](std::size_t max_len) -> std::optional<std::string> {
    if (g.coin()) return std::nullopt;
    return g.multiline(max_len);
  };
  static const std::vector<std::string> authors{"Twain, Mark", "Shakespeare, William"};
  static const std::vector<std::string> subjects{"Shakespeare, William, 1564-1616", "text collections"};
  static const std::vector<std::string> genres{"Allegories", "Bildungsromane"};
  static const std::vector<std::string> dirs{"American - 1800-1899", "English - 1500-1599"};
  static const std::vector<std::string> mimes{"text/plain", "text/html", "application/gzip",
                                              "text/plain; charset=utf-8", "application/msword"};

  catalog::TemplateRecord r;
  r.id = 1 + static_cast<std::int64_t>(g.below(1'000'000));
  r.title = g.line(1, 40);
  if (r.title.front() == ' ' && g.coin()) r.title += "\ncontinued";
  r.subtitle = maybe(30);
  r.alternate_title = maybe(30);
  r.authors.push_back(authors[g.below(authors.size())]);
  if (g.coin()) r.authors.push_back(authors[g.below(authors.size())]);
  r.author_statement = maybe(40);
  r.year_conceived = g.coin() ? 0 : static_cast<std::int32_t>(1500 + g.below(500));
  if (g.coin()) r.publisher = "Virginia Tech";
  r.year_published = g.coin() ? 0 : static_cast<std::int32_t>(1800 + g.below(220));
  r.url = "http://example.org/" + std::to_string(g.below(10000)) + ".txt";
  r.proxy_url = g.coin() ? std::optional<std::string>("http://proxy.example.org/x") : std::nullopt;
  r.size_bytes = g.below(10'000'000);
  r.mime_type = mimes[g.below(mimes.size())];
  for (std::size_t i = g.below(3); i > 0; --i) r.subjects.push_back(subjects[g.below(subjects.size())]);
  for (std::size_t i = g.below(3); i > 0; --i) r.genres.push_back(genres[g.below(genres.size())]);
  r.directory = dirs[g.below(dirs.size())];
  r.reformat_method = g.coin() ? catalog::ReformatMethod::add_blank_lines
                               : catalog::ReformatMethod::already_delimited;
  r.note = maybe(80);
  return r;
}

}  // namespace alex::fixture
