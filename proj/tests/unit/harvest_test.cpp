#include <gtest/gtest.h>
#include <zlib.h>

#include <atomic>
#include <cstdlib>
#include <fstream>

#include "alex/catalog/archive_layout.hpp"
#include "alex/catalog/template_format.hpp"
#include "alex/error.hpp"
#include "alex/harvest/extract.hpp"
#include "alex/harvest/fetch.hpp"
#include "alex/harvest/ingest.hpp"
#include "alex/harvest/instant_library.hpp"
#include "alex/harvest/links.hpp"
#include "alex/harvest/url.hpp"
#include "alex/harvest/zip.hpp"
#include "alex/search/descriptor.hpp"
#include "alex/search/query.hpp"
#include "alex/text/utf8.hpp"
#include "fixture_server.hpp"
#include "fixtures.hpp"
#include "tempdir.hpp"

using namespace alex;
using namespace alex::harvest;

namespace {

Errc error_of(const std::function<void()>& f, int* status = nullptr) {
  try {
    f();
  } catch (const Error& e) {
    if (status) *status = e.status();
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return Errc::validation;
}

std::string gzip(std::string_view data) {
  z_stream zs{};
  deflateInit2(&zs, 6, Z_DEFLATED, 16 + MAX_WBITS, 8, Z_DEFAULT_STRATEGY);
  std::string out(deflateBound(&zs, data.size()) + 32, '\0');
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  deflate(&zs, Z_FINISH);
  out.resize(zs.total_out);
  deflateEnd(&zs);
  return out;
}

FetchResult fetched(std::string mime, std::string body) {
  FetchResult f;
  f.url = "http://example.org/x";
  f.status = 200;
  f.mime_type = std::move(mime);
  f.body = std::move(body);
  f.length_bytes = f.body.size();
  return f;
}

// Serves the two fixture texts plus assorted failure modes.
class Site {
 public:
  Site() {
    auto& s = srv.server();
    s.Get("/huck.txt", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(fixture::kHuckFinnText, "text/plain; charset=utf-8");
      res.set_header("Last-Modified", "Wed, 21 Oct 2015 07:28:00 GMT");
    });
    s.Get("/titus.html", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("<html><head><title>Titus  Andronicus</title></head><body><p>" + fixture::kTitusParagraph +
                          "</p><p>The library of Marcus is small.</p></body></html>",
                      "text/html");
    });
    s.Get("/huck.txt.gz", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(gzip(fixture::kHuckFinnText), "application/gzip");
    });
    s.Get("/report.pdf", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("%PDF-1.4 not really", "application/pdf");
    });
    s.Get("/letter.doc", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("\xD0\xCF\x11\xE0 binary", "application/msword");
    });
    s.Get("/latin1.txt", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("caf\xE9\n", "text/plain");
    });
    s.Get(R"(/hop/(\d+))", [](const httplib::Request& req, httplib::Response& res) {
      int n = std::stoi(req.matches[1]);
      if (n == 0) {
        res.set_content("arrived\n", "text/plain");
      } else {
        res.set_redirect("/hop/" + std::to_string(n - 1));
      }
    });
    s.Get("/loop/a", [](const httplib::Request&, httplib::Response& res) { res.set_redirect("/loop/b"); });
    s.Get("/loop/b", [](const httplib::Request&, httplib::Response& res) { res.set_redirect("b/../a"); });
    s.Get("/relative/start", [](const httplib::Request&, httplib::Response& res) { res.set_redirect("end"); });
    s.Get("/relative/end", [](const httplib::Request&, httplib::Response& res) { res.set_content("ok", "text/plain"); });
    s.Get("/broken", [](const httplib::Request&, httplib::Response& res) { res.status = 500; });
    s.Get("/slow", [](const httplib::Request&, httplib::Response& res) {
      std::this_thread::sleep_for(std::chrono::milliseconds(1200));
      res.set_content("late", "text/plain");
    });
    s.Get("/private/secret.txt", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("secret", "text/plain");
    });
    s.Get("/ua", [this](const httplib::Request& req, httplib::Response& res) {
      last_user_agent = req.get_header_value("User-Agent");
      res.set_content("ua", "text/plain");
    });
    s.Get("/nohead.txt", [](const httplib::Request&, httplib::Response& res) { res.set_content("x", "text/plain"); });
    s.set_pre_routing_handler([](const httplib::Request& req, httplib::Response& res) {
      if (req.method == "HEAD" && req.path == "/nohead.txt") {
        res.status = 405;
        return httplib::Server::HandlerResponse::Handled;
      }
      return httplib::Server::HandlerResponse::Unhandled;
    });
    s.Get("/robots.txt", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("User-agent: *\nDisallow: /private\n", "text/plain");
    });
    srv.start();
  }

  std::string url(const std::string& path) const { return srv.url(path); }

  fixture::FixtureServer srv;
  std::string last_user_agent;
};

CuratorInput huck_curator() {
  CuratorInput c;
  c.authors = {"Twain, Mark"};
  c.directory = "American - 1800-1899";
  c.reformat_method = catalog::ReformatMethod::already_delimited;
  return c;
}

void seed(store::Catalogue& c) {
  c.set_authorities(fixture::figure_authorities());
  c.set_vocabularies(fixture::figure_vocabularies());
}

}  // namespace

// ---------------------------------------------------------------- urls

TEST(UrlTest, ParseAndResolve) {
  auto u = parse_url("http://Example.org:8080/a/b/c?q=1");
  EXPECT_EQ(u.scheme, "http");
  EXPECT_EQ(u.port, 8080);
  EXPECT_EQ(u.target, "/a/b/c?q=1");
  EXPECT_EQ(parse_url("https://example.org").target, "/");
  EXPECT_EQ(parse_url("https://example.org").port, 443);
  EXPECT_EQ(resolve_url(u, "d").target, "/a/b/d");
  EXPECT_EQ(resolve_url(u, "../d").target, "/a/d");
  EXPECT_EQ(resolve_url(u, "./../../../d?x").target, "/d?x");
  EXPECT_EQ(resolve_url(u, "/z").target, "/z");
  EXPECT_EQ(resolve_url(u, "?k").target, "/a/b/c?k");
  EXPECT_EQ(resolve_url(u, "//other.org/p").host, "other.org");
  EXPECT_EQ(error_of([] { parse_url("ftp://x/y"); }), Errc::unsupported_scheme);
  EXPECT_EQ(error_of([] { parse_url("not a url"); }), Errc::validation);
}

// ---------------------------------------------------------------- fetch

TEST(FetchTest, PlainText) {
  Site site;
  Fetcher f;
  auto r = f.fetch(site.url("/huck.txt"));
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.mime_type, "text/plain");
  EXPECT_EQ(r.length_bytes, fixture::kHuckFinnText.size());
  EXPECT_EQ(r.body, fixture::kHuckFinnText);
  EXPECT_EQ(r.last_modified, "Wed, 21 Oct 2015 07:28:00 GMT");
}

TEST(FetchTest, StatusErrors) {
  Site site;
  Fetcher f;
  int status = 0;
  EXPECT_EQ(error_of([&] { f.fetch(site.url("/missing")); }, &status), Errc::not_found);
  EXPECT_EQ(status, 404);
  EXPECT_EQ(error_of([&] { f.fetch(site.url("/broken")); }, &status), Errc::http_status);
  EXPECT_EQ(status, 500);
}

TEST(FetchTest, Redirects) {
  Site site;
  Fetcher f;
  auto r = f.fetch(site.url("/hop/5"));
  EXPECT_EQ(r.body, "arrived\n");
  EXPECT_EQ(r.url, site.url("/hop/0"));
  EXPECT_EQ(error_of([&] { f.fetch(site.url("/hop/6")); }), Errc::redirect_limit);
  EXPECT_EQ(error_of([&] { f.fetch(site.url("/loop/a")); }), Errc::redirect_loop);
  EXPECT_EQ(f.fetch(site.url("/relative/start")).body, "ok");
}

TEST(FetchTest, TimeoutNetworkAndScheme) {
  Site site;
  Fetcher f({.timeout = std::chrono::milliseconds(300)});
  EXPECT_EQ(error_of([&] { f.fetch(site.url("/slow")); }), Errc::timeout);

  fixture::FixtureServer closed;
  closed.start();
  auto dead = closed.url("/x");
  closed.stop();
  EXPECT_EQ(error_of([&] { f.fetch(dead); }), Errc::network);
  EXPECT_EQ(error_of([&] { f.fetch("gopher://gopher.vt.edu"); }), Errc::unsupported_scheme);
}

TEST(FetchTest, RobotsAndUserAgent) {
  Site site;
  Fetcher polite;
  EXPECT_EQ(error_of([&] { polite.fetch(site.url("/private/secret.txt")); }), Errc::robots_disallowed);
  polite.fetch(site.url("/ua"));
  EXPECT_EQ(site.last_user_agent, polite.options().user_agent);
  EXPECT_NE(site.last_user_agent.find("Alex"), std::string::npos);
  Fetcher rude({.obey_robots = false});
  EXPECT_EQ(rude.fetch(site.url("/private/secret.txt")).body, "secret");
}

TEST(RobotsTest, GroupSelectionAndLongestMatch) {
  const char* txt =
      "# comment\n"
      "User-agent: *\nDisallow: /\n\n"
      "User-agent: alexcatalogueharvester\nUser-agent: other\nDisallow: /search\nAllow: /search/public\n";
  auto ours = RobotsRules::parse(txt, "AlexCatalogueHarvester/1.0");
  EXPECT_TRUE(ours.allows("/texts/1"));
  EXPECT_FALSE(ours.allows("/search?q=x"));
  EXPECT_TRUE(ours.allows("/search/public/1"));
  auto theirs = RobotsRules::parse(txt, "SomeBot/2");
  EXPECT_FALSE(theirs.allows("/anything"));
  EXPECT_TRUE(RobotsRules::parse("User-agent: *\nDisallow:\n", "x").allows("/a"));
  EXPECT_TRUE(RobotsRules::parse("", "x").allows("/a"));
}

TEST(FetchTest, SniffsMissingContentType) {
  EXPECT_EQ(sniff_mime_type("%PDF-1.3"), "application/pdf");
  EXPECT_EQ(sniff_mime_type("  <!DOCTYPE html><html>"), "text/html");
  EXPECT_EQ(sniff_mime_type(gzip("x")), "application/gzip");
  EXPECT_EQ(sniff_mime_type("plain words\n"), "text/plain");
  EXPECT_EQ(sniff_mime_type("\xff\xfe\x00"), "application/octet-stream");
}

// ---------------------------------------------------------------- extract

TEST(ExtractTest, HtmlTitle) {
  auto m = extract_metadata(fetched("text/html", "<html><title>Titus  Andronicus</title><body>x</body></html>"));
  EXPECT_EQ(m.title, "Titus Andronicus");
  m = extract_metadata(fetched("text/html", "<HTML><HEAD><TITLE lang=en>\n  Tom &amp; Huck&#8217;s\tTale </TITLE>"
                                            "<title>second</title>"));
  EXPECT_EQ(m.title, "Tom & Huck’s Tale");
  EXPECT_FALSE(extract_metadata(fetched("text/html", "<html><titles>no</titles></html>")).title);
}

TEST(ExtractTest, PlainTextTitle) {
  auto m = extract_metadata(fetched("text/plain", "\n   \nADVENTURES OF HUCKLEBERRY FINN\nby Mark Twain\n"));
  EXPECT_EQ(m.title, "ADVENTURES OF HUCKLEBERRY FINN");
  std::string long_line;
  for (int i = 0; i < 50; ++i) long_line += "é-x";
  m = extract_metadata(fetched("text/plain", long_line + "\nrest"));
  ASSERT_TRUE(m.title);
  EXPECT_EQ(text::utf8_length(*m.title), 120u);
  EXPECT_TRUE(long_line.starts_with(*m.title));
}

TEST(ExtractTest, EmptyBodyHasNoTitle) {
  EXPECT_FALSE(extract_metadata(fetched("text/plain", "")).title);
  EXPECT_FALSE(extract_metadata(fetched("application/pdf", "%PDF")).title);
}

TEST(ExtractTest, LengthDateAndEncoding) {
  auto f = fetched("text/plain", "abc\n");
  f.last_modified = "Sun, 06 Nov 1994 08:49:37 GMT";
  auto m = extract_metadata(f);
  EXPECT_EQ(m.length_bytes, 4u);
  EXPECT_EQ(m.date, "1994-11-06");
  EXPECT_EQ(m.year, 1994);
  EXPECT_EQ(error_of([] { extract_metadata(fetched("text/plain", "caf\xE9")); }), Errc::encoding);
}

TEST(ExtractTest, HtmlToText) {
  auto t = html_to_text(
      "<html><head><title>T</title><style>p{}</style></head><body><h1>Heading</h1>"
      "<p>One   two\nthree &amp; four</p><script>var x = '<p>';</script><p>Five<br>six</p>"
      "<pre>  keep\n    this</pre><!-- <p>hidden</p> --></body></html>");
  EXPECT_EQ(t, "Heading\n\nOne two three & four\n\nFive\nsix\n\n  keep\n    this\n\n");
  EXPECT_EQ(decode_entities("&lt;a&gt; &#x41;&#66; &bogus; & &#0;"), "<a> AB &bogus; & �");
}

TEST(ExtractTest, DocumentText) {
  EXPECT_EQ(document_text(fetched("application/gzip", gzip(fixture::kHuckFinnText))), fixture::kHuckFinnText);
  EXPECT_EQ(document_text(fetched("application/gzip", gzip("<html><p>a</p></html>"))), "a\n\n");
  EXPECT_EQ(error_of([] { document_text(fetched("application/msword", "x")); }), Errc::conversion_unsupported);
  EXPECT_EQ(error_of([] { document_text(fetched("application/gzip", "not gzip")); }), Errc::conversion_unsupported);
  EXPECT_EQ(error_of([] { document_text(fetched("application/gzip", gzip("\xff\xfe\x00"))); }),
            Errc::conversion_unsupported);
  EXPECT_EQ(error_of([] { document_text(fetched("application/gzip", gzip("caf\xe9"))); }), Errc::conversion_unsupported);
}

// ---------------------------------------------------------------- ingest

TEST(IngestTest, EndToEnd) {
  Site site;
  fixture::TempDir dir;
  store::Catalogue cat(dir.path());
  seed(cat);
  Fetcher f;
  auto res = ingest(cat, f, site.url("/huck.txt"), huck_curator());
  EXPECT_EQ(res.record.id, 1);
  EXPECT_EQ(res.record.title, "I never felt easy till the raft was two mile below there and out in the middle of the Mississippi.");
  EXPECT_EQ(res.record.size_bytes, fixture::kHuckFinnText.size());
  EXPECT_EQ(res.record.mime_type, "text/plain");
  EXPECT_EQ(res.record.year_published, 2015);
  EXPECT_EQ(res.paragraphs, 3u);

  auto snap = cat.snapshot();
  EXPECT_EQ(snap->metadata.evaluate(search::parse_query("author:twain")), std::set<std::int64_t>{1});
  auto hits = search::search_content(snap->select({1}), search::parse_query("fish and belly"));
  ASSERT_FALSE(hits.empty());
  EXPECT_NE(snap->content_for(1).paragraph(hits[0].ordinal).text.find("a fish-belly white"), std::string::npos);
  // The archived text is the fetched text, byte for byte, since it was canonical already.
  EXPECT_EQ(cat.archived_text(1).size(), res.record.size_bytes);
}

TEST(IngestTest, CuratorOverridesAndHtml) {
  Site site;
  fixture::TempDir dir;
  store::Catalogue cat(dir.path());
  seed(cat);
  Fetcher f;
  CuratorInput c;
  c.id = 40;
  c.authors = {"Shakespeare, William"};
  c.directory = "English - 1500-1599";
  c.subjects = {"Shakespeare, William, 1564-1616"};
  c.year_conceived = 1594;
  auto res = ingest(cat, f, site.url("/titus.html"), c);
  EXPECT_EQ(res.record.id, 40);
  EXPECT_EQ(res.record.title, "Titus Andronicus");
  EXPECT_EQ(res.record.year_conceived, 1594);
  EXPECT_EQ(res.archived_path, "english-1500-1599/40-titus-andronicus.txt");
  auto snap = cat.snapshot();
  auto hits = search::search_content(snap->select({40}), search::parse_query("\"my library\""));
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].excerpt, std::string(text::utf8_prefix(fixture::kTitusParagraph, 70)));
}

TEST(IngestTest, GzipIsUnpacked) {
  Site site;
  fixture::TempDir dir;
  store::Catalogue cat(dir.path());
  seed(cat);
  Fetcher f;
  auto c = huck_curator();
  c.title = "Adventures of Huckleberry Finn";
  auto res = ingest(cat, f, site.url("/huck.txt.gz"), c);
  EXPECT_EQ(res.record.mime_type, "application/gzip");
  EXPECT_EQ(res.record.size_bytes, gzip(fixture::kHuckFinnText).size());
  EXPECT_EQ(cat.archived_text(res.record.id), fixture::kHuckFinnText);
}

TEST(IngestTest, RejectionsLeaveNothingBehind) {
  Site site;
  fixture::TempDir dir;
  store::Catalogue cat(dir.path());
  seed(cat);
  Fetcher f;
  auto before = fixture::tree_bytes(dir.path());
  EXPECT_EQ(error_of([&] { ingest(cat, f, site.url("/report.pdf"), huck_curator()); }), Errc::policy_rejected);
  auto letter = huck_curator();
  letter.title = "A Letter";
  EXPECT_EQ(error_of([&] { ingest(cat, f, site.url("/letter.doc"), letter); }), Errc::conversion_unsupported);
  EXPECT_EQ(error_of([&] { ingest(cat, f, site.url("/latin1.txt"), huck_curator()); }), Errc::encoding);
  auto restricted = huck_curator();
  restricted.license = catalog::License::restricted;
  EXPECT_EQ(error_of([&] { ingest(cat, f, site.url("/huck.txt"), restricted); }), Errc::policy_rejected);
  auto unknown_author = huck_curator();
  unknown_author.authors = {"Nobody, A."};
  EXPECT_EQ(error_of([&] { ingest(cat, f, site.url("/huck.txt"), unknown_author); }), Errc::validation);
  EXPECT_EQ(error_of([&] { ingest(cat, f, site.url("/missing.txt"), huck_curator()); }), Errc::not_found);
  EXPECT_EQ(fixture::tree_bytes(dir.path()), before);
  EXPECT_TRUE(cat.snapshot()->metadata.records().empty());
}

TEST(IngestTest, DraftReportsPolicyAndViolations) {
  store::CatalogueState state;
  state.authorities = fixture::figure_authorities();
  auto d = prepare_draft(fetched("application/pdf", "%PDF"), {}, state);
  EXPECT_FALSE(d.ready());
  EXPECT_FALSE(d.policy.accepted);
  EXPECT_FALSE(d.violations.empty());  // no title, no author, no directory
  auto text = describe(d);
  EXPECT_NE(text.find("policy:"), std::string::npos);
}

TEST(IngestTest, SameUrlTwiceKeepsOneRecord) {
  Site site;
  fixture::TempDir dir;
  store::Catalogue cat(dir.path());
  seed(cat);
  Fetcher f;
  auto first = ingest(cat, f, site.url("/huck.txt"), huck_curator());
  auto second = ingest(cat, f, site.url("/huck.txt"), huck_curator());
  EXPECT_EQ(first.record.id, second.record.id);
  EXPECT_EQ(cat.snapshot()->metadata.records().size(), 1u);
  auto explicit_id = huck_curator();
  explicit_id.id = first.record.id;
  ingest(cat, f, site.url("/huck.txt"), explicit_id);
  EXPECT_EQ(cat.snapshot()->metadata.records().size(), 1u);
}

TEST(IngestTest, FaultAtEveryStageLeavesNoPartialArtifacts) {
  Site site;
  auto huck = huck_curator();
  huck.id = 5;  // stage names carry paths, so pin the id across runs
  std::vector<std::string> stages;
  {
    fixture::TempDir dir;
    store::Catalogue cat(dir.path());
    seed(cat);
    Fetcher f;
    ingest(cat, f, site.url("/huck.txt"), huck, {}, [&](std::string_view s) { stages.emplace_back(s); });
  }
  ASSERT_GE(stages.size(), 8u);
  EXPECT_EQ(stages.front(), "fetched");

  for (const auto& stage : stages) {
    fixture::TempDir dir;
    store::Catalogue cat(dir.path());
    seed(cat);
    Fetcher f;
    CuratorInput titus;
    titus.authors = {"Shakespeare, William"};
    titus.directory = "English - 1500-1599";
    ingest(cat, f, site.url("/titus.html"), titus);
    auto before = fixture::tree_bytes(dir.path());
    auto hook = [&](std::string_view s) {
      if (s == stage) throw Error(Errc::injected_fault, std::string(s));
    };
    EXPECT_EQ(error_of([&] { ingest(cat, f, site.url("/huck.txt"), huck, {}, hook); }), Errc::injected_fault)
        << stage;
    EXPECT_EQ(fixture::tree_bytes(dir.path()), before) << stage;
    EXPECT_EQ(cat.snapshot()->metadata.records().size(), 1u) << stage;
    EXPECT_TRUE(cat.snapshot()->metadata.evaluate(search::parse_query("twain")).empty()) << stage;
  }
}

// ---------------------------------------------------------------- links

TEST(LinkCheckTest, ReportsEveryRecordOnce) {
  Site site;
  Fetcher f;
  std::vector<catalog::TemplateRecord> records;
  for (const auto& [id, path] : std::vector<std::pair<int, std::string>>{{1, "/huck.txt"}, {2, "/titus.html"}, {3, "/nohead.txt"}}) {
    auto r = fixture::figure_record();
    r.id = id;
    r.url = site.url(path);
    records.push_back(r);
  }
  auto clock = [] { return std::string("2026-01-01T00:00:00Z"); };
  auto all_live = check_links(records, f, clock);
  EXPECT_EQ(all_live.rows.size(), records.size());
  EXPECT_EQ(all_live.failures(), 0u);
  EXPECT_EQ(all_live.rows[2].status, 200);
  EXPECT_EQ(all_live.rows[0].checked_at, "2026-01-01T00:00:00Z");

  records[1].url = site.url("/gone.html");
  records.push_back(fixture::figure_record());  // gopher
  auto report = check_links(records, f, clock);
  ASSERT_EQ(report.rows.size(), records.size());
  EXPECT_EQ(report.failures(), 2u);
  EXPECT_FALSE(report.rows[1].ok);
  EXPECT_EQ(report.rows[1].status, 404);
  EXPECT_EQ(report.rows[1].error, "not-found");
  EXPECT_EQ(report.rows[3].error, "unsupported-scheme");
  for (std::size_t i = 0; i < records.size(); ++i) EXPECT_EQ(report.rows[i].id, records[i].id);
}

// ---------------------------------------------------------------- instant libraries

TEST(ZipTest, RoundTripAndDeterminism) {
  ZipWriter a, b;
  for (auto* w : {&a, &b}) {
    w->add("dir/one.txt", fixture::kHuckFinnText);
    w->add("two.txt", "x");
    w->add("empty.txt", "");
  }
  auto za = a.finish(), zb = b.finish();
  EXPECT_EQ(za, zb);
  auto entries = read_zip(za);
  ASSERT_EQ(entries.size(), 3u);
  EXPECT_EQ(entries[0].name, "dir/one.txt");
  EXPECT_EQ(entries[0].data, fixture::kHuckFinnText);
  EXPECT_EQ(entries[1].data, "x");
  EXPECT_EQ(entries[2].data, "");
}

TEST(InstantLibraryTest, CollectionExport) {
  Site site;
  fixture::TempDir dir;
  store::Catalogue cat(dir.path());
  seed(cat);
  Fetcher f;
  ingest(cat, f, site.url("/huck.txt"), huck_curator());
  auto tom = huck_curator();
  tom.title = "The Adventures of Tom Sawyer";
  tom.id = 7;
  ingest(cat, f, site.url("/huck.txt.gz"), tom);
  CuratorInput titus;
  titus.authors = {"Shakespeare, William"};
  titus.directory = "English - 1500-1599";
  ingest(cat, f, site.url("/titus.html"), titus);

  auto lib = build_instant_library(cat, "american", "http://alex.example.org");
  auto entries = read_zip(lib.zip);
  ASSERT_EQ(entries.size(), 6u);
  std::size_t txt = 0, tpl = 0, src = 0;
  for (const auto& e : entries) {
    EXPECT_TRUE(e.name.starts_with("american-1800-1899/")) << e.name;
    txt += e.name.ends_with(".txt");
    tpl += e.name.ends_with(".tpl");
    src += e.name.ends_with(".src");
    if (e.name.ends_with(".tpl")) EXPECT_NO_THROW(catalog::parse_template(e.data));
    if (e.name.ends_with(".src")) EXPECT_EQ(search::parse_descriptor(e.data).host, "http://alex.example.org");
  }
  EXPECT_EQ(txt, 2u);
  EXPECT_EQ(tpl, 2u);
  EXPECT_EQ(src, 2u);
  ASSERT_EQ(lib.manifest.size(), 6u);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    EXPECT_EQ(lib.manifest[i].path, entries[i].name);
    EXPECT_EQ(lib.manifest[i].size, entries[i].data.size());
  }
  auto manifest = lib.manifest_text();
  EXPECT_EQ(std::count(manifest.begin(), manifest.end(), '\n'), 6);

  EXPECT_EQ(build_instant_library(cat, "american", "http://alex.example.org").zip, lib.zip);
  EXPECT_EQ(build_instant_library(cat, "English", "http://alex.example.org").manifest.size(), 3u);
  EXPECT_EQ(error_of([&] { build_instant_library(cat, "french", "http://x"); }), Errc::empty_collection);
  EXPECT_EQ(error_of([&] { build_instant_library(cat, "", "http://x"); }), Errc::empty_collection);

  // An independent reader agrees.
  auto zip_path = dir.path() / "american.zip";
  std::ofstream(zip_path, std::ios::binary) << lib.zip;
  auto cmd = "python3 -c \"import zipfile,sys; z=zipfile.ZipFile(sys.argv[1]); "
             "sys.exit(0 if z.testzip() is None and len(z.namelist())==6 else 1)\" " +
             zip_path.string();
  EXPECT_EQ(std::system(cmd.c_str()), 0);
}
