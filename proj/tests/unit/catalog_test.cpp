#include <gtest/gtest.h>

#include <set>

#include "alex/catalog/archive_layout.hpp"
#include "alex/catalog/authority.hpp"
#include "alex/catalog/policy.hpp"
#include "alex/catalog/template_format.hpp"
#include "alex/catalog/validation.hpp"
#include "alex/error.hpp"
#include "fixtures.hpp"

using namespace alex;
using namespace alex::catalog;

namespace {

Errc error_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an alex::Error";
  return Errc::injected_fault;
}

std::set<ViolationKind> kinds(const ValidationReport& report) {
  std::set<ViolationKind> out;
  for (const auto& v : report) out.insert(v.kind);
  return out;
}

}  // namespace

TEST(PolicyTest, PlainTextPublicDomainCompleteIsRankOne) {
  auto d = evaluate_policy("text/plain", License::public_domain, true);
  EXPECT_TRUE(d.accepted);
  EXPECT_EQ(d.preference_rank, 1);
  EXPECT_TRUE(d.reasons.empty());
}

TEST(PolicyTest, PdfIsRejectedAsUnalterable) {
  auto d = evaluate_policy("application/pdf", License::public_domain, true);
  EXPECT_FALSE(d.accepted);
  EXPECT_FALSE(d.preference_rank.has_value());
  ASSERT_EQ(d.reasons.size(), 1u);
  EXPECT_EQ(d.reasons[0], PolicyRule::format_unalterable);
}

TEST(PolicyTest, RestrictedLicenseIsRejected) {
  auto d = evaluate_policy("text/plain", License::restricted, true);
  EXPECT_FALSE(d.accepted);
  EXPECT_EQ(d.reasons, std::vector<PolicyRule>{PolicyRule::license});
}

TEST(PolicyTest, IncompleteWorkIsRejected) {
  auto d = evaluate_policy("text/plain", License::free, false);
  EXPECT_FALSE(d.accepted);
  EXPECT_EQ(d.reasons, std::vector<PolicyRule>{PolicyRule::incomplete});
}

TEST(PolicyTest, EveryFailedRuleIsReported) {
  auto d = evaluate_policy("application/pdf", License::restricted, false);
  EXPECT_EQ(d.reasons, (std::vector<PolicyRule>{PolicyRule::license, PolicyRule::incomplete,
                                                PolicyRule::format_unalterable}));
}

TEST(PolicyTest, RanksFollowPreferenceOrderForEveryLicense) {
  const std::vector<std::string> ordered{"text/plain", "text/html", "application/gzip",
                                         "application/msword"};
  for (auto license : {License::public_domain, License::free}) {
    int previous = 0;
    for (const auto& mime : ordered) {
      auto d = evaluate_policy(mime, license, true);
      ASSERT_TRUE(d.accepted) << mime;
      EXPECT_GT(*d.preference_rank, previous) << mime;
      previous = *d.preference_rank;
    }
    EXPECT_FALSE(evaluate_policy("application/pdf", license, true).accepted);
  }
}

TEST(PolicyTest, ParametersAndCaseAreIgnoredForRanking) {
  EXPECT_EQ(evaluate_policy("Text/HTML; charset=\"iso-8859-1\"", License::free, true).preference_rank, 2);
  EXPECT_EQ(evaluate_policy("application/zip", License::free, true).preference_rank, 3);
  EXPECT_EQ(evaluate_policy("application/rtf", License::free, true).preference_rank, 4);
}

TEST(PolicyTest, UnknownTypeIsUnsupported) {
  auto d = evaluate_policy("image/png", License::free, true);
  EXPECT_EQ(d.reasons, std::vector<PolicyRule>{PolicyRule::format_unsupported});
}

TEST(PolicyTest, ConfiguredAllowlistsApply) {
  PolicyConfig config;
  config.compressed_types = {"application/x-bzip2"};
  EXPECT_EQ(evaluate_policy("application/x-bzip2", License::free, true, config).preference_rank, 3);
  EXPECT_FALSE(evaluate_policy("application/gzip", License::free, true, config).accepted);
}

TEST(PolicyTest, MalformedMediaTypeIsAValidationError) {
  for (const char* bad : {"", "text", "text/", "/plain", "text/plain;", "text/plain; a", "te xt/plain",
                          "text/plain; a=\"unterminated"}) {
    EXPECT_EQ(error_code([&] { evaluate_policy(bad, License::free, true); }), Errc::validation) << bad;
  }
}

TEST(ValidationTest, FigureRecordValidates) {
  auto report = validate_record(fixture::figure_record(), fixture::figure_authorities(),
                                fixture::figure_vocabularies());
  EXPECT_TRUE(report.empty()) << report.front().message;
}

TEST(ValidationTest, UnknownAuthorIsOneViolation) {
  auto r = fixture::figure_record();
  r.authors = {"Doe, J"};
  auto report = validate_record(r, fixture::figure_authorities(), fixture::figure_vocabularies());
  ASSERT_EQ(report.size(), 1u);
  EXPECT_EQ(report[0].field, "authors");
  EXPECT_EQ(report[0].kind, ViolationKind::unknown_author);
}

TEST(ValidationTest, EmptyTitleIsOneViolation) {
  auto r = fixture::figure_record();
  r.title.clear();
  auto report = validate_record(r, fixture::figure_authorities(), fixture::figure_vocabularies());
  ASSERT_EQ(report.size(), 1u);
  EXPECT_EQ(report[0].field, "title");
  EXPECT_EQ(report[0].kind, ViolationKind::empty_title);
}

TEST(ValidationTest, EachMutationYieldsExactlyItsViolationClass) {
  using Mutation = std::pair<ViolationKind, std::function<void(TemplateRecord&)>>;
  const std::vector<Mutation> mutations{
      {ViolationKind::invalid_id, [](auto& r) { r.id = 0; }},
      {ViolationKind::invalid_id, [](auto& r) { r.id = -4; }},
      {ViolationKind::empty_title, [](auto& r) { r.title.clear(); }},
      {ViolationKind::no_authors, [](auto& r) { r.authors.clear(); }},
      {ViolationKind::unknown_author, [](auto& r) { r.authors.push_back("Poe, Edgar Allan"); }},
      {ViolationKind::unknown_publisher, [](auto& r) { r.publisher = "Gutenberg"; }},
      {ViolationKind::unknown_subject, [](auto& r) { r.subjects = {"rivers"}; }},
      {ViolationKind::unknown_genre, [](auto& r) { r.genres = {"Westerns"}; }},
      {ViolationKind::invalid_mime, [](auto& r) { r.mime_type = "html"; }},
      {ViolationKind::forbidden_mime, [](auto& r) { r.mime_type = "application/pdf"; }},
      {ViolationKind::invalid_directory, [](auto& r) { r.directory = "American"; }},
      {ViolationKind::invalid_directory, [](auto& r) { r.directory = "American - 1850-1949"; }},
      {ViolationKind::invalid_directory, [](auto& r) { r.directory = "American - 1700-1799"; }},
      {ViolationKind::invalid_year, [](auto& r) { r.year_conceived = -1; }},
      {ViolationKind::invalid_year, [](auto& r) { r.year_published = 123456; }},
  };
  fixture::RandomText g(7);
  for (int round = 0; round < 20; ++round) {
    auto base = fixture::random_valid_record(g);
    ASSERT_TRUE(validate_record(base, fixture::figure_authorities(), fixture::figure_vocabularies()).empty());
    for (const auto& [kind, mutate] : mutations) {
      auto r = base;
      mutate(r);
      auto report = validate_record(r, fixture::figure_authorities(), fixture::figure_vocabularies());
      EXPECT_EQ(kinds(report), std::set<ViolationKind>{kind}) << to_string(kind);
    }
  }
}

TEST(ValidationTest, CollectionRootIsAcceptedVerbatim) {
  auto r = fixture::figure_record();
  r.directory = "Western Philosophy";
  ValidationOptions options;
  EXPECT_FALSE(validate_record(r, fixture::figure_authorities(), fixture::figure_vocabularies(), options).empty());
  options.collection_roots = {"Western Philosophy"};
  EXPECT_TRUE(validate_record(r, fixture::figure_authorities(), fixture::figure_vocabularies(), options).empty());
}

TEST(ValidationTest, CenturyDirectoryShape) {
  EXPECT_TRUE(is_century_directory("American - 1800-1899"));
  EXPECT_TRUE(is_century_directory("English - 1500-1599"));
  EXPECT_FALSE(is_century_directory(" - 1800-1899"));
  EXPECT_FALSE(is_century_directory("American 1800-1899"));
  EXPECT_FALSE(is_century_directory("American - 1801-1900"));
  EXPECT_FALSE(is_century_directory("American - 1800-1899x"));
}

TEST(ArchiveLayoutTest, FigureRecordPath) {
  EXPECT_EQ(archive_path_for(fixture::figure_record()),
            "american-1800-1899/26-adventures-of-huckleberry-finn.txt");
}

TEST(ArchiveLayoutTest, TitusPath) {
  TemplateRecord r;
  r.id = 7;
  r.title = "Titus Andronicus";
  r.directory = "English - 1500-1599";
  EXPECT_EQ(archive_path_for(r), "english-1500-1599/7-titus-andronicus.txt");
}

TEST(ArchiveLayoutTest, PathsAreStableAndInjective) {
  fixture::RandomText g(11);
  std::set<std::int64_t> ids;
  std::set<std::string> paths;
  for (int i = 0; i < 500; ++i) {
    auto r = fixture::random_valid_record(g);
    EXPECT_EQ(archive_path_for(r), archive_path_for(r));
    if (ids.insert(r.id).second) {
      EXPECT_TRUE(paths.insert(archive_path_for(r)).second) << archive_path_for(r);
    }
  }
  auto a = fixture::figure_record();
  auto b = a;
  b.id = 27;
  EXPECT_NE(archive_path_for(a), archive_path_for(b));
}

TEST(ArchiveLayoutTest, SlugFoldsRunsAndTrims) {
  EXPECT_EQ(slugify("  Tom Sawyer, Detective!! "), "tom-sawyer-detective");
  EXPECT_EQ(slugify("Adventures Of Tom Sawyer, The"), "adventures-of-tom-sawyer-the");
  EXPECT_EQ(slugify("Les Misérables"), "les-mis-rables");
  EXPECT_EQ(slugify("---"), "");
}

TEST(TemplateFormatTest, FigureRecordRendering) {
  auto text = render_template(fixture::figure_record());
  EXPECT_TRUE(text.starts_with("Template-Type: DOCUMENT\n")) << text;
  EXPECT_NE(text.find("\nTitle: Adventures Of Huckleberry Finn\n"), std::string::npos);
  EXPECT_NE(text.find("\nAuthor: Twain, Mark\n"), std::string::npos);
  EXPECT_NE(text.find("\nYear-Conceived: 1885\n"), std::string::npos);
  EXPECT_NE(text.find("\nSize: 576333\n"), std::string::npos);
  EXPECT_NE(text.find("\nDirectory: American - 1800-1899\n"), std::string::npos);
  EXPECT_EQ(parse_template(text), fixture::figure_record());
}

TEST(TemplateFormatTest, MultiLineAndRepeatedFields) {
  auto r = fixture::figure_record();
  r.note = "first\n second\n\nlast";
  r.subjects = {"a", "b"};
  auto text = render_template(r);
  EXPECT_NE(text.find("Note: first\n  second\n \n last\n"), std::string::npos) << text;
  EXPECT_NE(text.find("Subject: a\nSubject: b\n"), std::string::npos);
  EXPECT_EQ(parse_template(text), r);
}

TEST(TemplateFormatTest, EmptyOptionalValueSurvives) {
  auto r = fixture::figure_record();
  r.subtitle = "";
  auto text = render_template(r);
  EXPECT_NE(text.find("\nSubtitle:\n"), std::string::npos);
  EXPECT_EQ(parse_template(text).subtitle, std::optional<std::string>(""));
}

TEST(TemplateFormatTest, MissingTitleIsMissingRequiredField) {
  auto text = render_template(fixture::figure_record());
  auto pos = text.find("Title: ");
  text.erase(pos, text.find('\n', pos) - pos + 1);
  EXPECT_EQ(error_code([&] { parse_template(text); }), Errc::missing_required_field);
}

TEST(TemplateFormatTest, UnknownFieldAndDuplicateScalar) {
  auto text = render_template(fixture::figure_record());
  EXPECT_EQ(error_code([&] { parse_template(text + "Colour: blue\n"); }), Errc::unknown_field);
  EXPECT_EQ(error_code([&] { parse_template(text + "Title: again\n"); }), Errc::duplicate_field);
  EXPECT_NO_THROW(parse_template(text + "Author: Twain, Mark\n"));
}

TEST(TemplateFormatTest, MalformedValues) {
  auto text = render_template(fixture::figure_record());
  auto replace = [&](std::string from, std::string to) {
    auto t = text;
    t.replace(t.find(from), from.size(), to);
    return t;
  };
  EXPECT_EQ(error_code([&] { parse_template(replace("ID: 26", "ID: twenty")); }), Errc::invalid_value);
  EXPECT_EQ(error_code([&] { parse_template(replace("DOCUMENT", "SERIAL")); }), Errc::invalid_value);
  EXPECT_EQ(error_code([&] { parse_template(" orphan\n" + text); }), Errc::invalid_value);
  EXPECT_EQ(error_code([&] { parse_template("no colon here\n"); }), Errc::invalid_value);
}

TEST(TemplateFormatTest, RoundTripRandomValidRecords) {
  fixture::RandomText g(2024);
  for (int i = 0; i < 1000; ++i) {
    auto r = fixture::random_valid_record(g);
    auto text = render_template(r);
    ASSERT_EQ(parse_template(text), r) << text;
  }
}

TEST(TemplateFormatTest, CatalogueFileSeparatesRecordsWithOneBlankLine) {
  fixture::RandomText g(5);
  std::vector<TemplateRecord> records;
  for (int i = 0; i < 25; ++i) records.push_back(fixture::random_valid_record(g));
  auto text = render_catalogue(records);
  EXPECT_EQ(text.find("\n\n\n"), std::string::npos);
  EXPECT_EQ(parse_catalogue(text), records);
  EXPECT_TRUE(parse_catalogue("").empty());
}

TEST(AuthorityTest, FileRoundTripAndBareKeys) {
  auto set = fixture::figure_authorities();
  auto text = render_authority_file(set.authors);
  EXPECT_TRUE(text.starts_with("# alex-list v1 author\n"));
  EXPECT_EQ(parse_authority_file(text, AuthorityKind::author), set.authors);

  auto bare = parse_authority_file("Melville, Herman\n", AuthorityKind::author);
  ASSERT_EQ(bare.entries().size(), 1u);
  EXPECT_EQ(bare.entries()[0].display, "Melville, Herman");
}

TEST(AuthorityTest, DuplicatesAndWrongHeaderAreRejected) {
  EXPECT_EQ(error_code([] { parse_authority_file("a\tb\na\tc\n", AuthorityKind::author); }), Errc::validation);
  EXPECT_EQ(error_code([] { parse_authority_file("# alex-list v1 publisher\nx\n", AuthorityKind::author); }),
            Errc::validation);
  EXPECT_EQ(error_code([] { parse_vocabulary_file("x\nx\n", VocabularyKind::genre); }), Errc::validation);
}

TEST(AuthorityTest, SaveAndLoadDirectory) {
  auto root = std::filesystem::temp_directory_path() / "alex-authority-test";
  std::filesystem::remove_all(root);
  save_authorities(root, fixture::figure_authorities());
  save_vocabularies(root, fixture::figure_vocabularies());
  auto a = load_authorities(root);
  auto v = load_vocabularies(root);
  EXPECT_EQ(a.authors, fixture::figure_authorities().authors);
  EXPECT_EQ(a.time_periods, fixture::figure_authorities().time_periods);
  EXPECT_EQ(v.genres, fixture::figure_vocabularies().genres);
  std::filesystem::remove_all(root);
  EXPECT_TRUE(load_authorities(root).authors.entries().empty());
}
