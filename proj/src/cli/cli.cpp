#include "alex/cli/cli.hpp"

#include <CLI11.hpp>
#include <csignal>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <pthread.h>

#include "alex/bookcase/store.hpp"
#include "alex/catalog/template_format.hpp"
#include "alex/catalog/validation.hpp"
#include "alex/error.hpp"
#include "alex/fsutil.hpp"
#include "alex/harvest/ingest.hpp"
#include "alex/harvest/instant_library.hpp"
#include "alex/harvest/links.hpp"
#include "alex/service/hits.hpp"
#include "alex/service/service.hpp"

namespace alex::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string config;
  std::string data_root;

  struct {
    int port = -1;
    std::string bind;
  } serve;

  struct {
    std::string url;
    std::int64_t id = 0;
    std::string title, subtitle, alternate_title, author_statement, publisher, proxy_url, directory, note;
    std::string reformat, license;
    std::vector<std::string> authors, subjects, genres;
    std::int32_t year_conceived = 0, year_published = 0;
    bool incomplete = false;
    bool yes = false;
  } ingest;

  struct {
    std::string collection, out, base;
  } exp;

  struct {
    std::string day;
    bool json = false;
  } stats;

  struct {
    std::int64_t id = 0;
  } remove;

  struct {
    std::string dir;
    bool replace = false;
  } lists;
};

class Command {
 public:
  Command(const Options& o, Io& io) : o_(o), io_(io) {}

  service::ServiceConfig config() const {
    std::optional<fs::path> file;
    if (!o_.config.empty()) {
      file = o_.config;
    } else if (auto env = io_.env("ALEX_CONFIG")) {
      file = *env;
    }
    auto c = service::load_config(file, io_.env);
    if (!o_.data_root.empty()) c.data_root = o_.data_root;
    if (c.data_root.empty()) throw Error(Errc::validation, "no data root: pass --data-root, set ALEX_DATA_ROOT or use a config file");
    return c;
  }

  int serve() {
    auto c = config();
    if (o_.serve.port >= 0) c.port = o_.serve.port;
    if (!o_.serve.bind.empty()) c.bind_address = o_.serve.bind;

    // Block the stop signals before any server thread exists so that only
    // sigwait sees them.
    sigset_t stop_signals;
    sigemptyset(&stop_signals);
    sigaddset(&stop_signals, SIGINT);
    sigaddset(&stop_signals, SIGTERM);
    if (!io_.serve_until) pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

    service::Service svc(c);
    int port = svc.start_background(false);
    io_.err << "alexctl: serving " << c.data_root.string() << " on http://" << c.bind_address << ":" << port
            << std::endl;
    if (io_.serve_until) {
      io_.serve_until(port);
    } else {
      int sig = 0;
      sigwait(&stop_signals, &sig);
    }
    svc.stop();
    io_.err << "alexctl: stopped" << std::endl;
    return kOk;
  }

  int ingest() {
    auto c = config();
    const auto& in = o_.ingest;
    harvest::CuratorInput cur;
    auto opt = [](const std::string& s) { return s.empty() ? std::nullopt : std::optional<std::string>(s); };
    if (in.id) cur.id = in.id;
    cur.title = opt(in.title);
    cur.subtitle = opt(in.subtitle);
    cur.alternate_title = opt(in.alternate_title);
    cur.authors = in.authors;
    cur.author_statement = opt(in.author_statement);
    if (in.year_conceived) cur.year_conceived = in.year_conceived;
    cur.publisher = opt(in.publisher);
    if (in.year_published) cur.year_published = in.year_published;
    cur.proxy_url = opt(in.proxy_url);
    cur.subjects = in.subjects;
    cur.genres = in.genres;
    cur.directory = opt(in.directory);
    cur.note = opt(in.note);
    if (!in.reformat.empty()) cur.reformat_method = catalog::parse_reformat_method(in.reformat);
    if (!in.license.empty()) cur.license = *catalog::parse_license(in.license);
    cur.complete = !in.incomplete;

    store::Catalogue catalogue(c.data_root);
    harvest::Fetcher fetcher({.timeout = c.fetch_timeout, .obey_robots = c.obey_robots});
    auto fetched = fetcher.fetch(in.url);
    auto draft = harvest::prepare_draft(fetched, cur, *catalogue.snapshot(), {}, in.url);
    if (!draft.ready()) {
      io_.err << catalog::render_template(draft.record) << "\n";
      throw Error(draft.policy.accepted ? Errc::validation : Errc::policy_rejected, harvest::describe(draft));
    }
    if (!in.yes) {
      io_.err << catalog::render_template(draft.record) << "\nCommit record " << draft.record.id << "? [y/N] "
              << std::flush;
      std::string answer;
      std::getline(io_.in, answer);
      if (answer != "y" && answer != "Y" && answer != "yes") {
        io_.err << "alexctl: not committed" << std::endl;
        return kFailure;
      }
    }
    auto result = harvest::commit_draft(catalogue, fetched, draft);
    if (!result.replaced.empty()) {
      bookcase::BookcaseStore cases(c.data_root / "bookcases");
      for (auto id : result.replaced) {
        io_.err << "alexctl: replaced record " << id << ", " << cases.tombstone_document(id)
                << " bookcase items marked removed" << std::endl;
      }
    }
    io_.out << catalog::render_template(result.record);
    io_.err << "alexctl: archived " << result.archived_path << " (" << result.paragraphs << " paragraphs)"
            << std::endl;
    return kOk;
  }

  int reindex() {
    store::Catalogue catalogue(config().data_root);
    auto report = catalogue.reindex();
    io_.out << "records\t" << report.records << "\ndocuments\t" << report.documents << "\nparagraphs\t"
            << report.paragraphs << "\n";
    for (auto id : report.missing_texts) io_.err << "alexctl: record " << id << " has no archived text" << std::endl;
    return report.missing_texts.empty() ? kOk : kFailure;
  }

  int validate() {
    store::Catalogue catalogue(config().data_root);
    auto snap = catalogue.snapshot();
    std::size_t violations = 0;
    for (const auto& [id, record] : snap->metadata.records()) {
      for (const auto& v : catalog::validate_record(record, snap->authorities, snap->vocabularies)) {
        io_.out << id << "\t" << v.field << "\t" << catalog::to_string(v.kind) << "\t" << v.message << "\n";
        ++violations;
      }
    }
    io_.err << "alexctl: " << snap->metadata.records().size() << " records, " << violations << " violations"
            << std::endl;
    return violations == 0 ? kOk : kFailure;
  }

  int check_links() {
    auto c = config();
    store::Catalogue catalogue(c.data_root);
    std::vector<catalog::TemplateRecord> records;
    for (const auto& [id, r] : catalogue.snapshot()->metadata.records()) records.push_back(r);
    harvest::Fetcher fetcher({.timeout = c.fetch_timeout, .obey_robots = c.obey_robots});
    auto report = harvest::check_links(records, fetcher);
    for (const auto& row : report.rows) {
      io_.out << row.id << "\t" << row.status << "\t" << (row.ok ? "ok" : "broken") << "\t" << row.checked_at << "\t"
              << (row.error.empty() ? "-" : row.error) << "\t" << row.url << "\n";
    }
    io_.err << "alexctl: " << report.rows.size() << " links, " << report.failures() << " broken" << std::endl;
    return report.failures() == 0 ? kOk : kFailure;
  }

  int export_library() {
    auto c = config();
    store::Catalogue catalogue(c.data_root);
    auto base = o_.exp.base.empty() ? c.base_url() : o_.exp.base;
    auto lib = harvest::build_instant_library(catalogue, o_.exp.collection, base);
    write_file_atomic(o_.exp.out, lib.zip);
    io_.out << lib.manifest_text();
    io_.err << "alexctl: wrote " << lib.manifest.size() << " entries to " << o_.exp.out << std::endl;
    return kOk;
  }

  int stats() {
    service::HitCounter hits(config().data_root / "stats.json");
    auto j = hits.to_json();
    if (o_.stats.json) {
      io_.out << j.dump(2) << "\n";
      return kOk;
    }
    if (!o_.stats.day.empty()) {
      if (!j["days"].contains(o_.stats.day)) throw Error(Errc::not_found, "no hits recorded on " + o_.stats.day);
      for (const auto& [route, n] : j["days"][o_.stats.day]["routes"].items()) io_.out << route << "\t" << n << "\n";
      return kOk;
    }
    for (const auto& [day, v] : j["days"].items()) io_.out << day << "\t" << v["total"] << "\n";
    return kOk;
  }

  int remove() {
    auto root = config().data_root;
    store::Catalogue catalogue(root);
    if (!catalogue.remove_record(o_.remove.id)) {
      throw Error(Errc::unknown_document, "no record with id " + std::to_string(o_.remove.id));
    }
    bookcase::BookcaseStore cases(root / "bookcases");
    auto n = cases.tombstone_document(o_.remove.id);
    io_.out << "removed\t" << o_.remove.id << "\ntombstoned\t" << n << "\n";
    return kOk;
  }

  int import_lists() {
    fs::path dir = o_.lists.dir;
    if (!fs::is_directory(dir / "authorities") && !fs::is_directory(dir / "vocabularies")) {
      throw Error(Errc::not_found, dir.string() + " has neither authorities/ nor vocabularies/");
    }
    store::Catalogue catalogue(config().data_root);
    auto snap = catalogue.snapshot();
    auto authorities = o_.lists.replace ? catalog::AuthoritySet{} : snap->authorities;
    auto vocabularies = o_.lists.replace ? catalog::VocabularySet{} : snap->vocabularies;
    auto incoming_a = catalog::load_authorities(dir);
    auto incoming_v = catalog::load_vocabularies(dir);

    std::size_t added = 0;
    auto merge_list = [&](catalog::AuthorityList& into, const catalog::AuthorityList& from) {
      for (const auto& e : from.entries()) {
        if (into.contains(e.key)) continue;
        into.add(e.key, e.display);
        ++added;
      }
    };
    auto merge_vocab = [&](catalog::Vocabulary& into, const catalog::Vocabulary& from) {
      for (const auto& t : from.terms()) {
        if (into.contains(t)) continue;
        into.add(t);
        ++added;
      }
    };
    merge_list(authorities.authors, incoming_a.authors);
    merge_list(authorities.publishers, incoming_a.publishers);
    merge_list(authorities.time_periods, incoming_a.time_periods);
    merge_vocab(vocabularies.subjects, incoming_v.subjects);
    merge_vocab(vocabularies.genres, incoming_v.genres);
    catalogue.set_authorities(authorities);
    catalogue.set_vocabularies(vocabularies);

    io_.out << "authors\t" << authorities.authors.entries().size() << "\npublishers\t"
            << authorities.publishers.entries().size() << "\ntime-periods\t"
            << authorities.time_periods.entries().size() << "\nsubjects\t" << vocabularies.subjects.terms().size()
            << "\ngenres\t" << vocabularies.genres.terms().size() << "\n";
    io_.err << "alexctl: " << added << " new entries" << std::endl;
    return kOk;
  }

 private:
  const Options& o_;
  Io& io_;
};

}  // namespace

int run(const std::vector<std::string>& args, Io io) {
  Options o;
  CLI::App app{"Administer an Alex catalogue: acquire texts, rebuild indexes, check links, export collections.",
               "alexctl"};
  app.require_subcommand(1);
  app.add_option("--config", o.config, "JSON config file (default: $ALEX_CONFIG)");
  app.add_option("--data-root", o.data_root, "Catalogue data root; overrides the config");

  auto* serve = app.add_subcommand("serve", "Run the HTTP service until interrupted");
  serve->add_option("--port", o.serve.port, "Port to listen on (0 picks a free one)")->check(CLI::Range(0, 65535));
  serve->add_option("--bind", o.serve.bind, "Address to bind");

  auto* ingest = app.add_subcommand("ingest", "Fetch one text, catalogue it and archive it");
  auto& in = o.ingest;
  ingest->add_option("url", in.url, "Where the text lives")->required();
  ingest->add_option("--id", in.id, "Record id (default: the id already holding this url, else the next free one)")
      ->check(CLI::PositiveNumber);
  ingest->add_option("--title", in.title, "Title (default: taken from the text)");
  ingest->add_option("--subtitle", in.subtitle, "Subtitle");
  ingest->add_option("--alternate-title", in.alternate_title, "Alternate title");
  ingest->add_option("--author", in.authors, "Author authority key, e.g. \"Twain, Mark\"; repeatable");
  ingest->add_option("--author-statement", in.author_statement, "Author statement as printed");
  ingest->add_option("--year-conceived", in.year_conceived, "Year the work was written");
  ingest->add_option("--publisher", in.publisher, "Publisher authority key");
  ingest->add_option("--year-published", in.year_published, "Year of publication");
  ingest->add_option("--proxy-url", in.proxy_url, "Alternate location of the text");
  ingest->add_option("--subject", in.subjects, "Subject term; repeatable");
  ingest->add_option("--genre", in.genres, "Genre term; repeatable");
  ingest->add_option("--directory", in.directory, "Archive directory, e.g. \"American - 1800-1899\"");
  ingest->add_option("--reformat", in.reformat, "Paragraph reformatting")
      ->check(CLI::IsMember({"already-delimited", "add-blank-lines"}));
  ingest->add_option("--license", in.license, "Distribution license")
      ->check(CLI::IsMember({"public-domain", "free", "restricted"}));
  ingest->add_option("--note", in.note, "Cataloguer's note");
  ingest->add_flag("--incomplete", in.incomplete, "Mark the text as an excerpt");
  ingest->add_flag("-y,--yes", in.yes, "Commit without asking");

  auto* reindex = app.add_subcommand("reindex", "Rebuild every index from the archived texts");
  auto* validate = app.add_subcommand("validate", "Check every record against the controlled lists");
  auto* links = app.add_subcommand("check-links", "Probe the original location of every record");

  auto* exp = app.add_subcommand("export", "Write a collection as a zip of texts, records and descriptors");
  exp->add_option("collection", o.exp.collection, "Collection name, e.g. american")->required();
  exp->add_option("--out", o.exp.out, "Zip file to write")->required();
  exp->add_option("--base", o.exp.base, "Service URL written into descriptors (default: the configured base)");

  auto* stats = app.add_subcommand("stats", "Report request counts per day");
  stats->add_option("--day", o.stats.day, "Show the routes hit on one day (YYYY-MM-DD)");
  stats->add_flag("--json", o.stats.json, "Print the raw counters");

  auto* remove = app.add_subcommand("remove", "Drop a record; bookcase items pointing at it are kept as removed");
  remove->add_option("id", o.remove.id, "Record id")->required()->check(CLI::PositiveNumber);

  auto* lists = app.add_subcommand("import-lists", "Add authority and vocabulary files to the catalogue");
  lists->add_option("dir", o.lists.dir, "Directory holding authorities/ and vocabularies/")->required();
  lists->add_flag("--replace", o.lists.replace, "Replace the current lists instead of adding to them");

  std::vector<std::string> rest(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    io.out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    io.out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    io.err << "alexctl: " << e.what() << "\n";
    auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    io.err << sub->help();
    return kUsage;
  }

  Command cmd(o, io);
  try {
    if (serve->parsed()) return cmd.serve();
    if (ingest->parsed()) return cmd.ingest();
    if (reindex->parsed()) return cmd.reindex();
    if (validate->parsed()) return cmd.validate();
    if (links->parsed()) return cmd.check_links();
    if (exp->parsed()) return cmd.export_library();
    if (stats->parsed()) return cmd.stats();
    if (remove->parsed()) return cmd.remove();
    if (lists->parsed()) return cmd.import_lists();
  } catch (const Error& e) {
    io.err << "alexctl: " << to_string(e.code()) << ": " << e.what() << std::endl;
    return kFailure;
  } catch (const std::exception& e) {
    io.err << "alexctl: " << e.what() << std::endl;
    return kFailure;
  }
  return kUsage;
}

}  // namespace alex::cli
