#include "alex/service/service.hpp"

#include <sodium.h>

#include <charconv>
#include <thread>

#include "alex/bookcase/sanitize.hpp"
#include "alex/catalog/archive_layout.hpp"
#include "alex/catalog/template_format.hpp"
#include "alex/harvest/instant_library.hpp"
#include "alex/search/descriptor.hpp"
#include "alex/search/metadata_index.hpp"
#include "alex/search/query.hpp"
#include "alex/text/tokenize.hpp"
#include "alex/text/typeset.hpp"

namespace alex::service {

using nlohmann::json;
using httplib::Request;
using httplib::Response;

namespace {

constexpr const char* kJson = "application/json";
constexpr const char* kTokenHeader = "X-Bookcase-Token";
constexpr std::size_t kMaxBodyBytes = 4u << 20;

const char* kRobots =
    "User-agent: *\n"
    "Disallow: /search\n"
    "Disallow: /content-search\n"
    "Disallow: /texts/\n"
    "Disallow: /downloads/\n";

// An error with an explicit status, for cases the code alone does not settle.
struct ApiError {
  int status;
  std::string code;
  std::string message;
};

void send_json(Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_error(Response& res, int status, std::string_view code, std::string_view message) {
  send_json(res, error_body(code, message), status);
}

std::string percent_encode(std::string_view s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 15];
    }
  }
  return out;
}

std::int64_t path_id(const std::string& s) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw Error(Errc::not_found, "no such id '" + s + "'");
  return v;
}

bool flag(const Request& req, const std::string& name) {
  if (!req.has_param(name)) return false;
  auto v = req.get_param_value(name);
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off" || v.empty()) return false;
  throw Error(Errc::validation, name + " must be true or false");
}

json body_json(const Request& req) {
  if (req.body.empty()) return json::object();
  auto j = json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(Errc::validation, "request body must be a JSON object");
  return j;
}

template <typename T>
std::optional<T> field(const json& j, const char* name) {
  if (!j.contains(name) || j[name].is_null()) return std::nullopt;
  try {
    return j[name].get<T>();
  } catch (const json::exception&) {
    throw Error(Errc::validation, std::string("field '") + name + "' has the wrong type");
  }
}

template <typename T>
T required(const json& j, const char* name) {
  auto v = field<T>(j, name);
  if (!v) throw Error(Errc::validation, std::string("field '") + name + "' is required");
  return *v;
}

search::QueryFlags flags_from_json(const json& j) {
  search::QueryFlags f;
  f.case_sensitive = field<bool>(j, "case_sensitive").value_or(false);
  f.stemmed = field<bool>(j, "stemmed").value_or(false);
  if (auto s = field<std::string>(j, "sort")) {
    auto order = search::parse_sort_order(*s);
    if (!order) throw Error(Errc::validation, "sort must be 'relevance' or 'position'");
    f.sort = *order;
  }
  return f;
}

std::string paragraph_link(std::int64_t id, std::uint32_t ordinal) {
  return "/texts/" + std::to_string(id) + "/paragraphs/" + std::to_string(ordinal);
}

std::string require_token(const Request& req) {
  auto t = req.get_header_value(kTokenHeader);
  if (t.empty()) throw Error(Errc::invalid_token, std::string("missing ") + kTokenHeader + " header");
  return t;
}

}  // namespace

int http_status(Errc code) noexcept {
  switch (code) {
    case Errc::auth:
    case Errc::invalid_token: return 401;
    case Errc::forbidden: return 403;
    case Errc::not_found:
    case Errc::unknown_document:
    case Errc::unknown_paragraph:
    case Errc::unknown_name:
    case Errc::empty_collection: return 404;
    case Errc::name_taken:
    case Errc::read_only: return 409;
    case Errc::dangling_reference:
    case Errc::policy_rejected:
    case Errc::conversion_unsupported:
    case Errc::unsupported_scheme:
    case Errc::robots_disallowed:
    case Errc::oversize: return 422;
    case Errc::network:
    case Errc::timeout:
    case Errc::http_status:
    case Errc::redirect_limit:
    case Errc::redirect_loop: return 502;
    case Errc::storage:
    case Errc::corrupt_index:
    case Errc::injected_fault: return 500;
    default: return 400;
  }
}

json error_body(std::string_view code, std::string_view message) {
  return {{"error", {{"code", code}, {"message", message}}}};
}

json record_json(const catalog::TemplateRecord& r) {
  auto opt = [](const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); };
  return {{"id", r.id},
          {"title", r.title},
          {"subtitle", opt(r.subtitle)},
          {"alternate_title", opt(r.alternate_title)},
          {"authors", r.authors},
          {"author_statement", opt(r.author_statement)},
          {"year_conceived", r.year_conceived},
          {"publisher", opt(r.publisher)},
          {"year_published", r.year_published},
          {"url", r.url},
          {"proxy_url", opt(r.proxy_url)},
          {"size_bytes", r.size_bytes},
          {"mime_type", r.mime_type},
          {"template_type", catalog::to_string(r.template_type)},
          {"subjects", r.subjects},
          {"genres", r.genres},
          {"directory", r.directory},
          {"reformat_method", catalog::to_string(r.reformat_method)},
          {"note", opt(r.note)}};
}

harvest::CuratorInput curator_from_json(const json& b) {
  harvest::CuratorInput c;
  c.id = field<std::int64_t>(b, "id");
  c.title = field<std::string>(b, "title");
  c.subtitle = field<std::string>(b, "subtitle");
  c.alternate_title = field<std::string>(b, "alternate_title");
  c.authors = field<std::vector<std::string>>(b, "authors").value_or(std::vector<std::string>{});
  c.author_statement = field<std::string>(b, "author_statement");
  c.year_conceived = field<std::int32_t>(b, "year_conceived");
  c.publisher = field<std::string>(b, "publisher");
  c.year_published = field<std::int32_t>(b, "year_published");
  c.proxy_url = field<std::string>(b, "proxy_url");
  c.subjects = field<std::vector<std::string>>(b, "subjects").value_or(std::vector<std::string>{});
  c.genres = field<std::vector<std::string>>(b, "genres").value_or(std::vector<std::string>{});
  c.directory = field<std::string>(b, "directory");
  c.note = field<std::string>(b, "note");
  if (auto m = field<std::string>(b, "reformat")) {
    c.reformat_method = catalog::parse_reformat_method(*m);
    if (!c.reformat_method) throw Error(Errc::validation, "reformat must be 'already-delimited' or 'add-blank-lines'");
  }
  if (auto l = field<std::string>(b, "license")) {
    auto license = catalog::parse_license(*l);
    if (!license) throw Error(Errc::validation, "license must be 'public-domain', 'free' or 'restricted'");
    c.license = *license;
  }
  c.complete = field<bool>(b, "complete").value_or(true);
  return c;
}

Service::Service(ServiceConfig config, HitCounter::Clock clock)
    : config_([&] {
        check_config(config);
        return std::move(config);
      }()),
      catalogue_(config_.data_root),
      bookcases_(config_.data_root / "bookcases",
                 bookcase::StoreOptions{.hashing = config_.key_hashing,
                                        .token_ttl = config_.token_ttl,
                                        .clock = {},
                                        .outbox = config_.outbox.empty() ? config_.data_root / "outbox.jsonl"
                                                                         : config_.outbox}),
      hits_(config_.data_root / "stats.json", std::move(clock)),
      fetcher_(harvest::FetchOptions{.timeout = config_.fetch_timeout, .obey_robots = config_.obey_robots}) {
  server_.set_payload_max_length(kMaxBodyBytes);
  server_.set_error_handler([](const Request&, Response& res) {
    if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
    auto code = res.status == 404 ? "not-found" : "http-" + std::to_string(res.status);
    auto message = res.status == 404 ? std::string("no such route") : std::string(httplib::status_message(res.status));
    send_error(res, res.status, code, message);
    return httplib::Server::HandlerResponse::Handled;
  });
  if (!config_.static_dir.empty()) server_.set_mount_point("/static", config_.static_dir.string());
  routes();
}

Service::~Service() { stop(); }

bool Service::listen() { return server_.listen(config_.bind_address, config_.port); }

int Service::start_background(bool ephemeral) {
  int port = -1;
  if (ephemeral || config_.port == 0) {
    port = server_.bind_to_any_port(config_.bind_address);
  } else if (server_.bind_to_port(config_.bind_address, config_.port)) {
    port = config_.port;
  }
  if (port < 0) {
    throw Error(Errc::network, "cannot bind " + config_.bind_address + ":" + std::to_string(config_.port));
  }
  thread_ = std::make_unique<std::thread>([this] { server_.listen_after_bind(); });
  server_.wait_until_ready();
  return port;
}

void Service::stop() {
  server_.stop();
  if (thread_ && thread_->joinable()) thread_->join();
  thread_.reset();
}

void Service::routes() {
  using Handler = std::function<void(const Request&, Response&)>;
  // Every API route goes through here: errors become JSON bodies and the
  // request is counted once the response is settled.
  auto wrap = [this](std::string route, Handler h) {
    return [this, route = std::move(route), h = std::move(h)](const Request& req, Response& res) {
      try {
        h(req, res);
      } catch (const ApiError& e) {
        send_error(res, e.status, e.code, e.message);
      } catch (const Error& e) {
        send_error(res, http_status(e.code()), to_string(e.code()), e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, "internal", e.what());
      }
      try {
        hits_.record(route, req.path);
      } catch (const std::exception&) {
        // a stats write failure must not fail the request
      }
    };
  };
  auto get = [&](const char* pattern, std::string name, Handler h) { server_.Get(pattern, wrap("GET " + name, std::move(h))); };
  auto post = [&](const char* pattern, std::string name, Handler h) {
    server_.Post(pattern, wrap("POST " + name, std::move(h)));
  };

  auto admin = [this](const Request& req) {
    auto header = req.get_header_value("Authorization");
    const std::string prefix = "Bearer ";
    auto given = header.starts_with(prefix) ? header.substr(prefix.size()) : std::string();
    const auto& want = config_.admin_token;
    if (given.size() != want.size() || sodium_memcmp(given.data(), want.data(), want.size()) != 0) {
      throw ApiError{401, "auth", "admin routes need 'Authorization: Bearer <admin token>'"};
    }
  };

  // The bookcase a request may change: the token's, which must match the path.
  auto owned = [this](const Request& req, const std::string& name) {
    auto token = require_token(req);
    if (bookcases_.token_owner(token) != name) {
      throw Error(Errc::forbidden, "the token does not unlock bookcase '" + name + "'");
    }
    return token;
  };

  // Shelf list for add-to-bookcase links, when a live token came along.
  auto unlocked = [this](const Request& req) -> std::optional<json> {
    auto token = req.get_header_value(kTokenHeader);
    if (token.empty()) return std::nullopt;
    try {
      auto b = bookcases_.owner_view(token);
      json shelves = json::array();
      for (const auto& s : b.shelves) {
        shelves.push_back({{"id", s.id}, {"label", s.label}, {"add_item", "/shelves/" + s.id + "/items"}});
      }
      return json{{"name", b.name}, {"published", b.published()}, {"shelves", shelves}};
    } catch (const Error&) {
      return std::nullopt;
    }
  };

  // -------------------------------------------------------------- search

  get("/search", "/search", [this, unlocked](const Request& req, Response& res) {
    if (!req.has_param("q")) throw Error(Errc::empty_query, "parameter q is required");
    search::QueryFlags flags;
    flags.case_sensitive = flag(req, "case_sensitive");
    flags.stemmed = flag(req, "stemmed");
    auto query = search::parse_query(req.get_param_value("q"), flags);
    auto option = search::OutputOption::titles_authors_links;
    if (req.has_param("option")) {
      auto o = search::parse_output_option(req.get_param_value("option"));
      if (!o) throw Error(Errc::validation, "option must be 1, 2 or 3");
      option = *o;
    }
    auto snap = catalogue_.snapshot();
    auto results = search::search_metadata(snap->metadata, query, option);
    auto bookcase = unlocked(req);

    auto linked_json = [&](const search::LinkedHit& h) {
      json links{{"original", h.base.url},
                 {"archived", h.archived_link},
                 {"typeset", h.typeset_link},
                 {"content_search", h.content_search_link}};
      if (bookcase) links["add_to_bookcase"] = {{"path", "/shelves/{shelf_id}/items"}, {"body", {{"doc_id", h.base.id}}}};
      return json{{"id", h.base.id}, {"title", h.base.title}, {"authors", h.authors}, {"links", links}};
    };
    json hits = json::array();
    std::visit(
        [&](const auto& list) {
          for (const auto& h : list) {
            using T = std::decay_t<decltype(h)>;
            if constexpr (std::is_same_v<T, search::TitleHit>) {
              hits.push_back({{"id", h.id}, {"title", h.title}, {"url", h.url}});
            } else if constexpr (std::is_same_v<T, search::LinkedHit>) {
              hits.push_back(linked_json(h));
            } else {
              auto j = linked_json(h.linked);
              j["record"] = record_json(h.record);
              j["physical_description"] = h.physical_description;
              j["subjects"] = h.subjects;
              j["genres"] = h.genres;
              hits.push_back(j);
            }
          }
        },
        results);
    json body{{"query", search::to_string(query)},
              {"option", static_cast<int>(option) + 1},
              {"count", hits.size()},
              {"hits", hits}};
    if (bookcase) body["bookcase"] = *bookcase;
    send_json(res, body);
  });

  post("/content-search", "/content-search", [this, unlocked](const Request& req, Response& res) {
    auto body = body_json(req);
    auto q = required<std::string>(body, "q");
    std::vector<std::int64_t> docs;
    if (auto d = field<std::vector<std::int64_t>>(body, "docs")) {
      docs = *d;
    } else if (req.has_param("docs")) {
      auto list = req.get_param_value("docs");
      std::size_t start = 0;
      while (start <= list.size()) {
        auto comma = list.find(',', start);
        auto part = list.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!part.empty()) docs.push_back(path_id(part));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    }
    auto query = search::parse_query(q, flags_from_json(body));
    auto snap = catalogue_.snapshot();
    auto hits = search::search_content(snap->select(docs), query);
    auto limit = field<std::size_t>(body, "limit");
    auto bookcase = unlocked(req);
    json out = json::array();
    for (const auto& h : hits) {
      if (limit && out.size() >= *limit) break;
      const auto* r = snap->record(h.doc_id);
      json j{{"doc_id", h.doc_id},
             {"title", r ? r->title : ""},
             {"ordinal", h.ordinal},
             {"score", h.score},
             {"excerpt", h.excerpt},
             {"paragraph", paragraph_link(h.doc_id, h.ordinal)}};
      if (bookcase) {
        j["add_to_bookcase"] = {{"path", "/shelves/{shelf_id}/items"},
                                {"body", {{"doc_id", h.doc_id}, {"ordinal", h.ordinal}, {"query", q}}}};
      }
      out.push_back(j);
    }
    json result{{"query", search::to_string(query)}, {"docs", docs}, {"count", hits.size()}, {"hits", out}};
    if (bookcase) result["bookcase"] = *bookcase;
    send_json(res, result);
  });

  // -------------------------------------------------------------- browse

  get("/browse/authors", "/browse/authors", [this](const Request&, Response& res) {
    auto snap = catalogue_.snapshot();
    json list = json::array();
    for (const auto& a : snap->authorities.authors.entries()) {
      std::size_t n = 0;
      for (const auto& [id, r] : snap->metadata.records()) {
        n += std::find(r.authors.begin(), r.authors.end(), a.key) != r.authors.end();
      }
      list.push_back({{"key", a.key},
                      {"display", a.display},
                      {"titles", n},
                      {"search", "/search?q=" + percent_encode("author:\"" + a.key + "\"")}});
    }
    send_json(res, {{"authors", list}});
  });

  get(R"(/browse/titles/([^/]+))", "/browse/titles/{letter}", [this](const Request& req, Response& res) {
    auto letter = text::fold_case(req.matches[1].str());
    bool other = letter == "#";
    if (!other && !(letter.size() == 1 && letter[0] >= 'a' && letter[0] <= 'z')) {
      throw Error(Errc::validation, "letter must be A to Z or '#'");
    }
    auto snap = catalogue_.snapshot();
    std::vector<std::pair<std::string, const catalog::TemplateRecord*>> rows;
    for (const auto& [id, r] : snap->metadata.records()) {
      auto folded = text::fold_case(r.title);
      char first = folded.empty() ? '#' : folded[0];
      bool is_letter = first >= 'a' && first <= 'z';
      if (other ? !is_letter : (is_letter && first == letter[0])) rows.emplace_back(folded, &r);
    }
    std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) {
      return x.first != y.first ? x.first < y.first : x.second->id < y.second->id;
    });
    json titles = json::array();
    for (const auto& [key, r] : rows) {
      titles.push_back({{"id", r->id}, {"title", r->title}, {"authors", r->authors}, {"text", search::archived_link(r->id)}});
    }
    send_json(res, {{"letter", other ? "#" : std::string(1, static_cast<char>(std::toupper(letter[0])))}, {"titles", titles}});
  });

  get("/browse/files", "/browse/files", [this](const Request&, Response& res) {
    auto snap = catalogue_.snapshot();
    std::map<std::string, std::vector<std::int64_t>> dirs;
    for (const auto& [id, r] : snap->metadata.records()) dirs[r.directory].push_back(id);
    json list = json::array();
    for (const auto& [dir, ids] : dirs) {
      auto slug = catalog::slugify(dir);
      list.push_back({{"directory", dir}, {"slug", slug}, {"ids", ids}, {"download", "/downloads/" + slug + ".zip"}});
    }
    send_json(res, {{"directories", list}});
  });

  // -------------------------------------------------------------- texts

  get(R"(/texts/(\d+))", "/texts/{id}", [this](const Request& req, Response& res) {
    auto text = catalogue_.archived_text(path_id(req.matches[1]));
    res.set_content(text, "text/plain; charset=utf-8");
  });

  get(R"(/texts/(\d+)/pdf)", "/texts/{id}/pdf", [this](const Request& req, Response& res) {
    auto id = path_id(req.matches[1]);
    text::TypesetOptions options;
    if (req.has_param("font")) {
      auto f = text::parse_font(text::fold_case(req.get_param_value("font")));
      if (!f) throw ApiError{422, "invalid-value", "font must be helvetica, times or courier"};
      options.font = *f;
    }
    if (req.has_param("size")) {
      auto s = req.get_param_value("size");
      double v = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size()) throw ApiError{422, "invalid-value", "size must be a number"};
      options.size_pt = v;
    }
    try {
      text::validate(options);
    } catch (const Error& e) {
      throw ApiError{422, "invalid-value", e.what()};
    }
    auto snap = catalogue_.snapshot();
    const auto* r = snap->record(id);
    if (!r) throw Error(Errc::unknown_document, "no text with id " + std::to_string(id));
    auto pdf = text::typeset(catalogue_.archived_text(id), options, r->title);
    res.set_header("Content-Disposition", "inline; filename=\"" + std::to_string(id) + ".pdf\"");
    res.set_content(pdf, "application/pdf");
  });

  get(R"(/texts/(\d+)/paragraphs/(\d+))", "/texts/{id}/paragraphs/{n}", [this](const Request& req, Response& res) {
    auto id = path_id(req.matches[1]);
    auto n = path_id(req.matches[2]);
    auto snap = catalogue_.snapshot();
    const auto& index = snap->content_for(id);
    if (n < 0 || static_cast<std::uint64_t>(n) >= index.paragraph_count()) {
      throw Error(Errc::unknown_paragraph, "text " + std::to_string(id) + " has no paragraph " + std::to_string(n));
    }
    auto ordinal = static_cast<std::uint32_t>(n);
    text::Paragraph p = index.paragraph(ordinal);
    if (req.has_param("dir")) {
      auto dir = search::parse_direction(req.get_param_value("dir"));
      if (!dir) throw Error(Errc::validation, "dir must be 'next' or 'prev'");
      auto adj = index.adjacent(ordinal, *dir);
      if (!adj) {
        throw Error(Errc::unknown_paragraph, std::string("no ") + (*dir == search::Direction::next ? "next" : "previous") +
                                                 " paragraph");
      }
      p = *adj;
    }
    auto link = [&](bool exists, std::uint32_t o) { return exists ? json(paragraph_link(id, o)) : json(nullptr); };
    send_json(res, {{"doc_id", id},
                    {"ordinal", p.ordinal},
                    {"count", index.paragraph_count()},
                    {"text", p.text},
                    {"prev", link(p.ordinal > 0, p.ordinal - 1)},
                    {"next", link(p.ordinal + 1 < index.paragraph_count(), p.ordinal + 1)}});
  });

  // -------------------------------------------------------------- bookcases

  post("/bookcases", "/bookcases", [this](const Request& req, Response& res) {
    auto b = body_json(req);
    auto name = required<std::string>(b, "name");
    bookcases_.create(name, required<std::string>(b, "key"), field<std::string>(b, "hint").value_or(""),
                      required<std::string>(b, "hint_contact"));
    send_json(res, {{"name", name}, {"locked", true}}, 201);
  });

  post("/bookcases/unlock", "/bookcases/unlock", [this](const Request& req, Response& res) {
    auto b = body_json(req);
    auto t = bookcases_.unlock(required<std::string>(b, "name"), required<std::string>(b, "key"));
    auto expires = std::chrono::duration_cast<std::chrono::seconds>(t.expires.time_since_epoch()).count();
    send_json(res, {{"token", t.token}, {"name", t.name}, {"expires", expires}});
  });

  post("/bookcases/hint", "/bookcases/hint", [this](const Request& req, Response& res) {
    auto id = bookcases_.request_hint(required<std::string>(body_json(req), "name"));
    send_json(res, {{"delivery_id", id}}, 202);
  });

  post(R"(/bookcases/([^/]+)/lock)", "/bookcases/{name}/lock", [owned, this](const Request& req, Response& res) {
    auto token = owned(req, req.matches[1]);
    bookcases_.lock(token);
    send_json(res, {{"name", req.matches[1].str()}, {"locked", true}});
  });

  post(R"(/bookcases/([^/]+)/shelves)", "/bookcases/{name}/shelves", [owned, this](const Request& req, Response& res) {
    auto token = owned(req, req.matches[1]);
    auto id = bookcases_.add_shelf(token, required<std::string>(body_json(req), "label"));
    send_json(res, {{"id", id}}, 201);
  });

  post(R"(/shelves/([^/]+)/items)", "/shelves/{id}/items", [this](const Request& req, Response& res) {
    auto token = require_token(req);
    auto b = body_json(req);
    auto doc = required<std::int64_t>(b, "doc_id");
    std::variant<bookcase::NewBookLink, bookcase::NewBookmark> item = bookcase::NewBookLink{doc};
    if (auto ordinal = field<std::uint32_t>(b, "ordinal")) {
      item = bookcase::NewBookmark{doc, *ordinal, field<std::string>(b, "query").value_or("")};
    }
    auto id = bookcases_.add_item(token, req.matches[1], item, *catalogue_.snapshot());
    send_json(res, {{"id", id}}, 201);
  });

  post(R"(/bookcases/([^/]+)/annotations)", "/bookcases/{name}/annotations",
       [owned, this](const Request& req, Response& res) {
         auto token = owned(req, req.matches[1]);
         auto b = body_json(req);
         auto kind = field<std::string>(b, "target").value_or("bookcase");
         bookcase::Target target;
         if (kind == "bookcase") {
           target.kind = bookcase::TargetKind::bookcase;
         } else if (kind == "shelf" || kind == "item") {
           target.kind = kind == "shelf" ? bookcase::TargetKind::shelf : bookcase::TargetKind::item;
           target.id = required<std::string>(b, "id");
         } else {
           throw Error(Errc::validation, "target must be 'bookcase', 'shelf' or 'item'");
         }
         auto stored = bookcases_.annotate(token, target, required<std::string>(b, "text"));
         send_json(res, {{"annotation", stored}});
       });

  post(R"(/bookcases/([^/]+)/publish)", "/bookcases/{name}/publish", [owned, this](const Request& req, Response& res) {
    auto id = bookcases_.publish(owned(req, req.matches[1]));
    send_json(res, {{"published_id", id}, {"url", "/published/" + id}});
  });

  post(R"(/bookcases/([^/]+)/unpublish)", "/bookcases/{name}/unpublish",
       [owned, this](const Request& req, Response& res) {
         bookcases_.unpublish(owned(req, req.matches[1]));
         send_json(res, {{"name", req.matches[1].str()}, {"published", false}});
       });

  get(R"(/bookcases/([^/]+))", "/bookcases/{name}", [owned, this](const Request& req, Response& res) {
    auto token = owned(req, req.matches[1]);
    send_json(res, bookcase::to_json(bookcases_.owner_view(token), bookcase::View::owner));
  });

  get("/published", "/published", [this](const Request&, Response& res) {
    json list = json::array();
    for (const auto& p : bookcases_.published()) {
      list.push_back({{"published_id", p.published_id}, {"name", p.name}, {"url", "/published/" + p.published_id}});
    }
    send_json(res, {{"published", list}});
  });

  get(R"(/published/([^/]+))", "/published/{id}", [this](const Request& req, Response& res) {
    send_json(res, bookcase::to_json(bookcases_.published_view(req.matches[1]), bookcase::View::published));
  });

  // -------------------------------------------------------------- downloads

  get(R"(/downloads/(\d+)\.src)", "/downloads/{id}.src", [this](const Request& req, Response& res) {
    auto id = path_id(req.matches[1]);
    auto snap = catalogue_.snapshot();
    const auto* r = snap->record(id);
    if (!r) throw Error(Errc::unknown_document, "no text with id " + std::to_string(id));
    res.set_content(search::render_descriptor(search::make_descriptor(*r, config_.base_url())),
                    "text/plain; charset=utf-8");
  });

  get(R"(/downloads/([^/]+)\.zip)", "/downloads/{collection}.zip", [this](const Request& req, Response& res) {
    auto collection = req.matches[1].str();
    auto lib = harvest::build_instant_library(catalogue_, collection, config_.base_url());
    res.set_header("Content-Disposition", "attachment; filename=\"" + catalog::slugify(collection) + ".zip\"");
    res.set_header("X-Manifest-Entries", std::to_string(lib.manifest.size()));
    res.set_content(lib.zip, "application/zip");
  });

  // -------------------------------------------------------------- operations

  // Not wrapped, so never counted.
  server_.Get("/robots.txt", [](const Request&, Response& res) { res.set_content(kRobots, "text/plain; charset=utf-8"); });

  get("/stats", "/stats", [this](const Request&, Response& res) {
    auto j = hits_.to_json();
    j["today"] = hits_.today();
    j["today_total"] = hits_.total(hits_.today());
    send_json(res, j);
  });

  post("/admin/ingest", "/admin/ingest", [this, admin](const Request& req, Response& res) {
    admin(req);
    auto b = body_json(req);
    auto url = required<std::string>(b, "url");
    auto curator = curator_from_json(b);
    harvest::IngestResult result;
    try {
      result = harvest::ingest(catalogue_, fetcher_, url, curator);
    } catch (const Error& e) {
      // a missing upstream page is a gateway problem, not a missing route here
      if (e.code() == Errc::not_found) throw ApiError{502, std::string(to_string(e.code())), e.what()};
      throw;
    }
    std::size_t tombstoned = 0;
    for (auto id : result.replaced) tombstoned += bookcases_.tombstone_document(id);
    send_json(res,
              {{"record", record_json(result.record)},
               {"template", catalog::render_template(result.record)},
               {"archived_path", result.archived_path},
               {"paragraphs", result.paragraphs},
               {"replaced", result.replaced},
               {"tombstoned", tombstoned}},
              201);
  });

  server_.Delete(R"(/admin/records/(\d+))",
                 wrap("DELETE /admin/records/{id}", [this, admin](const Request& req, Response& res) {
                   admin(req);
                   auto id = path_id(req.matches[1]);
                   if (!catalogue_.remove_record(id)) {
                     throw Error(Errc::unknown_document, "no record with id " + std::to_string(id));
                   }
                   send_json(res, {{"removed", id}, {"tombstoned", bookcases_.tombstone_document(id)}});
                 }));
}

}  // namespace alex::service
