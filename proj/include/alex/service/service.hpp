#pragma once

#include <memory>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "alex/bookcase/store.hpp"
#include "alex/error.hpp"
#include "alex/harvest/fetch.hpp"
#include "alex/harvest/ingest.hpp"
#include "alex/service/config.hpp"
#include "alex/service/hits.hpp"
#include "alex/store/catalogue.hpp"

namespace alex::service {

// HTTP status for an error code.
int http_status(Errc code) noexcept;

// {"error": {"code": ..., "message": ...}}
nlohmann::json error_body(std::string_view code, std::string_view message);

nlohmann::json record_json(const catalog::TemplateRecord& r);

// Curator fields from an ingest request body. Throws Errc::validation.
harvest::CuratorInput curator_from_json(const nlohmann::json& body);

// Binds every route onto an httplib server. Data root layout:
//
//   <root>/              the catalogue (see store::Catalogue)
//   <root>/bookcases/    one JSON document per bookcase
//   <root>/outbox.jsonl  key-hint messages
//   <root>/stats.json    hit counts
class Service {
 public:
  explicit Service(ServiceConfig config, HitCounter::Clock clock = {});
  ~Service();

  httplib::Server& server() noexcept { return server_; }
  store::Catalogue& catalogue() noexcept { return catalogue_; }
  bookcase::BookcaseStore& bookcases() noexcept { return bookcases_; }
  HitCounter& hits() noexcept { return hits_; }
  const ServiceConfig& config() const noexcept { return config_; }

  // Blocks until stop(). False when the address cannot be bound.
  bool listen();
  // Serves on a background thread and returns the bound port. Ephemeral
  // binds any free port; otherwise the configured one (0 also means any).
  int start_background(bool ephemeral = true);
  void stop();

 private:
  void routes();

  ServiceConfig config_;
  store::Catalogue catalogue_;
  bookcase::BookcaseStore bookcases_;
  HitCounter hits_;
  harvest::Fetcher fetcher_;
  httplib::Server server_;
  std::unique_ptr<std::thread> thread_;
};

}  // namespace alex::service
