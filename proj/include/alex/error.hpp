#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace alex {

// Every failure the library reports carries one of these codes. The service
// maps them onto HTTP statuses; the CLI maps them onto exit codes.
enum class Errc {
  validation,
  encoding,
  // query language
  empty_query,
  unbalanced_quote,
  unsupported_nesting,
  short_truncation,
  bad_query,
  unsupported_in_content,
  empty_selection,
  // template records
  unknown_field,
  missing_required_field,
  duplicate_field,
  invalid_value,
  // lookups
  not_found,
  unknown_document,
  unknown_paragraph,
  // fetching
  network,
  timeout,
  http_status,
  redirect_limit,
  redirect_loop,
  unsupported_scheme,
  robots_disallowed,
  // acquisition
  policy_rejected,
  conversion_unsupported,
  storage,
  empty_collection,
  // bookcases
  name_taken,
  empty_key,
  auth,
  invalid_token,
  forbidden,
  read_only,
  oversize,
  dangling_reference,
  unknown_name,
  // index files
  corrupt_index,
  injected_fault,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  Error(Errc code, const std::string& message, int status)
      : std::runtime_error(message), code_(code), status_(status) {}

  Errc code() const noexcept { return code_; }
  // HTTP status carried by fetch errors; 0 otherwise.
  int status() const noexcept { return status_; }

 private:
  Errc code_;
  int status_ = 0;
};

}  // namespace alex
