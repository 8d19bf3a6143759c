#include "alex/error.hpp"

namespace alex {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::validation: return "validation";
    case Errc::encoding: return "encoding";
    case Errc::empty_query: return "empty-query";
    case Errc::unbalanced_quote: return "unbalanced-quote";
    case Errc::unsupported_nesting: return "unsupported-nesting";
    case Errc::short_truncation: return "short-truncation";
    case Errc::bad_query: return "bad-query";
    case Errc::unsupported_in_content: return "unsupported-in-content";
    case Errc::empty_selection: return "empty-selection";
    case Errc::unknown_field: return "unknown-field";
    case Errc::missing_required_field: return "missing-required-field";
    case Errc::duplicate_field: return "duplicate-field";
    case Errc::invalid_value: return "invalid-value";
    case Errc::not_found: return "not-found";
    case Errc::unknown_document: return "unknown-document";
    case Errc::unknown_paragraph: return "unknown-paragraph";
    case Errc::network: return "network";
    case Errc::timeout: return "timeout";
    case Errc::http_status: return "http-status";
    case Errc::redirect_limit: return "redirect-limit";
    case Errc::redirect_loop: return "redirect-loop";
    case Errc::unsupported_scheme: return "unsupported-scheme";
    case Errc::robots_disallowed: return "robots-disallowed";
    case Errc::policy_rejected: return "policy-rejected";
    case Errc::conversion_unsupported: return "conversion-unsupported";
    case Errc::storage: return "storage";
    case Errc::empty_collection: return "empty-collection";
    case Errc::name_taken: return "name-taken";
    case Errc::empty_key: return "empty-key";
    case Errc::auth: return "auth";
    case Errc::invalid_token: return "invalid-token";
    case Errc::forbidden: return "forbidden";
    case Errc::read_only: return "read-only";
    case Errc::oversize: return "oversize";
    case Errc::dangling_reference: return "dangling-reference";
    case Errc::unknown_name: return "unknown-name";
    case Errc::corrupt_index: return "corrupt-index";
    case Errc::injected_fault: return "injected-fault";
  }
  return "unknown";
}

}  // namespace alex
