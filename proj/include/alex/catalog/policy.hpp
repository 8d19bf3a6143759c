#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace alex::catalog {

enum class License { public_domain, free, restricted };

enum class PolicyRule {
  license,             // only public-domain or freely distributed texts
  incomplete,          // only complete works
  format_unalterable,  // PDF and friends are never included
  format_unsupported,  // media type outside every preference tier
};

std::string_view to_string(PolicyRule r) noexcept;
std::optional<License> parse_license(std::string_view s) noexcept;

struct PolicyDecision {
  bool accepted = false;
  std::optional<int> preference_rank;  // 1 (best) .. 4; set iff accepted
  std::vector<PolicyRule> reasons;     // nonempty iff rejected
};

struct PolicyConfig {
  std::vector<std::string> compressed_types{"application/gzip", "application/zip"};
  std::vector<std::string> word_processor_types{"application/msword", "application/rtf"};
  std::vector<std::string> unalterable_types{"application/pdf", "application/x-pdf",
                                             "application/acrobat"};
};

struct MediaType {
  std::string type;     // lowercased
  std::string subtype;  // lowercased
  std::vector<std::pair<std::string, std::string>> params;

  std::string essence() const { return type + "/" + subtype; }
};

// Throws Errc::validation on malformed input.
MediaType parse_media_type(std::string_view s);
bool is_valid_media_type(std::string_view s) noexcept;

PolicyDecision evaluate_policy(std::string_view mime_type, License license, bool complete,
                               const PolicyConfig& config = {});

}  // namespace alex::catalog
