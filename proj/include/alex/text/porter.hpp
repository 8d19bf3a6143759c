#pragma once

#include <string>
#include <string_view>

namespace alex::text {

// Porter (1980) suffix-stripping stemmer, following the published rule
// tables (ABLI -> ABLE, no length guard) rather than later revisions.
// Expects a case-folded token.
std::string stem(std::string_view token);

}  // namespace alex::text
