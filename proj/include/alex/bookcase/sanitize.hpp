#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace alex::bookcase {

inline constexpr std::size_t kMaxAnnotationBytes = 64 * 1024;

// Keeps p, br, em, strong, ul, ol, li, blockquote and a (http or https href
// only, no other attributes). Other tags are dropped but their text kept,
// except script and style whose content goes too. Output is balanced and
// sanitize(sanitize(x)) == sanitize(x).
//
// Throws Errc::encoding on invalid UTF-8 and Errc::oversize when the result
// exceeds kMaxAnnotationBytes.
std::string sanitize_annotation(std::string_view html);

}  // namespace alex::bookcase
