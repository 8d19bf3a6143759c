#include "alex/bookcase/sanitize.hpp"

#include <algorithm>
#include <array>
#include <vector>

#include "alex/error.hpp"
#include "alex/harvest/extract.hpp"
#include "alex/text/tokenize.hpp"
#include "alex/text/utf8.hpp"

namespace alex::bookcase {

namespace {

constexpr std::array<std::string_view, 9> kAllowed = {"p", "br", "em", "strong", "a", "ul", "ol", "li", "blockquote"};

bool allowed(std::string_view name) { return std::find(kAllowed.begin(), kAllowed.end(), name) != kAllowed.end(); }

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

std::string escape(std::string_view s, bool attribute) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"':
        out += attribute ? "&quot;" : "\"";
        break;
      default: out += c;
    }
  }
  return out;
}

// Value of the href attribute in a tag body, if any.
std::string href_of(std::string_view tag) {
  std::size_t i = 0;
  while (i < tag.size()) {
    while (i < tag.size() && (is_space(tag[i]) || tag[i] == '/')) ++i;
    auto name_start = i;
    while (i < tag.size() && !is_space(tag[i]) && tag[i] != '=' && tag[i] != '/') ++i;
    auto name = text::fold_case(tag.substr(name_start, i - name_start));
    while (i < tag.size() && is_space(tag[i])) ++i;
    std::string value;
    if (i < tag.size() && tag[i] == '=') {
      ++i;
      while (i < tag.size() && is_space(tag[i])) ++i;
      if (i < tag.size() && (tag[i] == '"' || tag[i] == '\'')) {
        char q = tag[i++];
        auto end = tag.find(q, i);
        if (end == std::string_view::npos) end = tag.size();
        value = tag.substr(i, end - i);
        i = end + 1;
      } else {
        auto start = i;
        while (i < tag.size() && !is_space(tag[i])) ++i;
        value = tag.substr(start, i - start);
      }
    }
    if (name == "href") return harvest::decode_entities(value);
    if (name.empty() && i < tag.size()) ++i;
  }
  return {};
}

bool safe_url(std::string_view url) {
  auto folded = text::fold_case(url);
  if (!folded.starts_with("http://") && !folded.starts_with("https://")) return false;
  return std::none_of(url.begin(), url.end(), [](char c) { return static_cast<unsigned char>(c) < 0x20; });
}

// Finds the end of a raw-text element such as script, or npos.
std::size_t raw_text_end(std::string_view html, std::string_view name, std::size_t from) {
  auto lower = text::fold_case(html);
  auto needle = "</" + std::string(name);
  auto at = lower.find(needle, from);
  if (at == std::string::npos) return std::string_view::npos;
  auto gt = html.find('>', at);
  return gt == std::string_view::npos ? html.size() : gt + 1;
}

}  // namespace

std::string sanitize_annotation(std::string_view html) {
  text::require_utf8(html);
  std::string out;
  std::vector<std::string> open;
  std::string run;

  auto flush = [&] {
    if (!run.empty()) out += escape(harvest::decode_entities(run), false);
    run.clear();
  };

  for (std::size_t i = 0; i < html.size();) {
    if (html[i] != '<') {
      run += html[i++];
      continue;
    }
    if (html.substr(i, 4) == "<!--") {
      auto end = html.find("-->", i + 4);
      i = end == std::string_view::npos ? html.size() : end + 3;
      continue;
    }
    // Anything that cannot start a tag is text.
    bool closing = i + 1 < html.size() && html[i + 1] == '/';
    auto name_at = i + 1 + (closing ? 1 : 0);
    if (name_at >= html.size() || !(std::isalpha(static_cast<unsigned char>(html[name_at])) || html[name_at] == '!' ||
                                     html[name_at] == '?')) {
      run += html[i++];
      continue;
    }
    auto gt = html.find('>', i);
    if (gt == std::string_view::npos) {
      // An unterminated tag: drop the rest.
      break;
    }
    flush();
    auto body = html.substr(name_at, gt - name_at);
    auto name_end = body.find_first_of(" \t\r\n\f/>");
    auto name = text::fold_case(body.substr(0, name_end));
    auto attrs = name_end == std::string_view::npos ? std::string_view{} : body.substr(name_end);
    i = gt + 1;

    if (!closing && (name == "script" || name == "style")) {
      auto end = raw_text_end(html, name, i);
      i = end == std::string_view::npos ? html.size() : end;
      continue;
    }
    if (!allowed(name)) continue;
    if (name == "br") {
      if (!closing) out += "<br>";
      continue;
    }
    if (closing) {
      auto it = std::find(open.rbegin(), open.rend(), name);
      if (it == open.rend()) continue;
      auto keep = static_cast<std::size_t>(open.rend() - it) - 1;
      while (open.size() > keep) {
        out += "</" + open.back() + ">";
        open.pop_back();
      }
      continue;
    }
    if (name == "a") {
      auto href = href_of(attrs);
      if (safe_url(href)) {
        out += "<a href=\"" + escape(href, true) + "\">";
      } else {
        out += "<a>";
      }
    } else {
      out += "<" + name + ">";
    }
    open.push_back(name);
  }
  flush();
  while (!open.empty()) {
    out += "</" + open.back() + ">";
    open.pop_back();
  }
  if (out.size() > kMaxAnnotationBytes) {
    throw Error(Errc::oversize, "annotation is " + std::to_string(out.size()) + " bytes after cleaning; the limit is " +
                                    std::to_string(kMaxAnnotationBytes));
  }
  return out;
}

}  // namespace alex::bookcase
