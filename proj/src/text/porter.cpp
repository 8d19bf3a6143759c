#include "alex/text/porter.hpp"

#include <array>
#include <functional>
#include <vector>

#include "alex/text/utf8.hpp"

namespace alex::text {

namespace {

using Word = std::u32string;

bool is_vowel_letter(char32_t c) {
  return c == U'a' || c == U'e' || c == U'i' || c == U'o' || c == U'u';
}

// A consonant is anything but a, e, i, o, u, and y preceded by a consonant.
std::vector<bool> consonant_flags(const Word& w) {
  std::vector<bool> flags(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (is_vowel_letter(w[i])) {
      flags[i] = false;
    } else if (w[i] == U'y') {
      flags[i] = i == 0 ? true : !flags[i - 1];
    } else {
      flags[i] = true;
    }
  }
  return flags;
}

// m in [C](VC)^m[V].
int measure(const Word& stem) {
  auto flags = consonant_flags(stem);
  int m = 0;
  for (std::size_t i = 1; i < flags.size(); ++i) {
    if (!flags[i - 1] && flags[i]) ++m;
  }
  return m;
}

bool contains_vowel(const Word& stem) {
  for (bool c : consonant_flags(stem)) {
    if (!c) return true;
  }
  return false;
}

bool ends_double_consonant(const Word& w) {
  if (w.size() < 2 || w[w.size() - 1] != w[w.size() - 2]) return false;
  return consonant_flags(w).back();
}

// *o: ends consonant-vowel-consonant, the last not w, x or y.
bool ends_cvc(const Word& w) {
  if (w.size() < 3) return false;
  auto f = consonant_flags(w);
  auto n = w.size();
  char32_t last = w[n - 1];
  return f[n - 3] && !f[n - 2] && f[n - 1] && last != U'w' && last != U'x' && last != U'y';
}

bool ends_with(const Word& w, std::u32string_view suffix) {
  return w.size() >= suffix.size() && std::u32string_view(w).substr(w.size() - suffix.size()) == suffix;
}

Word without(const Word& w, std::size_t n) { return w.substr(0, w.size() - n); }

struct Rule {
  std::u32string_view suffix;
  std::u32string_view replacement;
  std::function<bool(const Word&)> condition;  // empty = unconditional
};

// The first rule whose suffix matches decides the outcome; a failed
// condition leaves the word unchanged.
Word apply_rules(const Word& w, const std::vector<Rule>& rules) {
  for (const auto& r : rules) {
    if (!ends_with(w, r.suffix)) continue;
    Word stem = without(w, r.suffix.size());
    if (!r.condition || r.condition(stem)) return stem + Word(r.replacement);
    return w;
  }
  return w;
}

bool m_gt0(const Word& s) { return measure(s) > 0; }
bool m_gt1(const Word& s) { return measure(s) > 1; }

Word step1a(const Word& w) {
  static const std::vector<Rule> rules{
      {U"sses", U"ss", {}}, {U"ies", U"i", {}}, {U"ss", U"ss", {}}, {U"s", U"", {}}};
  return apply_rules(w, rules);
}

Word step1b(const Word& w) {
  if (ends_with(w, U"eed")) {
    Word stem = without(w, 3);
    return measure(stem) > 0 ? stem + U"ee" : w;
  }
  Word stem;
  bool stripped = false;
  for (std::u32string_view suffix : {std::u32string_view(U"ed"), std::u32string_view(U"ing")}) {
    if (ends_with(w, suffix)) {
      stem = without(w, suffix.size());
      if (contains_vowel(stem)) {
        stripped = true;
        break;
      }
    }
  }
  if (!stripped) return w;

  if (ends_with(stem, U"at")) return stem + U"e";
  if (ends_with(stem, U"bl")) return stem + U"e";
  if (ends_with(stem, U"iz")) return stem + U"e";
  if (ends_double_consonant(stem)) {
    char32_t last = stem.back();
    if (last != U'l' && last != U's' && last != U'z') stem.pop_back();
    return stem;
  }
  if (measure(stem) == 1 && ends_cvc(stem)) return stem + U"e";
  return stem;
}

Word step1c(const Word& w) {
  static const std::vector<Rule> rules{{U"y", U"i", contains_vowel}};
  return apply_rules(w, rules);
}

Word step2(const Word& w) {
  static const std::vector<Rule> rules{
      {U"ational", U"ate", m_gt0}, {U"tional", U"tion", m_gt0}, {U"enci", U"ence", m_gt0},
      {U"anci", U"ance", m_gt0},   {U"izer", U"ize", m_gt0},    {U"abli", U"able", m_gt0},
      {U"alli", U"al", m_gt0},     {U"entli", U"ent", m_gt0},   {U"eli", U"e", m_gt0},
      {U"ousli", U"ous", m_gt0},   {U"ization", U"ize", m_gt0}, {U"ation", U"ate", m_gt0},
      {U"ator", U"ate", m_gt0},    {U"alism", U"al", m_gt0},    {U"iveness", U"ive", m_gt0},
      {U"fulness", U"ful", m_gt0}, {U"ousness", U"ous", m_gt0}, {U"aliti", U"al", m_gt0},
      {U"iviti", U"ive", m_gt0},   {U"biliti", U"ble", m_gt0},
  };
  return apply_rules(w, rules);
}

Word step3(const Word& w) {
  static const std::vector<Rule> rules{
      {U"icate", U"ic", m_gt0}, {U"ative", U"", m_gt0}, {U"alize", U"al", m_gt0},
      {U"iciti", U"ic", m_gt0}, {U"ical", U"ic", m_gt0}, {U"ful", U"", m_gt0},
      {U"ness", U"", m_gt0},
  };
  return apply_rules(w, rules);
}

Word step4(const Word& w) {
  auto ion = [](const Word& s) { return measure(s) > 1 && (s.back() == U's' || s.back() == U't'); };
  static const std::vector<Rule> rules{
      {U"al", U"", m_gt1},   {U"ance", U"", m_gt1}, {U"ence", U"", m_gt1}, {U"er", U"", m_gt1},
      {U"ic", U"", m_gt1},   {U"able", U"", m_gt1}, {U"ible", U"", m_gt1}, {U"ant", U"", m_gt1},
      {U"ement", U"", m_gt1}, {U"ment", U"", m_gt1}, {U"ent", U"", m_gt1}, {U"ion", U"", ion},
      {U"ou", U"", m_gt1},   {U"ism", U"", m_gt1},  {U"ate", U"", m_gt1},  {U"iti", U"", m_gt1},
      {U"ous", U"", m_gt1},  {U"ive", U"", m_gt1},  {U"ize", U"", m_gt1},
  };
  return apply_rules(w, rules);
}

Word step5a(const Word& w) {
  if (!ends_with(w, U"e")) return w;
  Word stem = without(w, 1);
  int m = measure(stem);
  if (m > 1 || (m == 1 && !ends_cvc(stem))) return stem;
  return w;
}

Word step5b(const Word& w) {
  if (ends_with(w, U"ll") && measure(without(w, 1)) > 1) return without(w, 1);
  return w;
}

}  // namespace

std::string stem(std::string_view token) {
  Word w;
  for (std::size_t i = 0; i < token.size();) w += next_code_point(token, i);
  w = step5b(step5a(step4(step3(step2(step1c(step1b(step1a(w))))))));
  std::string out;
  for (char32_t c : w) append_utf8(out, c);
  return out;
}

}  // namespace alex::text
