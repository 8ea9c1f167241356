// Copyright 2026 The SemantiX Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "semantix/error.hpp"
#include "semantix/utf8.hpp"

namespace semantix {

// Set of characters that survive normalization. Either unrestricted or an
// explicit set; an explicit set always contains U+0020.
class Charset {
 public:
  static Charset all() { return Charset(); }

  static Charset of(std::u32string_view chars) {
    Charset c;
    c.chars_.emplace(chars.begin(), chars.end());
    c.chars_->insert(U' ');
    return c;
  }

  // a-z, ä, ö, ü and space.
  static Charset german() { return of(U"abcdefghijklmnopqrstuvwxyzäöü "); }

  // "all", "german", or a literal list of characters.
  static Charset parse(std::string_view spec) {
    if (spec == "all") return all();
    if (spec == "german" || spec.empty()) return german();
    return of(utf8::decode(spec));
  }

  bool unrestricted() const noexcept { return !chars_.has_value(); }

  bool contains(char32_t c) const { return !chars_ || chars_->count(c) != 0; }

  std::string describe() const {
    if (!chars_) return "all";
    std::u32string s(chars_->begin(), chars_->end());
    return utf8::encode(s);
  }

  friend bool operator==(const Charset&, const Charset&) = default;

 private:
  Charset() = default;
  std::optional<std::set<char32_t>> chars_;
};

struct NormalizationConfig {
  bool lowercase = true;
  Charset allowed_charset = Charset::german();
  bool spell_numbers = true;
  bool collapse_whitespace = true;

  // All steps disabled; normalize() is the identity under this config.
  static NormalizationConfig identity() {
    return {.lowercase = false,
            .allowed_charset = Charset::all(),
            .spell_numbers = false,
            .collapse_whitespace = false};
  }
};

struct NormalizeResult {
  std::string text;
  // Numerals left as digits: out of range, or non-integer (decimals, dates).
  std::size_t unspelled_numbers = 0;
};

inline constexpr std::uint64_t kMaxSpelledNumber = 999999;

namespace detail {

inline std::string spell_below_100(unsigned n) {
  static constexpr std::array<std::string_view, 20> kSmall = {
      "null",   "eins",    "zwei",     "drei",     "vier",     "fünf",    "sechs",
      "sieben", "acht",    "neun",     "zehn",     "elf",      "zwölf",   "dreizehn",
      "vierzehn", "fünfzehn", "sechzehn", "siebzehn", "achtzehn", "neunzehn"};
  static constexpr std::array<std::string_view, 10> kTens = {
      "", "", "zwanzig", "dreißig", "vierzig", "fünfzig", "sechzig", "siebzig", "achtzig", "neunzig"};
  if (n < 20) return std::string(kSmall[n]);
  unsigned unit = n % 10;
  std::string tens(kTens[n / 10]);
  if (unit == 0) return tens;
  std::string u = unit == 1 ? "ein" : std::string(kSmall[unit]);
  return u + "und" + tens;
}

inline std::string spell_below_1000(unsigned n) {
  unsigned hundreds = n / 100;
  unsigned rest = n % 100;
  std::string out;
  if (hundreds > 0) out = (hundreds == 1 ? std::string("ein") : spell_below_100(hundreds)) + "hundert";
  if (rest > 0 || hundreds == 0) out += spell_below_100(rest);
  return out;
}

}  // namespace detail

// German cardinal in compound spelling, e.g. 52 -> "zweiundfünfzig",
// 101 -> "einhunderteins". Throws RangeError above kMaxSpelledNumber.
inline std::string spell_number_de(std::uint64_t n) {
  if (n > kMaxSpelledNumber) {
    throw RangeError("spell_number_de: " + std::to_string(n) + " exceeds " +
                     std::to_string(kMaxSpelledNumber));
  }
  auto thousands = static_cast<unsigned>(n / 1000);
  auto rest = static_cast<unsigned>(n % 1000);
  if (thousands == 0) return detail::spell_below_1000(rest);
  std::string prefix = detail::spell_below_1000(thousands);
  // "eins" loses its final s in front of "tausend".
  if (prefix.ends_with("eins")) prefix.pop_back();
  std::string out = prefix + "tausend";
  if (rest > 0) out += detail::spell_below_1000(rest);
  return out;
}

namespace detail {

inline bool is_ascii_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

inline bool is_word_char(char32_t c) {
  return !utf8::is_space(c) && (c >= 0x80 || std::isalnum(static_cast<int>(c)) != 0);
}

// Digit runs become German words. A numeral is a digit run optionally
// continued by [.,]digits groups; continued numerals are non-integer and
// stay as digits.
inline std::u32string spell_numerals(std::u32string_view in, std::size_t& unspelled) {
  std::u32string out;
  out.reserve(in.size() * 2);
  std::size_t i = 0;
  while (i < in.size()) {
    if (!is_ascii_digit(in[i])) {
      out.push_back(in[i++]);
      continue;
    }
    std::size_t end = i;
    while (end < in.size() && is_ascii_digit(in[end])) ++end;
    std::size_t numeral_end = end;
    while (numeral_end + 1 < in.size() && (in[numeral_end] == U'.' || in[numeral_end] == U',') &&
           is_ascii_digit(in[numeral_end + 1])) {
      numeral_end += 1;
      while (numeral_end < in.size() && is_ascii_digit(in[numeral_end])) ++numeral_end;
    }
    if (numeral_end != end) {
      out.append(in.substr(i, numeral_end - i));
      ++unspelled;
      i = numeral_end;
      continue;
    }
    std::size_t first = i;
    while (first + 1 < end && in[first] == U'0') ++first;
    std::optional<std::uint64_t> value;
    if (end - first <= 6) {
      std::uint64_t v = 0;
      for (std::size_t k = first; k < end; ++k) v = v * 10 + (in[k] - U'0');
      value = v;
    }
    if (!value) {
      out.append(in.substr(i, end - i));
      ++unspelled;
      i = end;
      continue;
    }
    if (!out.empty() && is_word_char(out.back())) out.push_back(U' ');
    out += utf8::decode(spell_number_de(*value));
    if (end < in.size() && is_word_char(in[end]) && !is_ascii_digit(in[end])) out.push_back(U' ');
    i = end;
  }
  return out;
}

inline char32_t to_lower(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 32;
  if (c < 0xC0) return c;
  if ((c >= 0xC0 && c <= 0xDE && c != 0xD7)) return c + 32;
  if (c == 0x1E9E) return 0xDF;  // capital sharp s
  if (c >= 0x100 && c <= 0x17F) {
    if (c == 0x130) return U'i';
    if (c == 0x178) return 0xFF;
    if ((c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E)) return (c % 2 == 1) ? c + 1 : c;
    if (c == 0x131 || c == 0x138 || c == 0x149 || c == 0x17F) return c;
    return (c % 2 == 0) ? c + 1 : c;
  }
  if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 32;
  if (c >= 0x410 && c <= 0x42F) return c + 32;
  if (c >= 0x400 && c <= 0x40F) return c + 80;
  return c;
}

struct Decomposition {
  char32_t composite;
  char32_t base;
  char32_t mark;
};

// Canonical decompositions of precomposed Latin letters with one mark.
inline constexpr std::array<Decomposition, 62> kDecompositions = {{
    {0xC0, U'A', 0x300}, {0xC1, U'A', 0x301}, {0xC2, U'A', 0x302}, {0xC3, U'A', 0x303},
    {0xC4, U'A', 0x308}, {0xC5, U'A', 0x30A}, {0xC7, U'C', 0x327}, {0xC8, U'E', 0x300},
    {0xC9, U'E', 0x301}, {0xCA, U'E', 0x302}, {0xCB, U'E', 0x308}, {0xCC, U'I', 0x300},
    {0xCD, U'I', 0x301}, {0xCE, U'I', 0x302}, {0xCF, U'I', 0x308}, {0xD1, U'N', 0x303},
    {0xD2, U'O', 0x300}, {0xD3, U'O', 0x301}, {0xD4, U'O', 0x302}, {0xD5, U'O', 0x303},
    {0xD6, U'O', 0x308}, {0xD9, U'U', 0x300}, {0xDA, U'U', 0x301}, {0xDB, U'U', 0x302},
    {0xDC, U'U', 0x308}, {0xDD, U'Y', 0x301}, {0xE0, U'a', 0x300}, {0xE1, U'a', 0x301},
    {0xE2, U'a', 0x302}, {0xE3, U'a', 0x303}, {0xE4, U'a', 0x308}, {0xE5, U'a', 0x30A},
    {0xE7, U'c', 0x327}, {0xE8, U'e', 0x300}, {0xE9, U'e', 0x301}, {0xEA, U'e', 0x302},
    {0xEB, U'e', 0x308}, {0xEC, U'i', 0x300}, {0xED, U'i', 0x301}, {0xEE, U'i', 0x302},
    {0xEF, U'i', 0x308}, {0xF1, U'n', 0x303}, {0xF2, U'o', 0x300}, {0xF3, U'o', 0x301},
    {0xF4, U'o', 0x302}, {0xF5, U'o', 0x303}, {0xF6, U'o', 0x308}, {0xF9, U'u', 0x300},
    {0xFA, U'u', 0x301}, {0xFB, U'u', 0x302}, {0xFC, U'u', 0x308}, {0xFD, U'y', 0x301},
    {0xFF, U'y', 0x308}, {0x106, U'C', 0x301}, {0x107, U'c', 0x301}, {0x10C, U'C', 0x30C},
    {0x10D, U'c', 0x30C}, {0x160, U'S', 0x30C}, {0x161, U's', 0x30C}, {0x17D, U'Z', 0x30C},
    {0x17E, U'z', 0x30C}, {0x178, U'Y', 0x308},
}};

inline bool is_combining_mark(char32_t c) { return c >= 0x300 && c <= 0x36F; }

inline const Decomposition* find_decomposition(char32_t composite) {
  for (const auto& d : kDecompositions)
    if (d.composite == composite) return &d;
  return nullptr;
}

inline std::optional<char32_t> compose(char32_t base, char32_t mark) {
  for (const auto& d : kDecompositions)
    if (d.base == base && d.mark == mark) return d.composite;
  return std::nullopt;
}

// Decomposes, then recomposes only pairs whose composite the charset admits.
// Marks that cannot attach are dropped, so precomposed and combining-mark
// spellings of the same letter end up identical.
inline std::u32string canonicalize(std::u32string_view in, const Charset& charset) {
  std::u32string nfd;
  nfd.reserve(in.size());
  for (char32_t c : in) {
    if (const auto* d = find_decomposition(c)) {
      nfd.push_back(d->base);
      nfd.push_back(d->mark);
    } else {
      nfd.push_back(c);
    }
  }
  std::u32string out;
  out.reserve(nfd.size());
  for (char32_t c : nfd) {
    if (is_combining_mark(c) && !out.empty()) {
      if (auto comp = compose(out.back(), c); comp && charset.contains(*comp)) {
        out.back() = *comp;
        continue;
      }
      if (!charset.contains(c)) continue;
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace detail

namespace detail {

inline std::u32string normalize_pass(std::u32string s, const NormalizationConfig& config, std::size_t& unspelled) {
  if (config.spell_numbers) s = spell_numerals(s, unspelled);

  if (config.lowercase) {
    for (auto& c : s) c = to_lower(c);
  }

  if (!config.allowed_charset.unrestricted()) {
    const Charset& cs = config.allowed_charset;
    std::u32string expanded;
    expanded.reserve(s.size());
    for (char32_t c : s) {
      if (c == 0xDF && !cs.contains(c)) {
        expanded += U"ss";
      } else if (c == 0x1E9E && !cs.contains(c)) {
        expanded += U"SS";
      } else {
        expanded.push_back(c);
      }
    }
    std::u32string filtered;
    filtered.reserve(expanded.size());
    for (char32_t c : canonicalize(expanded, cs)) {
      if (cs.contains(c)) {
        filtered.push_back(c);
      } else if (utf8::is_space(c)) {
        filtered.push_back(U' ');
      }
    }
    s = std::move(filtered);
  }

  if (config.collapse_whitespace) s = utf8::collapse_whitespace(s);
  return s;
}

}  // namespace detail

// Applies, in order: number spelling, lowercasing, canonical composition with
// sharp-s expansion and charset filtering, whitespace collapsing. Total; never
// throws on text input.
//
// Filtering can expose a new numeral ("7,1" loses its comma when the charset
// keeps digits but not punctuation), so the pass repeats until the text is
// stable. Each repeat spells at least one numeral and no pass adds digits, so
// this terminates, and the result is idempotent by construction. The
// unspelled count refers to numerals of the input as written.
inline NormalizeResult normalize_counted(std::string_view text, const NormalizationConfig& config = {}) {
  NormalizeResult result;
  std::u32string s = detail::normalize_pass(utf8::decode(text), config, result.unspelled_numbers);
  for (;;) {
    std::size_t ignored = 0;
    std::u32string next = detail::normalize_pass(s, config, ignored);
    if (next == s) break;
    s = std::move(next);
  }
  result.text = utf8::encode(s);
  return result;
}

inline std::string normalize(std::string_view text, const NormalizationConfig& config = {}) {
  return normalize_counted(text, config).text;
}

}  // namespace semantix
