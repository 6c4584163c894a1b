// Copyright 2026 The Sibyl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SIBYL_TEXT_HPP_
#define SIBYL_TEXT_HPP_

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "sibyl/unicode.hpp"

namespace sibyl {

// Byte range of a word inside a text: a whitespace-delimited chunk with its
// leading and trailing punctuation (apostrophes excepted) removed, kept only
// if it contains a letter or digit.
struct WordSpan {
  std::size_t offset;
  std::size_t length;

  std::string_view In(std::string_view text) const { return text.substr(offset, length); }
};

namespace detail {

struct Chunk {
  std::size_t begin;  // code point index, inclusive
  std::size_t end;    // code point index, exclusive
};

inline std::vector<Chunk> Chunks(const std::vector<unicode::CodePoint>& cps) {
  std::vector<Chunk> chunks;
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && unicode::IsWhitespace(cps[i].value)) ++i;
    const std::size_t begin = i;
    while (i < cps.size() && !unicode::IsWhitespace(cps[i].value)) ++i;
    if (i > begin) chunks.push_back({begin, i});
  }
  return chunks;
}

inline bool Strippable(char32_t c) {
  return unicode::IsPunctuation(c) && !unicode::IsApostrophe(c);
}

// Splits a chunk into [lead, core, trail] code point ranges. Returns false if
// the chunk holds no letter or digit (then the whole chunk is one token).
inline bool SplitChunk(const std::vector<unicode::CodePoint>& cps, Chunk c,
                       std::size_t& core_begin, std::size_t& core_end) {
  const bool has_alnum = std::any_of(cps.begin() + static_cast<std::ptrdiff_t>(c.begin),
                                     cps.begin() + static_cast<std::ptrdiff_t>(c.end),
                                     [](const auto& cp) { return unicode::IsAlnum(cp.value); });
  if (!has_alnum) return false;
  core_begin = c.begin;
  while (Strippable(cps[core_begin].value)) ++core_begin;
  core_end = c.end;
  while (Strippable(cps[core_end - 1].value)) --core_end;
  return true;
}

inline std::string Slice(std::string_view text, const std::vector<unicode::CodePoint>& cps,
                         std::size_t begin, std::size_t end) {
  const std::size_t from = cps[begin].offset;
  const std::size_t to = cps[end - 1].offset + cps[end - 1].length;
  return std::string(text.substr(from, to - from));
}

}  // namespace detail

inline bool IsWordToken(std::string_view token) {
  for (const auto& cp : unicode::Decode(token)) {
    if (unicode::IsAlnum(cp.value)) return true;
  }
  return false;
}

// Whitespace split, then leading/trailing punctuation runs become their own
// tokens. Internal hyphens and apostrophes stay inside the word.
inline std::vector<std::string> TokenizeWords(std::string_view text) {
  const auto cps = unicode::Decode(text);
  std::vector<std::string> tokens;
  for (const auto& chunk : detail::Chunks(cps)) {
    std::size_t core_begin = 0;
    std::size_t core_end = 0;
    if (!detail::SplitChunk(cps, chunk, core_begin, core_end)) {
      tokens.push_back(detail::Slice(text, cps, chunk.begin, chunk.end));
      continue;
    }
    if (core_begin > chunk.begin) tokens.push_back(detail::Slice(text, cps, chunk.begin, core_begin));
    tokens.push_back(detail::Slice(text, cps, core_begin, core_end));
    if (chunk.end > core_end) tokens.push_back(detail::Slice(text, cps, core_end, chunk.end));
  }
  return tokens;
}

// Number of tokens carrying at least one letter or digit.
inline std::size_t WordCount(std::string_view text) {
  const auto tokens = TokenizeWords(text);
  return static_cast<std::size_t>(std::count_if(tokens.begin(), tokens.end(),
                                                [](const std::string& t) { return IsWordToken(t); }));
}

inline std::vector<WordSpan> WordSpans(std::string_view text) {
  const auto cps = unicode::Decode(text);
  std::vector<WordSpan> spans;
  for (const auto& chunk : detail::Chunks(cps)) {
    std::size_t core_begin = 0;
    std::size_t core_end = 0;
    if (!detail::SplitChunk(cps, chunk, core_begin, core_end)) continue;
    const std::size_t from = cps[core_begin].offset;
    const std::size_t to = cps[core_end - 1].offset + cps[core_end - 1].length;
    spans.push_back({from, to - from});
  }
  return spans;
}

inline std::string Join(const std::vector<std::string>& parts, std::string_view sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

// Lowercased, without the trailing period.
inline constexpr std::array<std::string_view, 24> kAbbreviations = {
    "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "vs", "mt",
    "e.g", "i.e", "u.s", "u.k", "u.n", "inc", "ltd", "co", "corp", "jan",
    "feb", "no", "gen", "sen",
};

namespace detail {

inline bool IsTerminator(char32_t c) { return c == '.' || c == '!' || c == '?'; }

inline bool IsCloser(char32_t c) {
  return c == '"' || c == '\'' || c == ')' || c == ']' || c == 0x2019 || c == 0x201D;
}

}  // namespace detail

// Sentences end at a run of '.', '!' or '?' (plus closing quotes/brackets)
// followed by whitespace or end of text, unless the word before a single '.'
// is a known abbreviation.
inline std::vector<std::string> SplitSentences(std::string_view text) {
  const auto cps = unicode::Decode(text);
  std::vector<std::string> sentences;
  std::size_t start = 0;  // code point index of current sentence start
  auto emit = [&](std::size_t end) {
    std::size_t b = start;
    std::size_t e = end;
    while (b < e && unicode::IsWhitespace(cps[b].value)) ++b;
    while (e > b && unicode::IsWhitespace(cps[e - 1].value)) --e;
    if (e > b) sentences.push_back(detail::Slice(text, cps, b, e));
  };
  std::size_t i = 0;
  while (i < cps.size()) {
    if (!detail::IsTerminator(cps[i].value)) {
      ++i;
      continue;
    }
    const std::size_t term_begin = i;
    while (i < cps.size() && detail::IsTerminator(cps[i].value)) ++i;
    while (i < cps.size() && detail::IsCloser(cps[i].value)) ++i;
    const bool at_boundary = i == cps.size() || unicode::IsWhitespace(cps[i].value);
    if (!at_boundary) continue;
    if (i - term_begin == 1 && cps[term_begin].value == '.') {
      std::size_t w = term_begin;
      while (w > start && !unicode::IsWhitespace(cps[w - 1].value)) --w;
      std::string word;
      for (std::size_t k = w; k < term_begin; ++k) {
        if (k == w && !unicode::IsAlnum(cps[k].value)) continue;
        unicode::Append(word, unicode::ToLower(cps[k].value));
      }
      if (std::find(kAbbreviations.begin(), kAbbreviations.end(), word) != kAbbreviations.end()) {
        continue;
      }
    }
    emit(i);
    start = i;
  }
  emit(cps.size());
  return sentences;
}

}  // namespace sibyl

#endif  // SIBYL_TEXT_HPP_
