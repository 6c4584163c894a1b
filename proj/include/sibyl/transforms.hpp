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

#ifndef SIBYL_TRANSFORMS_HPP_
#define SIBYL_TRANSFORMS_HPP_

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sibyl/error.hpp"
#include "sibyl/label.hpp"
#include "sibyl/lexicon.hpp"
#include "sibyl/random.hpp"
#include "sibyl/registry.hpp"
#include "sibyl/sample.hpp"
#include "sibyl/text.hpp"
#include "sibyl/unicode.hpp"

namespace sibyl {

class TransformOutcome {
 public:
  static TransformOutcome NotApplicable() { return TransformOutcome(); }
  static TransformOutcome Produced(TextSample sample) {
    TransformOutcome out;
    out.sample_ = std::move(sample);
    return out;
  }

  bool produced() const { return sample_.has_value(); }
  const TextSample& sample() const& { return sample_.value(); }
  TextSample&& sample() && { return std::move(sample_).value(); }

 private:
  TransformOutcome() = default;
  std::optional<TextSample> sample_;
};

struct TransformContext {
  const TaskSpec& task;
  const LexiconStore& store;
  const VarianceTable& variance;
  // Fraction of eligible units a typo perturbs.
  double typo_intensity = 0.1;
};

// Hard label for a SIB transmutation: all mass on the transform's target
// class. kFlip targets the class opposite the current argmax.
inline SoftLabel TransmuteLabel(std::string_view id, const SoftLabel& label, const TaskSpec& task,
                                const VarianceTable& variance) {
  const TransformInfo& info = GetTransform(id);
  if (variance.Get(id, task.kind()) != Variance::kSibTransmutation) {
    throw Error(ErrorCode::kNotTransmutative,
                std::string(id) + " is not a transmutation for " + std::string(task.kind_name()));
  }
  if (label.size() != task.num_classes()) {
    throw Error(ErrorCode::kDimensionMismatch, "label does not match task");
  }
  switch (info.polarity) {
    case Polarity::kPositive:
    case Polarity::kNegative:
      if (task.kind() != TaskKind::kSentiment) {
        throw Error(ErrorCode::kTaskMismatch, std::string(id) + " targets a sentiment polarity");
      }
      return SoftLabel::OneHot(2, info.polarity == Polarity::kPositive ? kPositiveClass : kNegativeClass);
    case Polarity::kFlip:
      if (task.num_classes() != 2) {
        throw Error(ErrorCode::kTaskMismatch, std::string(id) + " can only flip a binary label");
      }
      return SoftLabel::OneHot(2, 1 - label.ArgMax());
  }
  throw Error(ErrorCode::kTaskMismatch, std::string(id));
}

inline SoftLabel TransmuteLabel(std::string_view id, const SoftLabel& label, const TaskSpec& task) {
  return TransmuteLabel(id, label, task, VarianceTable::Defaults());
}

namespace perturb {

inline std::string Splice(std::string_view text, std::size_t offset, std::size_t length,
                          std::string_view replacement) {
  std::string out(text.substr(0, offset));
  out.append(replacement);
  out.append(text.substr(offset + length));
  return out;
}

// Removes [offset, offset+length) and one neighbouring whitespace run.
inline std::string Remove(std::string_view text, std::size_t offset, std::size_t length) {
  std::size_t begin = offset;
  std::size_t end = offset + length;
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n'; };
  if (end < text.size() && is_space(text[end])) {
    while (end < text.size() && is_space(text[end])) ++end;
  } else {
    while (begin > 0 && is_space(text[begin - 1])) --begin;
  }
  return Splice(text, begin, end - begin, "");
}

// Swaps the code points at char_index and char_index + 1.
inline std::string SwapAdjacentChars(std::string_view text, std::size_t char_index) {
  const auto cps = unicode::Decode(text);
  if (char_index + 1 >= cps.size()) {
    throw Error(ErrorCode::kInvalidArgument, "swap position out of range");
  }
  const auto& a = cps[char_index];
  const auto& b = cps[char_index + 1];
  std::string swapped(text.substr(b.offset, b.length));
  swapped.append(text.substr(a.offset, a.length));
  return Splice(text, a.offset, a.length + b.length, swapped);
}

inline std::string ReplaceChar(std::string_view text, std::size_t char_index, std::string_view replacement) {
  const auto cps = unicode::Decode(text);
  if (char_index >= cps.size()) {
    throw Error(ErrorCode::kInvalidArgument, "char position out of range");
  }
  return Splice(text, cps[char_index].offset, cps[char_index].length, replacement);
}

// Replaces the character at char_index with its first homoglyph
// (candidate_index selects another one).
inline std::optional<std::string> SubstituteHomoglyph(std::string_view text, std::size_t char_index,
                                                      const LexiconStore& store,
                                                      std::size_t candidate_index = 0) {
  const auto cps = unicode::Decode(text);
  if (char_index >= cps.size()) return std::nullopt;
  const char32_t c = cps[char_index].value;
  const auto candidates = store.Lookup("homoglyph", unicode::Encode(unicode::ToLower(c)));
  if (candidate_index >= candidates.size()) return std::nullopt;
  std::string glyph = candidates[candidate_index];
  if (unicode::IsUpper(c)) glyph = unicode::CapitalizeFirst(glyph);
  return ReplaceChar(text, char_index, glyph);
}

namespace detail {

struct Match {
  std::size_t offset;
  std::size_t length;
  std::string value;  // the matched entry or replacement seed
};

inline bool OnlySpaceBetween(std::string_view text, const WordSpan& a, const WordSpan& b) {
  for (std::size_t i = a.offset + a.length; i < b.offset; ++i) {
    if (text[i] != ' ' && text[i] != '\t') return false;
  }
  return true;
}

inline std::string NormalizeApostrophes(std::string s) {
  std::string out;
  for (const auto& cp : unicode::Decode(s)) {
    unicode::Append(out, cp.value == 0x2019 ? U'\'' : unicode::ToLower(cp.value));
  }
  return out;
}

// Occurrences of multi-word entries (lowercased, space separated) as runs of
// consecutive word spans.
inline std::vector<Match> FindPhrases(std::string_view text, const std::vector<WordSpan>& spans,
                                      const std::vector<std::string>& entries) {
  std::vector<std::vector<std::string>> split;
  for (const auto& entry : entries) {
    std::vector<std::string> words;
    std::size_t start = 0;
    for (;;) {
      const std::size_t sp = entry.find(' ', start);
      words.push_back(NormalizeApostrophes(entry.substr(start, sp - start)));
      if (sp == std::string::npos) break;
      start = sp + 1;
    }
    split.push_back(std::move(words));
  }
  std::vector<Match> matches;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    for (std::size_t e = 0; e < entries.size(); ++e) {
      const auto& words = split[e];
      if (i + words.size() > spans.size()) continue;
      bool ok = true;
      for (std::size_t k = 0; ok && k < words.size(); ++k) {
        if (k > 0 && !OnlySpaceBetween(text, spans[i + k - 1], spans[i + k])) ok = false;
        if (ok && NormalizeApostrophes(std::string(spans[i + k].In(text))) != words[k]) ok = false;
      }
      if (!ok) continue;
      const auto& last = spans[i + words.size() - 1];
      matches.push_back({spans[i].offset, last.offset + last.length - spans[i].offset, entries[e]});
    }
  }
  return matches;
}

template <typename T>
const T& Pick(const std::vector<T>& items, Stream& rng) {
  return items[rng.UniformIndex(items.size())];
}

inline std::optional<std::string> ReplaceFromTable(std::string_view text, std::string_view table,
                                                   const LexiconStore& store, Stream& rng) {
  if (!store.HasTable(table)) return std::nullopt;
  const auto spans = WordSpans(text);
  std::vector<std::pair<WordSpan, std::vector<std::string>>> eligible;
  for (const auto& span : spans) {
    auto candidates = store.Lookup(table, span.In(text));
    if (!candidates.empty()) eligible.emplace_back(span, std::move(candidates));
  }
  if (eligible.empty()) return std::nullopt;
  const auto& [span, candidates] = Pick(eligible, rng);
  const std::string replacement = unicode::MatchCase(span.In(text), Pick(candidates, rng));
  return Splice(text, span.offset, span.length, replacement);
}

inline std::optional<std::string> ChangeNumber(std::string_view text, Stream& rng) {
  std::vector<std::pair<WordSpan, std::int64_t>> eligible;
  for (const auto& span : WordSpans(text)) {
    const auto word = span.In(text);
    if (word.empty() || word.size() > 15) continue;
    if (!std::all_of(word.begin(), word.end(), [](char c) { return c >= '0' && c <= '9'; })) continue;
    const std::int64_t value = std::stoll(std::string(word));
    if (value == 2 || value == 4) continue;
    eligible.emplace_back(span, value);
  }
  if (eligible.empty()) return std::nullopt;
  const auto& [span, value] = Pick(eligible, rng);
  const std::int64_t hi = std::max<std::int64_t>(9, 2 * value);
  std::int64_t replacement = value;
  while (replacement == value) replacement = rng.UniformInt(0, hi);
  return Splice(text, span.offset, span.length, std::to_string(replacement));
}

inline std::optional<std::string> ChangeListEntry(std::string_view text, std::string_view table,
                                                  const LexiconStore& store, Stream& rng) {
  const auto& list = store.PlainList(table);
  std::vector<std::string> lowered;
  for (const auto& entry : list) lowered.push_back(unicode::Lower(entry));
  const auto matches = FindPhrases(text, WordSpans(text), lowered);
  if (matches.empty() || list.size() < 2) return std::nullopt;
  const Match& m = Pick(matches, rng);
  std::vector<std::string> others;
  for (const auto& entry : list) {
    if (unicode::Lower(entry) != m.value) others.push_back(entry);
  }
  std::sort(others.begin(), others.end());
  others.erase(std::unique(others.begin(), others.end()), others.end());
  return Splice(text, m.offset, m.length, Pick(others, rng));
}

inline std::string SwapSpans(std::string_view text, const WordSpan& a, const WordSpan& b) {
  const WordSpan& first = a.offset < b.offset ? a : b;
  const WordSpan& second = a.offset < b.offset ? b : a;
  std::string out(text.substr(0, first.offset));
  out.append(second.In(text));
  out.append(text.substr(first.offset + first.length, second.offset - first.offset - first.length));
  out.append(first.In(text));
  out.append(text.substr(second.offset + second.length));
  return out;
}

inline std::optional<std::string> RandomWordSwap(std::string_view text, Stream& rng) {
  const auto spans = WordSpans(text);
  if (spans.size() < 2) return std::nullopt;
  const std::size_t i = rng.UniformIndex(spans.size());
  std::size_t j = rng.UniformIndex(spans.size() - 1);
  if (j >= i) ++j;
  return SwapSpans(text, spans[i], spans[j]);
}

inline std::optional<std::string> ReduceContractions(std::string_view text, const LexiconStore& store,
                                                     Stream& rng) {
  std::vector<std::string> expanded;
  for (const auto& [from, to] : store.Contractions()) expanded.push_back(from);
  const auto matches = FindPhrases(text, WordSpans(text), expanded);
  if (matches.empty()) return std::nullopt;
  const Match& m = Pick(matches, rng);
  const std::string contracted = store.Contractions().at(m.value);
  return Splice(text, m.offset, m.length, unicode::MatchCase(text.substr(m.offset, m.length), contracted));
}

inline std::optional<std::string> ExpandContractions(std::string_view text, const LexiconStore& store,
                                                     Stream& rng) {
  std::vector<Match> eligible;
  for (const auto& span : WordSpans(text)) {
    const std::string key = NormalizeApostrophes(std::string(span.In(text)));
    auto it = store.Expansions().find(key);
    if (it != store.Expansions().end()) eligible.push_back({span.offset, span.length, it->second});
  }
  if (eligible.empty()) return std::nullopt;
  const Match& m = Pick(eligible, rng);
  return Splice(text, m.offset, m.length, unicode::MatchCase(text.substr(m.offset, m.length), m.value));
}

inline constexpr std::array<std::string_view, 17> kNegatableAuxiliaries = {
    "am", "is", "are", "was", "were", "do", "does", "did", "can", "could",
    "will", "would", "shall", "should", "may", "might", "must",
};

inline constexpr std::array<std::pair<std::string_view, std::string_view>, 19> kNegatedForms = {{
    {"isn't", "is"}, {"aren't", "are"}, {"wasn't", "was"}, {"weren't", "were"},
    {"don't", "do"}, {"doesn't", "does"}, {"didn't", "did"}, {"can't", "can"},
    {"cannot", "can"}, {"couldn't", "could"}, {"won't", "will"}, {"wouldn't", "would"},
    {"shouldn't", "should"}, {"haven't", "have"}, {"hasn't", "has"}, {"hadn't", "had"},
    {"mustn't", "must"}, {"mightn't", "might"}, {"ain't", "am"},
}};

inline std::optional<std::string> AddNegation(std::string_view text) {
  const auto spans = WordSpans(text);
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const std::string word = unicode::Lower(spans[i].In(text));
    if (std::find(kNegatableAuxiliaries.begin(), kNegatableAuxiliaries.end(), word) ==
        kNegatableAuxiliaries.end()) {
      continue;
    }
    if (i + 1 < spans.size() && unicode::Lower(spans[i + 1].In(text)) == "not") continue;
    return Splice(text, spans[i].offset + spans[i].length, 0, " not");
  }
  return std::nullopt;
}

inline std::optional<std::string> RemoveNegation(std::string_view text) {
  for (const auto& span : WordSpans(text)) {
    const std::string word = NormalizeApostrophes(std::string(span.In(text)));
    if (word == "not") return Remove(text, span.offset, span.length);
    for (const auto& [negated, plain] : kNegatedForms) {
      if (word == negated) {
        return Splice(text, span.offset, span.length, unicode::MatchCase(span.In(text), plain));
      }
    }
  }
  return std::nullopt;
}

inline std::optional<std::string> Append(std::string_view text, const std::vector<std::string>& pool,
                                         Stream& rng) {
  if (pool.empty()) return std::nullopt;
  std::string out(text);
  out.push_back(' ');
  out.append(Pick(pool, rng));
  return out;
}

inline std::vector<std::string> EmojiOf(const LexiconStore& store, Valence v) {
  return store.Lookup("emoji", ValenceName(v));
}

inline std::vector<Match> FindLiterals(std::string_view text, const std::vector<std::string>& needles) {
  std::vector<Match> found;
  for (const auto& needle : needles) {
    for (std::size_t pos = text.find(needle); pos != std::string_view::npos;
         pos = text.find(needle, pos + needle.size())) {
      found.push_back({pos, needle.size(), needle});
    }
  }
  std::sort(found.begin(), found.end(), [](const Match& a, const Match& b) { return a.offset < b.offset; });
  return found;
}

inline std::optional<std::string> RemoveEmoji(std::string_view text, const LexiconStore& store,
                                              Valence v, Stream& rng) {
  const auto found = FindLiterals(text, EmojiOf(store, v));
  if (found.empty()) return std::nullopt;
  const Match& m = Pick(found, rng);
  return Remove(text, m.offset, m.length);
}

inline std::optional<std::string> Emojify(std::string_view text, const LexiconStore& store, Stream& rng) {
  if (!store.HasTable("emoji_word")) return std::nullopt;
  return ReplaceFromTable(text, "emoji_word", store, rng);
}

inline std::optional<std::string> Demojify(std::string_view text, const LexiconStore& store, Stream& rng) {
  if (!store.HasTable("emoji_word")) return std::nullopt;
  std::map<std::string, std::vector<std::string>> words_for;
  for (const auto& [word, emojis] : store.Map("emoji_word")) {
    for (const auto& e : emojis) words_for[e].push_back(word);
  }
  std::vector<std::string> needles;
  for (const auto& [emoji, unused] : words_for) needles.push_back(emoji);
  const auto found = FindLiterals(text, needles);
  if (found.empty()) return std::nullopt;
  const Match& m = Pick(found, rng);
  return Splice(text, m.offset, m.length, Pick(words_for.at(m.value), rng));
}

// Code point indices of letters/digits that sit inside word spans.
inline std::vector<std::size_t> WordChars(const std::vector<unicode::CodePoint>& cps,
                                          const std::vector<WordSpan>& spans) {
  std::vector<std::size_t> out;
  std::size_t s = 0;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    while (s < spans.size() && cps[i].offset >= spans[s].offset + spans[s].length) ++s;
    if (s == spans.size()) break;
    if (cps[i].offset >= spans[s].offset && unicode::IsAlnum(cps[i].value)) out.push_back(i);
  }
  return out;
}

inline char32_t RandomLetter(Stream& rng, char32_t avoid = 0) {
  char32_t c = avoid;
  while (c == avoid) c = U'a' + static_cast<char32_t>(rng.UniformIndex(26));
  return c;
}

inline std::size_t UnitsToPerturb(std::size_t eligible, double intensity) {
  const auto n = static_cast<std::size_t>(intensity * static_cast<double>(eligible));
  return std::max<std::size_t>(1, n);
}

// One char-level typo at a random eligible position; nullopt if none.
inline std::optional<std::string> CharTypoOnce(TransformKind kind, std::string_view text,
                                               const LexiconStore& store, Stream& rng) {
  const auto cps = unicode::Decode(text);
  const auto spans = WordSpans(text);
  const auto chars = WordChars(cps, spans);
  auto same_word = [&](std::size_t a, std::size_t b) {
    for (const auto& span : spans) {
      const bool in_a = cps[a].offset >= span.offset && cps[a].offset < span.offset + span.length;
      const bool in_b = cps[b].offset >= span.offset && cps[b].offset < span.offset + span.length;
      if (in_a || in_b) return in_a && in_b;
    }
    return false;
  };
  switch (kind) {
    case TransformKind::kCharDelete: {
      if (chars.empty()) return std::nullopt;
      const std::size_t i = Pick(chars, rng);
      return Splice(text, cps[i].offset, cps[i].length, "");
    }
    case TransformKind::kCharInsert: {
      if (chars.empty()) return std::nullopt;
      const std::size_t i = Pick(chars, rng);
      return Splice(text, cps[i].offset + cps[i].length, 0, unicode::Encode(RandomLetter(rng)));
    }
    case TransformKind::kCharReplace: {
      if (chars.empty()) return std::nullopt;
      const std::size_t i = Pick(chars, rng);
      char32_t c = RandomLetter(rng, unicode::ToLower(cps[i].value));
      if (unicode::IsUpper(cps[i].value)) c = unicode::ToUpper(c);
      return ReplaceChar(text, i, unicode::Encode(c));
    }
    case TransformKind::kCharSwap: {
      std::vector<std::size_t> pairs;
      for (std::size_t k = 0; k + 1 < chars.size(); ++k) {
        if (chars[k + 1] == chars[k] + 1 && same_word(chars[k], chars[k + 1]) &&
            cps[chars[k]].value != cps[chars[k + 1]].value) {
          pairs.push_back(chars[k]);
        }
      }
      if (pairs.empty()) return std::nullopt;
      return SwapAdjacentChars(text, Pick(pairs, rng));
    }
    case TransformKind::kCharSwapQwerty: {
      std::vector<std::pair<std::size_t, std::vector<std::string>>> eligible;
      for (std::size_t i : chars) {
        auto neighbours = store.Lookup("qwerty", unicode::Encode(unicode::ToLower(cps[i].value)));
        if (!neighbours.empty()) eligible.emplace_back(i, std::move(neighbours));
      }
      if (eligible.empty()) return std::nullopt;
      const auto& [i, neighbours] = Pick(eligible, rng);
      std::string key = Pick(neighbours, rng);
      if (unicode::IsUpper(cps[i].value)) key = unicode::CapitalizeFirst(key);
      return ReplaceChar(text, i, key);
    }
    case TransformKind::kCharHomoglyph: {
      std::vector<std::pair<std::size_t, std::size_t>> eligible;  // (char, candidate count)
      for (std::size_t i : chars) {
        const auto n = store.Lookup("homoglyph", unicode::Encode(unicode::ToLower(cps[i].value))).size();
        if (n > 0) eligible.emplace_back(i, n);
      }
      if (eligible.empty()) return std::nullopt;
      const auto& [i, n] = Pick(eligible, rng);
      return SubstituteHomoglyph(text, i, store, rng.UniformIndex(n));
    }
    case TransformKind::kCharMove: {
      std::vector<std::pair<std::size_t, WordSpan>> eligible;
      for (std::size_t i : chars) {
        for (const auto& span : spans) {
          if (cps[i].offset >= span.offset && cps[i].offset < span.offset + span.length &&
              unicode::Decode(span.In(text)).size() >= 2) {
            eligible.emplace_back(i, span);
          }
        }
      }
      if (eligible.empty()) return std::nullopt;
      const auto& [i, span] = Pick(eligible, rng);
      auto word = unicode::Decode(span.In(text));
      std::vector<char32_t> letters;
      std::size_t pos = 0;
      for (std::size_t k = 0; k < word.size(); ++k) {
        letters.push_back(word[k].value);
        if (span.offset + word[k].offset == cps[i].offset) pos = k;
      }
      const auto last = static_cast<std::int64_t>(letters.size()) - 1;
      std::int64_t target = static_cast<std::int64_t>(pos);
      while (target == static_cast<std::int64_t>(pos)) {
        std::int64_t shift = rng.UniformInt(1, 3);
        if (rng.UniformIndex(2) == 0) shift = -shift;
        target = std::clamp<std::int64_t>(static_cast<std::int64_t>(pos) + shift, 0, last);
      }
      const char32_t moved = letters[pos];
      letters.erase(letters.begin() + static_cast<std::ptrdiff_t>(pos));
      letters.insert(letters.begin() + target, moved);
      std::string rebuilt;
      for (char32_t c : letters) unicode::Append(rebuilt, c);
      return Splice(text, span.offset, span.length, rebuilt);
    }
    default:
      return std::nullopt;
  }
}

inline std::optional<std::string> CharTypo(TransformKind kind, std::string_view text,
                                           const LexiconStore& store, Stream& rng, double intensity) {
  const auto eligible = WordChars(unicode::Decode(text), WordSpans(text)).size();
  if (eligible < 2) return std::nullopt;
  const std::size_t n = UnitsToPerturb(eligible, intensity);
  std::string current(text);
  bool changed = false;
  for (std::size_t k = 0; k < n; ++k) {
    auto next = CharTypoOnce(kind, current, store, rng);
    if (!next) break;
    current = std::move(*next);
    changed = true;
  }
  if (!changed) return std::nullopt;
  return current;
}

inline std::optional<std::string> WordTypo(TransformKind kind, std::string_view text,
                                           const LexiconStore& store, Stream& rng, double intensity) {
  const auto initial = WordSpans(text);
  if (initial.size() < 2) return std::nullopt;
  std::size_t n = UnitsToPerturb(initial.size(), intensity);
  if (kind == TransformKind::kWordDelete) n = std::min(n, initial.size() - 1);
  std::string current(text);
  bool changed = false;
  for (std::size_t k = 0; k < n; ++k) {
    const auto spans = WordSpans(current);
    std::optional<std::string> next;
    switch (kind) {
      case TransformKind::kWordDelete: {
        const auto& span = Pick(spans, rng);
        next = Remove(current, span.offset, span.length);
        break;
      }
      case TransformKind::kWordInsert: {
        std::vector<std::string> synonyms;
        for (const auto& span : spans) {
          for (auto& s : store.Lookup("synonym", span.In(current))) synonyms.push_back(std::move(s));
        }
        std::sort(synonyms.begin(), synonyms.end());
        synonyms.erase(std::unique(synonyms.begin(), synonyms.end()), synonyms.end());
        const auto& pool = synonyms.empty() ? store.Vocabulary() : synonyms;
        if (pool.empty()) break;
        const std::string word = Pick(pool, rng);
        const std::size_t slot = rng.UniformIndex(spans.size() + 1);
        if (slot == spans.size()) {
          const auto& last = spans.back();
          next = Splice(current, last.offset + last.length, 0, " " + word);
        } else {
          next = Splice(current, spans[slot].offset, 0, word + " ");
        }
        break;
      }
      case TransformKind::kWordReplace: {
        const auto& vocab = store.Vocabulary();
        if (vocab.empty()) break;
        const auto& span = Pick(spans, rng);
        std::string word = Pick(vocab, rng);
        if (word == unicode::Lower(span.In(current))) break;
        next = Splice(current, span.offset, span.length, unicode::MatchCase(span.In(current), word));
        break;
      }
      case TransformKind::kWordHomophone:
        next = ReplaceFromTable(current, "homophone", store, rng);
        break;
      case TransformKind::kWordSwap: {
        std::vector<std::size_t> pairs;
        for (std::size_t i = 0; i + 1 < spans.size(); ++i) {
          if (spans[i].In(current) != spans[i + 1].In(current)) pairs.push_back(i);
        }
        if (pairs.empty()) break;
        const std::size_t i = Pick(pairs, rng);
        next = SwapSpans(current, spans[i], spans[i + 1]);
        break;
      }
      default:
        break;
    }
    if (!next) continue;
    current = std::move(*next);
    changed = true;
  }
  if (!changed) return std::nullopt;
  return current;
}

}  // namespace detail

// New text for a unary transform, or nullopt when its trigger is absent.
inline std::optional<std::string> PerturbText(TransformKind kind, std::string_view text,
                                              const LexiconStore& store, Stream& rng,
                                              double typo_intensity = 0.1) {
  using K = TransformKind;
  switch (kind) {
    case K::kAntonym: return detail::ReplaceFromTable(text, "antonym", store, rng);
    case K::kSynonym: return detail::ReplaceFromTable(text, "synonym", store, rng);
    case K::kHypernym: return detail::ReplaceFromTable(text, "hypernym", store, rng);
    case K::kHyponym: return detail::ReplaceFromTable(text, "hyponym", store, rng);
    case K::kCohyponym: return detail::ReplaceFromTable(text, "cohyponym", store, rng);
    case K::kNumber: return detail::ChangeNumber(text, rng);
    case K::kLocation: return detail::ChangeListEntry(text, "location", store, rng);
    case K::kName: return detail::ChangeListEntry(text, "name", store, rng);
    case K::kRandomWordSwap: return detail::RandomWordSwap(text, rng);
    case K::kAddNegation: return detail::AddNegation(text);
    case K::kRemoveNegation: return detail::RemoveNegation(text);
    case K::kExpandContractions: return detail::ExpandContractions(text, store, rng);
    case K::kReduceContractions: return detail::ReduceContractions(text, store, rng);
    case K::kPositiveLink: return detail::Append(text, store.Lookup("link", "positive"), rng);
    case K::kNegativeLink: return detail::Append(text, store.Lookup("link", "negative"), rng);
    case K::kPositivePhrase: return detail::Append(text, store.Lookup("phrase", "positive"), rng);
    case K::kNegativePhrase: return detail::Append(text, store.Lookup("phrase", "negative"), rng);
    case K::kCharDelete:
    case K::kCharInsert:
    case K::kCharMove:
    case K::kCharHomoglyph:
    case K::kCharReplace:
    case K::kCharSwap:
    case K::kCharSwapQwerty:
      return detail::CharTypo(kind, text, store, rng, typo_intensity);
    case K::kWordDelete:
    case K::kWordInsert:
    case K::kWordReplace:
    case K::kWordHomophone:
    case K::kWordSwap:
      return detail::WordTypo(kind, text, store, rng, typo_intensity);
    case K::kEmojify: return detail::Emojify(text, store, rng);
    case K::kDemojify: return detail::Demojify(text, store, rng);
    case K::kAddNegativeEmoji: return detail::Append(text, detail::EmojiOf(store, Valence::kNegative), rng);
    case K::kAddNeutralEmoji: return detail::Append(text, detail::EmojiOf(store, Valence::kNeutral), rng);
    case K::kAddPositiveEmoji: return detail::Append(text, detail::EmojiOf(store, Valence::kPositive), rng);
    case K::kRemoveNegativeEmoji: return detail::RemoveEmoji(text, store, Valence::kNegative, rng);
    case K::kRemoveNeutralEmoji: return detail::RemoveEmoji(text, store, Valence::kNeutral, rng);
    case K::kRemovePositiveEmoji: return detail::RemoveEmoji(text, store, Valence::kPositive, rng);
    case K::kTextMix:
    case K::kSentMix:
    case K::kWordMix:
      break;
  }
  throw Error(ErrorCode::kInvalidArgument, "mixtures are not unary transforms");
}

}  // namespace perturb

// Applies a registered unary transform. INV keeps the label bit-exactly;
// SIB transmutations move it per TransmuteLabel. NotApplicable when the
// trigger is absent or the text would not change.
inline TransformOutcome ApplyUnary(std::string_view id, const TextSample& sample,
                                   const TransformContext& ctx, Stream& rng) {
  const TransformInfo& info = GetTransform(id);
  if (info.category == Category::kMixture) {
    throw Error(ErrorCode::kInvalidArgument, std::string(id) + " is a mixture; use the mixtures module");
  }
  if (sample.label.size() != ctx.task.num_classes()) {
    throw Error(ErrorCode::kDimensionMismatch, "sample label does not match task");
  }
  const Variance variance = ctx.variance.Get(id, ctx.task.kind());
  auto text = perturb::PerturbText(info.kind, sample.text, ctx.store, rng, ctx.typo_intensity);
  if (!text || *text == sample.text || text->find_first_not_of(" \t\n\r") == std::string::npos) {
    return TransformOutcome::NotApplicable();
  }
  TextSample out;
  out.text = std::move(*text);
  out.label = variance == Variance::kInv ? sample.label
                                         : TransmuteLabel(id, sample.label, ctx.task, ctx.variance);
  out.provenance = sample.provenance;
  out.provenance.emplace_back(id);
  return TransformOutcome::Produced(std::move(out));
}

enum class TypoKind {
  kCharDelete, kCharInsert, kCharReplace, kCharSwapAdjacent, kCharSwapQwerty, kCharMove,
  kCharHomoglyph, kWordDelete, kWordInsert, kWordReplace, kWordHomophone, kWordSwap,
};

inline std::string_view TypoId(TypoKind kind) {
  switch (kind) {
    case TypoKind::kCharDelete: return "typo-char-delete";
    case TypoKind::kCharInsert: return "typo-char-insert";
    case TypoKind::kCharReplace: return "typo-char-replace";
    case TypoKind::kCharSwapAdjacent: return "typo-char-swap";
    case TypoKind::kCharSwapQwerty: return "typo-char-swap-qwerty";
    case TypoKind::kCharMove: return "typo-char-move";
    case TypoKind::kCharHomoglyph: return "typo-char-homoglyph";
    case TypoKind::kWordDelete: return "typo-word-delete";
    case TypoKind::kWordInsert: return "typo-word-insert";
    case TypoKind::kWordReplace: return "typo-word-replace";
    case TypoKind::kWordHomophone: return "typo-word-homophone";
    case TypoKind::kWordSwap: return "typo-word-swap";
  }
  return "";
}

inline TransformOutcome ApplyTypo(TypoKind kind, const TextSample& sample, const TransformContext& ctx,
                                  Stream& rng) {
  if (!(ctx.typo_intensity > 0.0 && ctx.typo_intensity <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "typo intensity must be in (0, 1]");
  }
  return ApplyUnary(TypoId(kind), sample, ctx, rng);
}

enum class InsertionKind { kPositivePhrase, kNegativePhrase, kPositiveLink, kNegativeLink };

inline TransformOutcome ApplyInsertion(InsertionKind kind, const TextSample& sample,
                                       const TransformContext& ctx, Stream& rng) {
  constexpr std::array<std::string_view, 4> kIds = {"add-positive-phrase", "add-negative-phrase",
                                                    "add-positive-link", "add-negative-link"};
  return ApplyUnary(kIds[static_cast<std::size_t>(kind)], sample, ctx, rng);
}

enum class EmojiKind {
  kEmojify, kDemojify, kAddPositive, kAddNeutral, kAddNegative, kRemovePositive, kRemoveNeutral,
  kRemoveNegative,
};

inline TransformOutcome ApplyEmoji(EmojiKind kind, const TextSample& sample, const TransformContext& ctx,
                                   Stream& rng) {
  constexpr std::array<std::string_view, 8> kIds = {
      "emojify", "demojify", "add-positive-emoji", "add-neutral-emoji", "add-negative-emoji",
      "remove-positive-emoji", "remove-neutral-emoji", "remove-negative-emoji"};
  return ApplyUnary(kIds[static_cast<std::size_t>(kind)], sample, ctx, rng);
}

enum class SwapKind {
  kSynonym, kAntonym, kHypernym, kHyponym, kCohyponym, kNumber, kName, kLocation,
  kContractionExpand, kContractionReduce, kRandomWordSwap,
};

inline TransformOutcome ApplySwap(SwapKind kind, const TextSample& sample, const TransformContext& ctx,
                                  Stream& rng) {
  constexpr std::array<std::string_view, 11> kIds = {
      "change-synonym", "change-antonym", "change-hypernym", "change-hyponym", "change-cohyponym",
      "change-number", "change-name", "change-location", "expand-contractions",
      "reduce-contractions", "random-word-swap"};
  return ApplyUnary(kIds[static_cast<std::size_t>(kind)], sample, ctx, rng);
}

}  // namespace sibyl

#endif  // SIBYL_TRANSFORMS_HPP_
