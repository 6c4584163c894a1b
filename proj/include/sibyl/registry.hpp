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

#ifndef SIBYL_REGISTRY_HPP_
#define SIBYL_REGISTRY_HPP_

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sibyl/error.hpp"
#include "sibyl/label.hpp"

namespace sibyl {

enum class Category { kWordSwap, kNegation, kPunctuation, kTextInsertion, kTypos, kEmojis, kMixture };

inline std::string_view CategoryName(Category c) {
  switch (c) {
    case Category::kWordSwap: return "word-swap";
    case Category::kNegation: return "negation";
    case Category::kPunctuation: return "punctuation";
    case Category::kTextInsertion: return "text-insertion";
    case Category::kTypos: return "typos";
    case Category::kEmojis: return "emojis";
    case Category::kMixture: return "mixture";
  }
  return "";
}

enum class Variance { kInv, kSibTransmutation, kSibMixture };

inline bool IsSib(Variance v) { return v != Variance::kInv; }

inline std::string_view VarianceName(Variance v) { return IsSib(v) ? "SIB" : "INV"; }

// Class a SIB transmutation moves the label to. kFlip means the opposite of
// the current dominant class.
enum class Polarity { kFlip, kPositive, kNegative };

enum class TransformKind {
  // word swap
  kAntonym, kSynonym, kHypernym, kHyponym, kCohyponym, kNumber, kLocation, kName, kRandomWordSwap,
  // negation
  kAddNegation, kRemoveNegation,
  // punctuation
  kExpandContractions, kReduceContractions,
  // text insertion
  kPositiveLink, kNegativeLink, kPositivePhrase, kNegativePhrase,
  // typos
  kCharDelete, kCharInsert, kCharMove, kCharHomoglyph, kCharReplace, kCharSwap, kCharSwapQwerty,
  kWordDelete, kWordInsert, kWordReplace, kWordHomophone, kWordSwap,
  // emoji
  kEmojify, kDemojify, kAddNegativeEmoji, kAddNeutralEmoji, kAddPositiveEmoji,
  kRemoveNegativeEmoji, kRemoveNeutralEmoji, kRemovePositiveEmoji,
  // mixtures
  kTextMix, kSentMix, kWordMix,
};

struct TransformInfo {
  std::string_view id;
  TransformKind kind;
  Category category;
  Variance sentiment;
  Variance topic;
  Polarity polarity;
};

namespace detail {
constexpr Variance INV = Variance::kInv;
constexpr Variance SIB = Variance::kSibTransmutation;
constexpr Variance MIX = Variance::kSibMixture;
using K = TransformKind;
using C = Category;
using P = Polarity;
}  // namespace detail

// Implemented transforms with their default per-task variance. Rows whose
// variance is a judgment call use the more likely assignment.
inline constexpr std::array<TransformInfo, 40> kRegistry = {{
    {"change-antonym", detail::K::kAntonym, detail::C::kWordSwap, detail::SIB, detail::INV, detail::P::kFlip},
    {"change-cohyponym", detail::K::kCohyponym, detail::C::kWordSwap, detail::INV, detail::INV, detail::P::kFlip},
    {"change-hypernym", detail::K::kHypernym, detail::C::kWordSwap, detail::INV, detail::INV, detail::P::kFlip},
    {"change-hyponym", detail::K::kHyponym, detail::C::kWordSwap, detail::INV, detail::INV, detail::P::kFlip},
    {"change-synonym", detail::K::kSynonym, detail::C::kWordSwap, detail::INV, detail::INV, detail::P::kFlip},
    {"change-number", detail::K::kNumber, detail::C::kWordSwap, detail::INV, detail::INV, detail::P::kFlip},
    {"change-location", detail::K::kLocation, detail::C::kWordSwap, detail::INV, detail::INV, detail::P::kFlip},
    {"change-name", detail::K::kName, detail::C::kWordSwap, detail::INV, detail::INV, detail::P::kFlip},
    {"random-word-swap", detail::K::kRandomWordSwap, detail::C::kWordSwap, detail::INV, detail::INV, detail::P::kFlip},
    {"add-negation", detail::K::kAddNegation, detail::C::kNegation, detail::INV, detail::INV, detail::P::kFlip},
    {"remove-negation", detail::K::kRemoveNegation, detail::C::kNegation, detail::INV, detail::INV, detail::P::kFlip},
    {"expand-contractions", detail::K::kExpandContractions, detail::C::kPunctuation, detail::INV, detail::INV, detail::P::kFlip},
    {"reduce-contractions", detail::K::kReduceContractions, detail::C::kPunctuation, detail::INV, detail::INV, detail::P::kFlip},
    {"add-negative-link", detail::K::kNegativeLink, detail::C::kTextInsertion, detail::SIB, detail::INV, detail::P::kNegative},
    {"add-positive-link", detail::K::kPositiveLink, detail::C::kTextInsertion, detail::SIB, detail::INV, detail::P::kPositive},
    {"add-negative-phrase", detail::K::kNegativePhrase, detail::C::kTextInsertion, detail::SIB, detail::INV, detail::P::kNegative},
    {"add-positive-phrase", detail::K::kPositivePhrase, detail::C::kTextInsertion, detail::SIB, detail::INV, detail::P::kPositive},
    {"typo-char-delete", detail::K::kCharDelete, detail::C::kTypos, detail::INV, detail::INV, detail::P::kFlip},
    {"typo-char-insert", detail::K::kCharInsert, detail::C::kTypos, detail::INV, detail::INV, detail::P::kFlip},
    {"typo-char-move", detail::K::kCharMove, detail::C::kTypos, detail::INV, detail::INV, detail::P::kFlip},
    {"typo-char-homoglyph", detail::K::kCharHomoglyph, detail::C::kTypos, detail::INV, detail::INV, detail::P::kFlip},
    {"typo-char-replace", detail::K::kCharReplace, detail::C::kTypos, detail::INV, detail::INV, detail::P::kFlip},
    {"typo-char-swap", detail::K::kCharSwap, detail::C::kTypos, detail::INV, detail::INV, detail::P::kFlip},
    {"typo-char-swap-qwerty", detail::K::kCharSwapQwerty, detail::C::kTypos, detail::INV, detail::INV, detail::P::kFlip},
    {"typo-word-delete", detail::K::kWordDelete, detail::C::kTypos, detail::INV, detail::INV, detail::P::kFlip},
    {"typo-word-insert", detail::K::kWordInsert, detail::C::kTypos, detail::INV, detail::INV, detail::P::kFlip},
    {"typo-word-replace", detail::K::kWordReplace, detail::C::kTypos, detail::INV, detail::INV, detail::P::kFlip},
    {"typo-word-homophone", detail::K::kWordHomophone, detail::C::kTypos, detail::INV, detail::INV, detail::P::kFlip},
    {"typo-word-swap", detail::K::kWordSwap, detail::C::kTypos, detail::INV, detail::INV, detail::P::kFlip},
    {"emojify", detail::K::kEmojify, detail::C::kEmojis, detail::INV, detail::INV, detail::P::kFlip},
    {"demojify", detail::K::kDemojify, detail::C::kEmojis, detail::INV, detail::INV, detail::P::kFlip},
    {"add-negative-emoji", detail::K::kAddNegativeEmoji, detail::C::kEmojis, detail::SIB, detail::INV, detail::P::kNegative},
    {"add-neutral-emoji", detail::K::kAddNeutralEmoji, detail::C::kEmojis, detail::INV, detail::INV, detail::P::kFlip},
    {"add-positive-emoji", detail::K::kAddPositiveEmoji, detail::C::kEmojis, detail::SIB, detail::INV, detail::P::kPositive},
    {"remove-negative-emoji", detail::K::kRemoveNegativeEmoji, detail::C::kEmojis, detail::SIB, detail::INV, detail::P::kPositive},
    {"remove-neutral-emoji", detail::K::kRemoveNeutralEmoji, detail::C::kEmojis, detail::INV, detail::INV, detail::P::kFlip},
    {"remove-positive-emoji", detail::K::kRemovePositiveEmoji, detail::C::kEmojis, detail::SIB, detail::INV, detail::P::kNegative},
    {"textmix", detail::K::kTextMix, detail::C::kMixture, detail::MIX, detail::MIX, detail::P::kFlip},
    {"sentmix", detail::K::kSentMix, detail::C::kMixture, detail::MIX, detail::MIX, detail::P::kFlip},
    {"wordmix", detail::K::kWordMix, detail::C::kMixture, detail::MIX, detail::MIX, detail::P::kFlip},
}};

inline const TransformInfo* FindTransform(std::string_view id) {
  auto it = std::find_if(kRegistry.begin(), kRegistry.end(),
                         [&](const TransformInfo& t) { return t.id == id; });
  return it == kRegistry.end() ? nullptr : &*it;
}

inline const TransformInfo& GetTransform(std::string_view id) {
  if (const TransformInfo* info = FindTransform(id)) return *info;
  throw Error(ErrorCode::kUnknownTransform, "'" + std::string(id) + "'");
}

inline bool IsMixture(std::string_view id) {
  return GetTransform(id).category == Category::kMixture;
}

// (transform, task) -> variance. Starts from the registry defaults; an
// override file may reassign unary transforms between INV and SIB.
class VarianceTable {
 public:
  static VarianceTable Defaults() {
    VarianceTable table;
    for (const auto& t : kRegistry) {
      table.entries_[{std::string(t.id), TaskKind::kSentiment}] = t.sentiment;
      table.entries_[{std::string(t.id), TaskKind::kTopic}] = t.topic;
    }
    return table;
  }

  Variance Get(std::string_view id, TaskKind task) const {
    auto it = entries_.find({std::string(id), task});
    if (it == entries_.end()) throw Error(ErrorCode::kUnknownTransform, "'" + std::string(id) + "'");
    return it->second;
  }

  void Set(std::string_view id, TaskKind task, Variance v) {
    const TransformInfo& info = GetTransform(id);
    const bool mixture = info.category == Category::kMixture;
    if (mixture != (v == Variance::kSibMixture)) {
      throw Error(ErrorCode::kInvalidOverride,
                  std::string(id) + ": mixtures are always SIB and unary transforms cannot be mixtures");
    }
    entries_[{std::string(id), task}] = v;
  }

  // TSV lines: transform_id<TAB>task<TAB>variance, task in {sentiment, topic},
  // variance in {INV, SIB}.
  void ApplyOverrides(std::istream& in, const std::string& source = "overrides") {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line[0] == '#') continue;
      const auto where = source + ":" + std::to_string(line_no) + ": ";
      std::istringstream fields(line);
      std::string id;
      std::string task;
      std::string variance;
      std::string extra;
      if (!std::getline(fields, id, '\t') || !std::getline(fields, task, '\t') ||
          !std::getline(fields, variance, '\t') || std::getline(fields, extra, '\t')) {
        throw Error(ErrorCode::kInvalidOverride, where + "expected id<TAB>task<TAB>variance");
      }
      TaskKind kind;
      if (task == "sentiment") {
        kind = TaskKind::kSentiment;
      } else if (task == "topic") {
        kind = TaskKind::kTopic;
      } else {
        throw Error(ErrorCode::kInvalidOverride, where + "unknown task '" + task + "'");
      }
      if (FindTransform(id) == nullptr) {
        throw Error(ErrorCode::kUnknownTransform, where + "'" + id + "'");
      }
      Variance v;
      if (variance == "INV") {
        v = Variance::kInv;
      } else if (variance == "SIB") {
        v = IsMixture(id) ? Variance::kSibMixture : Variance::kSibTransmutation;
      } else {
        throw Error(ErrorCode::kInvalidOverride, where + "variance must be INV or SIB");
      }
      Set(id, kind, v);
    }
  }

  static VarianceTable FromFile(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::kInvalidOverride, "cannot open " + path.string());
    VarianceTable table = Defaults();
    table.ApplyOverrides(in, path.filename().string());
    return table;
  }

  // Registry-ordered ids with the given variance class for a task.
  std::vector<std::string_view> Ids(TaskKind task, bool sib) const {
    std::vector<std::string_view> out;
    for (const auto& t : kRegistry) {
      if (IsSib(Get(t.id, task)) == sib) out.push_back(t.id);
    }
    return out;
  }

  // id<TAB>category<TAB>sentiment_variance<TAB>topic_variance
  std::string Manifest() const {
    std::string out;
    for (const auto& t : kRegistry) {
      out.append(t.id);
      out.push_back('\t');
      out.append(CategoryName(t.category));
      out.push_back('\t');
      out.append(VarianceName(Get(t.id, TaskKind::kSentiment)));
      out.push_back('\t');
      out.append(VarianceName(Get(t.id, TaskKind::kTopic)));
      out.push_back('\n');
    }
    return out;
  }

 private:
  std::map<std::pair<std::string, TaskKind>, Variance> entries_;
};

}  // namespace sibyl

#endif  // SIBYL_REGISTRY_HPP_
