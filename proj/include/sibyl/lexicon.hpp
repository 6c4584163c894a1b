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

#ifndef SIBYL_LEXICON_HPP_
#define SIBYL_LEXICON_HPP_

#include <algorithm>
#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sibyl/error.hpp"
#include "sibyl/unicode.hpp"

#ifndef SIBYL_DEFAULT_LEXICON_DIR
#define SIBYL_DEFAULT_LEXICON_DIR "data/lexicon"
#endif

namespace sibyl {

enum class Valence { kPositive, kNeutral, kNegative };

inline std::string_view ValenceName(Valence v) {
  switch (v) {
    case Valence::kPositive: return "positive";
    case Valence::kNeutral: return "neutral";
    case Valence::kNegative: return "negative";
  }
  return "neutral";
}

inline std::optional<Valence> ParseValence(std::string_view s) {
  if (s == "positive") return Valence::kPositive;
  if (s == "neutral") return Valence::kNeutral;
  if (s == "negative") return Valence::kNegative;
  return std::nullopt;
}

enum class TableFormat {
  kWordMap,      // key<TAB>cand1<TAB>cand2...
  kPhrasePair,   // expanded<TAB>contracted
  kCharMap,      // char<TAB>char1<TAB>char2...
  kValenceList,  // string<TAB>valence
  kLinkList,     // url<TAB>display_text<TAB>valence
  kPlainList,    // string
};

struct TableDef {
  std::string_view name;
  TableFormat format;
  bool required;
};

inline constexpr std::array<TableDef, 15> kTables = {{
    {"synonym", TableFormat::kWordMap, true},
    {"antonym", TableFormat::kWordMap, true},
    {"hypernym", TableFormat::kWordMap, true},
    {"hyponym", TableFormat::kWordMap, true},
    {"homophone", TableFormat::kWordMap, true},
    {"contraction", TableFormat::kPhrasePair, true},
    {"qwerty", TableFormat::kCharMap, true},
    {"homoglyph", TableFormat::kCharMap, true},
    {"emoji", TableFormat::kValenceList, true},
    {"phrase", TableFormat::kValenceList, true},
    {"link", TableFormat::kLinkList, true},
    {"name", TableFormat::kPlainList, true},
    {"location", TableFormat::kPlainList, true},
    {"cohyponym", TableFormat::kWordMap, false},
    {"emoji_word", TableFormat::kWordMap, false},
}};

struct ValencedText {
  std::string text;
  Valence valence;
};

struct Link {
  std::string url;
  std::string display_text;
  Valence valence;
};

// SIBYL_LEXICON_DIR, else the directory packaged with the build.
inline std::filesystem::path DefaultLexiconDir() {
  if (const char* env = std::getenv("SIBYL_LEXICON_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return SIBYL_DEFAULT_LEXICON_DIR;
}

// Word lists and maps consumed by the unary transforms. Immutable after Load.
class LexiconStore {
 public:
  static LexiconStore Load(const std::filesystem::path& dir);

  static LexiconStore LoadDefault() { return Load(DefaultLexiconDir()); }

  bool HasTable(std::string_view name) const {
    return std::any_of(counts_.begin(), counts_.end(),
                       [&](const auto& entry) { return entry.first == name; });
  }

  // Sorted candidate list. Map tables: case-insensitive key. Valence tables:
  // key is a valence name. Plain lists: the canonical entry if present.
  std::vector<std::string> Lookup(std::string_view table, std::string_view key) const {
    const TableDef& def = Def(table);
    if (!HasTable(table)) {
      throw Error(ErrorCode::kUnknownTable, "table '" + std::string(table) + "' not loaded");
    }
    const std::string lowered = unicode::Lower(key);
    switch (def.format) {
      case TableFormat::kWordMap:
      case TableFormat::kCharMap: {
        const auto& map = maps_.at(std::string(table));
        auto it = map.find(lowered);
        return it == map.end() ? std::vector<std::string>{} : it->second;
      }
      case TableFormat::kPhrasePair: {
        auto it = contract_.find(lowered);
        if (it != contract_.end()) return {it->second};
        auto jt = expand_.find(lowered);
        return jt == expand_.end() ? std::vector<std::string>{} : std::vector<std::string>{jt->second};
      }
      case TableFormat::kValenceList:
      case TableFormat::kLinkList: {
        const auto valence = ParseValence(lowered);
        if (!valence) return {};
        std::vector<std::string> out;
        if (def.format == TableFormat::kLinkList) {
          for (const auto& link : links_) {
            if (link.valence == *valence) out.push_back(link.url);
          }
        } else {
          for (const auto& entry : valenced_.at(std::string(table))) {
            if (entry.valence == *valence) out.push_back(entry.text);
          }
        }
        std::sort(out.begin(), out.end());
        return out;
      }
      case TableFormat::kPlainList: {
        const auto& index = plain_index_.at(std::string(table));
        auto it = index.find(lowered);
        return it == index.end() ? std::vector<std::string>{} : std::vector<std::string>{it->second};
      }
    }
    return {};
  }

  const std::vector<ValencedText>& Valenced(std::string_view table) const {
    return valenced_.at(std::string(table));
  }
  const std::vector<Link>& Links() const { return links_; }
  const std::vector<std::string>& PlainList(std::string_view table) const {
    return plain_.at(std::string(table));
  }
  // expanded -> contracted, lowercase.
  const std::map<std::string, std::string>& Contractions() const { return contract_; }
  // contracted -> expanded, lowercase.
  const std::map<std::string, std::string>& Expansions() const { return expand_; }
  const std::map<std::string, std::vector<std::string>>& Map(std::string_view table) const {
    auto it = maps_.find(std::string(table));
    if (it == maps_.end()) {
      static const std::map<std::string, std::vector<std::string>> kEmpty;
      return kEmpty;
    }
    return it->second;
  }

  // Sorted keys of the synonym table; the replacement vocabulary for word
  // insertion/replacement typos.
  const std::vector<std::string>& Vocabulary() const { return vocabulary_; }

  // (table, entry count) in load order.
  const std::vector<std::pair<std::string, std::size_t>>& Summary() const { return counts_; }

  std::string SerializeSummary() const {
    std::ostringstream out;
    for (const auto& [name, count] : counts_) out << name << '\t' << count << '\n';
    return out.str();
  }

  static const TableDef& Def(std::string_view table) {
    for (const auto& def : kTables) {
      if (def.name == table) return def;
    }
    throw Error(ErrorCode::kUnknownTable, "unknown table '" + std::string(table) + "'");
  }

 private:
  void LoadTable(const TableDef& def, const std::filesystem::path& file);

  std::map<std::string, std::map<std::string, std::vector<std::string>>> maps_;
  std::map<std::string, std::vector<ValencedText>> valenced_;
  std::vector<Link> links_;
  std::map<std::string, std::vector<std::string>> plain_;
  std::map<std::string, std::map<std::string, std::string>> plain_index_;
  std::map<std::string, std::string> contract_;
  std::map<std::string, std::string> expand_;
  std::vector<std::string> vocabulary_;
  std::vector<std::pair<std::string, std::size_t>> counts_;
};

namespace detail {

inline std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

[[noreturn]] inline void Malformed(const std::filesystem::path& file, std::size_t line_no,
                                   const std::string& why) {
  throw Error(ErrorCode::kMalformedLine,
              file.filename().string() + ":" + std::to_string(line_no) + ": " + why);
}

}  // namespace detail

inline void LexiconStore::LoadTable(const TableDef& def, const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingTable, std::string(def.name));
  const std::string table(def.name);
  std::size_t entries = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.find('\r') != std::string::npos) detail::Malformed(file, line_no, "CR line ending");
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) detail::Malformed(file, line_no, "byte order mark");
    if (!unicode::IsValidUtf8(line)) detail::Malformed(file, line_no, "invalid UTF-8");
    const auto fields = detail::SplitTabs(line);
    if (std::any_of(fields.begin(), fields.end(), [](const std::string& f) { return f.empty(); })) {
      detail::Malformed(file, line_no, "empty field");
    }
    switch (def.format) {
      case TableFormat::kWordMap:
      case TableFormat::kCharMap: {
        if (fields.size() < 2) detail::Malformed(file, line_no, "expected key and candidates");
        const std::string key = unicode::Lower(fields[0]);
        if (def.format == TableFormat::kCharMap && unicode::Decode(key).size() != 1) {
          detail::Malformed(file, line_no, "key must be a single character");
        }
        auto& candidates = maps_[table][key];
        for (std::size_t i = 1; i < fields.size(); ++i) {
          if (unicode::Lower(fields[i]) == key) detail::Malformed(file, line_no, "candidate equals key");
          candidates.push_back(fields[i]);
        }
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
        break;
      }
      case TableFormat::kPhrasePair: {
        if (fields.size() != 2) detail::Malformed(file, line_no, "expected expanded<TAB>contracted");
        const std::string expanded = unicode::Lower(fields[0]);
        const std::string contracted = unicode::Lower(fields[1]);
        contract_[expanded] = contracted;
        expand_.emplace(contracted, expanded);
        break;
      }
      case TableFormat::kValenceList: {
        if (fields.size() != 2) detail::Malformed(file, line_no, "expected string<TAB>valence");
        const auto valence = ParseValence(fields[1]);
        if (!valence) detail::Malformed(file, line_no, "unknown valence '" + fields[1] + "'");
        valenced_[table].push_back({fields[0], *valence});
        break;
      }
      case TableFormat::kLinkList: {
        if (fields.size() != 3) detail::Malformed(file, line_no, "expected url<TAB>display_text<TAB>valence");
        const auto valence = ParseValence(fields[2]);
        if (!valence) detail::Malformed(file, line_no, "unknown valence '" + fields[2] + "'");
        links_.push_back({fields[0], fields[1], *valence});
        break;
      }
      case TableFormat::kPlainList: {
        if (fields.size() != 1) detail::Malformed(file, line_no, "expected one entry per line");
        plain_[table].push_back(fields[0]);
        plain_index_[table].emplace(unicode::Lower(fields[0]), fields[0]);
        break;
      }
    }
    ++entries;
  }
  if (entries == 0) throw Error(ErrorCode::kMissingTable, table + " (empty)");
  if (def.format == TableFormat::kWordMap || def.format == TableFormat::kCharMap) {
    entries = maps_[table].size();
  }
  counts_.emplace_back(table, entries);
}

inline LexiconStore LexiconStore::Load(const std::filesystem::path& dir) {
  LexiconStore store;
  for (const auto& def : kTables) {
    const auto file = dir / (std::string(def.name) + ".tsv");
    if (!std::filesystem::exists(file)) {
      if (def.required) throw Error(ErrorCode::kMissingTable, std::string(def.name));
      continue;
    }
    store.LoadTable(def, file);
  }
  const auto& antonym = store.maps_["antonym"];
  for (const auto& [word, antonyms] : antonym) {
    for (const auto& other : antonyms) {
      auto back = antonym.find(unicode::Lower(other));
      if (back == antonym.end() ||
          std::find_if(back->second.begin(), back->second.end(), [&](const std::string& b) {
            return unicode::Lower(b) == word;
          }) == back->second.end()) {
        throw Error(ErrorCode::kAsymmetricAntonym, word + " -> " + other + " has no inverse");
      }
    }
  }
  for (const auto& [word, unused] : store.maps_["synonym"]) store.vocabulary_.push_back(word);
  return store;
}

}  // namespace sibyl

#endif  // SIBYL_LEXICON_HPP_
