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

#ifndef SIBYL_ADAPTIVE_HPP_
#define SIBYL_ADAPTIVE_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sibyl/error.hpp"
#include "sibyl/label.hpp"
#include "sibyl/mixtures.hpp"
#include "sibyl/parallel.hpp"
#include "sibyl/random.hpp"
#include "sibyl/sample.hpp"
#include "sibyl/text.hpp"

namespace sibyl {

// counts[gold][pred].
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t num_classes)
      : classes_(num_classes), counts_(num_classes, std::vector<std::uint64_t>(num_classes, 0)) {
    for (std::size_t i = 0; i < num_classes; ++i) classes_[i] = std::to_string(i);
  }
  explicit ConfusionMatrix(const TaskSpec& task)
      : classes_(task.class_names()),
        counts_(task.num_classes(), std::vector<std::uint64_t>(task.num_classes(), 0)) {}

  std::size_t size() const { return counts_.size(); }
  const std::vector<std::string>& classes() const { return classes_; }
  std::uint64_t at(std::size_t gold, std::size_t pred) const { return counts_.at(gold).at(pred); }

  void Update(std::size_t gold, std::size_t pred) {
    if (gold >= size() || pred >= size()) {
      throw Error(ErrorCode::kIndexOutOfRange, "class index (" + std::to_string(gold) + ", " +
                                                   std::to_string(pred) + ") outside " +
                                                   std::to_string(size()) + " classes");
    }
    ++counts_[gold][pred];
  }

  void Set(std::size_t gold, std::size_t pred, std::uint64_t count) {
    if (gold >= size() || pred >= size()) throw Error(ErrorCode::kIndexOutOfRange, "class index out of range");
    counts_[gold][pred] = count;
  }

  // Gold class is the label argmax.
  void Update(const SoftLabel& gold, const SoftLabel& pred) { Update(gold.ArgMax(), pred.ArgMax()); }

  // {"classes": [...], "counts": [[...], ...]}
  std::string ToJson() const {
    nlohmann::json j;
    j["classes"] = classes_;
    j["counts"] = counts_;
    return j.dump();
  }

  static ConfusionMatrix FromJson(std::string_view text) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError, std::string("confusion snapshot: ") + e.what());
    }
    if (!j.is_object() || !j.contains("counts") || !j["counts"].is_array()) {
      throw Error(ErrorCode::kParseError, "confusion snapshot needs a \"counts\" array");
    }
    const auto& rows = j["counts"];
    ConfusionMatrix cm(rows.size());
    if (j.contains("classes")) {
      const auto& names = j["classes"];
      if (!names.is_array() || names.size() != rows.size()) {
        throw Error(ErrorCode::kShapeMismatch, "\"classes\" must list one name per row");
      }
      for (std::size_t i = 0; i < names.size(); ++i) {
        cm.classes_[i] = names[i].is_string() ? names[i].get<std::string>() : names[i].dump();
      }
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!rows[i].is_array() || rows[i].size() != rows.size()) {
        throw Error(ErrorCode::kShapeMismatch, "confusion matrix must be square");
      }
      for (std::size_t k = 0; k < rows.size(); ++k) {
        if (!rows[i][k].is_number_unsigned() && !(rows[i][k].is_number_integer() && rows[i][k].get<std::int64_t>() >= 0)) {
          throw Error(ErrorCode::kParseError, "counts must be non-negative integers");
        }
        cm.counts_[i][k] = rows[i][k].get<std::uint64_t>();
      }
    }
    return cm;
  }

  static ConfusionMatrix Load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return FromJson(buf.str());
  }

 private:
  std::vector<std::string> classes_;
  std::vector<std::vector<std::uint64_t>> counts_;
};

using ClassPair = std::pair<std::size_t, std::size_t>;

// Largest off-diagonal counts[i][j]; ties go to the smallest (i, j). With
// `symmetric`, scores counts[i][j] + counts[j][i] over i < j.
inline ClassPair MostConfusedPair(const ConfusionMatrix& cm, bool symmetric = false) {
  ClassPair best{0, 0};
  std::uint64_t best_count = 0;
  for (std::size_t i = 0; i < cm.size(); ++i) {
    for (std::size_t j = 0; j < cm.size(); ++j) {
      if (i == j || (symmetric && j < i)) continue;
      const std::uint64_t c = symmetric ? cm.at(i, j) + cm.at(j, i) : cm.at(i, j);
      if (c > best_count) {
        best_count = c;
        best = {i, j};
      }
    }
  }
  if (best_count == 0) throw Error(ErrorCode::kNoConfusion, "no off-diagonal counts");
  return best;
}

struct AdaptivePlan {
  ClassPair pair;
  std::string mix_kind = "textmix";
  std::size_t per_batch_count = 4;

  void Validate(std::size_t num_classes) const {
    if (pair.first == pair.second) throw Error(ErrorCode::kInvalidArgument, "plan pair must name two classes");
    if (pair.first >= num_classes || pair.second >= num_classes) {
      throw Error(ErrorCode::kIndexOutOfRange, "plan pair outside the task's classes");
    }
    if (mix_kind != "textmix" && mix_kind != "sentmix" && mix_kind != "wordmix") {
      throw Error(ErrorCode::kInvalidArgument, "mix kind must be textmix, sentmix or wordmix");
    }
  }
};

// Samples per class (label argmax). Samples without any word are left out,
// since they cannot be a mixture constituent.
using ClassPools = std::vector<std::vector<TextSample>>;

inline ClassPools GroupByClass(const std::vector<TextSample>& samples, std::size_t num_classes) {
  ClassPools pools(num_classes);
  for (const auto& s : samples) {
    if (s.label.size() != num_classes) {
      throw Error(ErrorCode::kLabelDimensionMismatch, "sample label does not match the class count");
    }
    if (WordCount(s.text) == 0) continue;
    pools[s.label.ArgMax()].push_back(s);
  }
  return pools;
}

inline std::vector<TextSample> AdaptiveBatch(const ClassPools& pools, const AdaptivePlan& plan, Stream& rng) {
  plan.Validate(pools.size());
  for (std::size_t c : {plan.pair.first, plan.pair.second}) {
    if (pools[c].empty()) throw Error(ErrorCode::kEmptyClassPool, "class " + std::to_string(c) + " has no samples");
  }
  const auto& left = pools[plan.pair.first];
  const auto& right = pools[plan.pair.second];
  std::vector<TextSample> out;
  out.reserve(plan.per_batch_count);
  for (std::size_t k = 0; k < plan.per_batch_count; ++k) {
    Stream item = rng.Fork(k);
    const auto& a = left[item.UniformIndex(left.size())];
    const auto& b = right[item.UniformIndex(right.size())];
    out.push_back(MixText(plan.mix_kind, a, b, item));
  }
  rng = rng.Fork(plan.per_batch_count);
  return out;
}

struct CycleResult {
  std::vector<std::vector<TextSample>> batches;
  std::vector<ClassPair> pairs;  // pair used by each batch
  bool fallback = false;         // snapshot had no confusion
};

// One evaluation cycle. The pair is fixed from the snapshot; a snapshot with
// no confusion draws a uniform unordered pair per batch instead.
inline CycleResult RunCycle(const ConfusionMatrix& snapshot, const ClassPools& pools, const std::string& mix_kind,
                            std::size_t per_batch_count, std::size_t num_batches, std::uint64_t seed,
                            bool symmetric = false, std::size_t workers = 1) {
  if (snapshot.size() != pools.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "snapshot has " + std::to_string(snapshot.size()) +
                                                    " classes, pool has " + std::to_string(pools.size()));
  }
  if (pools.size() < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two classes");
  CycleResult result;
  result.batches.resize(num_batches);
  result.pairs.resize(num_batches);
  ClassPair fixed{0, 0};
  try {
    fixed = MostConfusedPair(snapshot, symmetric);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoConfusion) throw;
    result.fallback = true;
  }
  const std::size_t n = pools.size();
  for (std::size_t b = 0; b < num_batches; ++b) {
    if (!result.fallback) {
      result.pairs[b] = fixed;
      continue;
    }
    Stream rng = Stream::Derive(seed, {stream_tag::kAdaptive, b, 0});
    // Unordered pairs {i < j} indexed 0..n(n-1)/2 - 1.
    std::size_t index = rng.UniformIndex(n * (n - 1) / 2);
    std::size_t i = 0;
    while (index >= n - 1 - i) {
      index -= n - 1 - i;
      ++i;
    }
    result.pairs[b] = {i, i + 1 + index};
  }
  ParallelFor(num_batches, workers, [&](std::size_t b) {
    Stream rng = Stream::Derive(seed, {stream_tag::kAdaptive, b, 1});
    result.batches[b] = AdaptiveBatch(pools, AdaptivePlan{result.pairs[b], mix_kind, per_batch_count}, rng);
  });
  return result;
}

}  // namespace sibyl

#endif  // SIBYL_ADAPTIVE_HPP_
