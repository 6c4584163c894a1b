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

#ifndef SIBYL_EVAL_HPP_
#define SIBYL_EVAL_HPP_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <numeric>
#include <string>
#include <vector>

#include "json.hpp"
#include "sibyl/error.hpp"
#include "sibyl/label.hpp"
#include "sibyl/lexicon.hpp"
#include "sibyl/parallel.hpp"
#include "sibyl/pipeline.hpp"
#include "sibyl/random.hpp"
#include "sibyl/registry.hpp"
#include "sibyl/sample.hpp"

namespace sibyl {

// Model scores for one input; need not be normalized.
struct Prediction {
  std::vector<double> probs;
};

// Indices by descending value; ties keep the lower index first.
inline std::vector<std::size_t> RankDescending(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  return order;
}

// Rank-aligned: credits gold weight at the j-th ranked gold class when the
// j-th ranked predicted class is the same, for j = 1..k.
inline double WeightedTopK(const Prediction& pred, const SoftLabel& gold, std::size_t k) {
  if (pred.probs.size() != gold.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "prediction has " + std::to_string(pred.probs.size()) +
                                                    " scores, gold has " + std::to_string(gold.size()));
  }
  if (k == 0 || k > gold.size()) {
    throw Error(ErrorCode::kKOutOfRange, "k=" + std::to_string(k) + " with " + std::to_string(gold.size()) + " classes");
  }
  const auto g = RankDescending(gold.probs());
  const auto p = RankDescending(pred.probs);
  double score = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    if (g[j] == p[j]) score += gold[g[j]];
  }
  return score;
}

struct TestSuite {
  std::size_t suite_id = 0;
  std::vector<TextSample> tests;
};

inline double SuiteAccuracy(const TestSuite& suite, const std::vector<Prediction>& preds, std::size_t k = 1) {
  if (preds.size() != suite.tests.size()) {
    throw Error(ErrorCode::kLengthMismatch, "suite " + std::to_string(suite.suite_id) + " has " +
                                                std::to_string(suite.tests.size()) + " tests, got " +
                                                std::to_string(preds.size()) + " predictions");
  }
  if (suite.tests.empty()) throw Error(ErrorCode::kInvalidArgument, "empty suite");
  double total = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) total += WeightedTopK(preds[i], suite.tests[i].label, k);
  return total / static_cast<double>(preds.size());
}

struct SuiteReport {
  std::size_t k = 1;
  std::vector<double> suite_scores;

  double mean() const {
    if (suite_scores.empty()) return 0.0;
    return std::accumulate(suite_scores.begin(), suite_scores.end(), 0.0) /
           static_cast<double>(suite_scores.size());
  }
};

inline SuiteReport ScoreSuites(const std::vector<TestSuite>& suites, const std::vector<std::vector<Prediction>>& preds,
                               std::size_t k = 1) {
  if (suites.size() != preds.size()) throw Error(ErrorCode::kLengthMismatch, "one prediction list per suite");
  SuiteReport report;
  report.k = k;
  for (std::size_t s = 0; s < suites.size(); ++s) report.suite_scores.push_back(SuiteAccuracy(suites[s], preds[s], k));
  return report;
}

struct SuiteOptions {
  std::size_t num_suites = 100;
  std::size_t tests_per_suite = 100;
  std::size_t workers = 1;
  double typo_intensity = 0.1;
};

// Each test: a uniformly drawn record pushed through a freshly sampled
// pipeline. Mixture partners come from the whole dataset.
inline std::vector<TestSuite> GenerateSuites(const Dataset& dataset, const PipelineSpec& spec,
                                             const VarianceTable& variance, const LexiconStore& store,
                                             std::uint64_t master_seed, const SuiteOptions& options = {}) {
  if (dataset.empty()) throw Error(ErrorCode::kInvalidArgument, "dataset is empty");
  const TransformContext ctx{dataset.task, store, variance, options.typo_intensity};
  const std::size_t per = options.tests_per_suite;
  std::vector<TestSuite> suites(options.num_suites);
  for (std::size_t s = 0; s < suites.size(); ++s) {
    suites[s].suite_id = s;
    suites[s].tests.resize(per);
  }
  ParallelFor(options.num_suites * per, options.workers, [&](std::size_t flat) {
    const std::size_t s = flat / per;
    const std::size_t t = flat % per;
    Stream rng = Stream::Derive(master_seed, {stream_tag::kSuite, s, t});
    const std::size_t source = rng.UniformIndex(dataset.size());
    const auto chain = SampleTransforms(spec, variance, dataset.task, rng);
    TextSample current = dataset.samples[source];
    for (std::size_t step = 0; step < chain.size(); ++step) {
      auto outcome = ApplyStep(chain[step], current, dataset.samples, source, spec, ctx, rng.Fork(step + 1));
      current = std::move(outcome.sample);
    }
    suites[s].tests[t] = std::move(current);
  });
  return suites;
}

// ---------------------------------------------------------------------------
// Prediction files: {"probs": [floats]} per line.

inline std::vector<Prediction> ParsePredictions(std::istream& in, std::size_t num_classes,
                                                const std::string& source = "predictions") {
  std::vector<Prediction> preds;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError, where + e.what());
    }
    if (!j.is_object() || !j.contains("probs") || !j["probs"].is_array()) {
      throw Error(ErrorCode::kParseError, where + "expected {\"probs\": [...]}");
    }
    Prediction p;
    for (const auto& v : j["probs"]) {
      if (!v.is_number() || !std::isfinite(v.get<double>())) {
        throw Error(ErrorCode::kParseError, where + "scores must be finite numbers");
      }
      p.probs.push_back(v.get<double>());
    }
    if (num_classes != 0 && p.probs.size() != num_classes) {
      throw Error(ErrorCode::kDimensionMismatch, where + std::to_string(p.probs.size()) + " scores, expected " +
                                                      std::to_string(num_classes));
    }
    preds.push_back(std::move(p));
  }
  return preds;
}

inline std::vector<Prediction> PredictFile(const std::filesystem::path& path, std::size_t num_classes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return ParsePredictions(in, num_classes, path.filename().string());
}

}  // namespace sibyl

#endif  // SIBYL_EVAL_HPP_
