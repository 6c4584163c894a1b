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

#ifndef SIBYL_PIPELINE_HPP_
#define SIBYL_PIPELINE_HPP_

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sibyl/error.hpp"
#include "sibyl/label.hpp"
#include "sibyl/lexicon.hpp"
#include "sibyl/mixtures.hpp"
#include "sibyl/parallel.hpp"
#include "sibyl/random.hpp"
#include "sibyl/registry.hpp"
#include "sibyl/sample.hpp"
#include "sibyl/transforms.hpp"

namespace sibyl {

struct Dataset {
  TaskSpec task;
  std::vector<TextSample> samples;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
};

// ---------------------------------------------------------------------------
// JSONL persistence

namespace detail {

[[noreturn]] inline void LineError(ErrorCode code, const std::string& source, std::size_t line_no,
                                   const std::string& what) {
  throw Error(code, source + ":" + std::to_string(line_no) + ": " + what);
}

inline SoftLabel ParseLabel(const nlohmann::json& value, const TaskSpec& task, const std::string& source,
                            std::size_t line_no) {
  const std::size_t n = task.num_classes();
  if (value.is_number_integer()) {
    const auto index = value.get<std::int64_t>();
    if (index < 0 || static_cast<std::size_t>(index) >= n) {
      LineError(ErrorCode::kLabelDimensionMismatch, source, line_no,
                "class index " + std::to_string(index) + " outside " + std::to_string(n) + " classes");
    }
    return SoftLabel::OneHot(n, static_cast<std::size_t>(index));
  }
  if (!value.is_array()) LineError(ErrorCode::kParseError, source, line_no, "label must be an index or array");
  if (value.size() != n) {
    LineError(ErrorCode::kLabelDimensionMismatch, source, line_no,
              "label has " + std::to_string(value.size()) + " entries, task has " + std::to_string(n));
  }
  std::vector<double> probs;
  for (const auto& p : value) {
    if (!p.is_number()) LineError(ErrorCode::kParseError, source, line_no, "label entries must be numbers");
    probs.push_back(p.get<double>());
  }
  try {
    return SoftLabel::FromProbs(std::move(probs));
  } catch (const Error& e) {
    LineError(ErrorCode::kParseError, source, line_no, e.what());
  }
}

inline std::string FormatDouble(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace detail

// One JSON object per line: {"text": str, "label": index | [probs],
// "provenance": [ids] (optional)}.
inline Dataset Ingest(std::istream& in, const TaskSpec& task, const std::string& source = "input") {
  Dataset dataset{task, {}};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      detail::LineError(ErrorCode::kParseError, source, line_no, e.what());
    }
    if (!record.is_object() || !record.contains("text") || !record["text"].is_string() ||
        !record.contains("label")) {
      detail::LineError(ErrorCode::kParseError, source, line_no, "expected {\"text\": str, \"label\": ...}");
    }
    TextSample sample;
    sample.text = record["text"].get<std::string>();
    if (sample.text.find_first_not_of(" \t\r\n") == std::string::npos) {
      detail::LineError(ErrorCode::kEmptyText, source, line_no, "empty text");
    }
    sample.label = detail::ParseLabel(record["label"], task, source, line_no);
    if (record.contains("provenance")) {
      const auto& prov = record["provenance"];
      if (!prov.is_array()) detail::LineError(ErrorCode::kParseError, source, line_no, "provenance must be an array");
      for (const auto& id : prov) {
        if (!id.is_string()) detail::LineError(ErrorCode::kParseError, source, line_no, "provenance ids are strings");
        sample.provenance.push_back(id.get<std::string>());
      }
    }
    dataset.samples.push_back(std::move(sample));
  }
  return dataset;
}

inline Dataset Ingest(const std::filesystem::path& path, const TaskSpec& task) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return Ingest(in, task, path.filename().string());
}

inline std::string FormatRecord(const TextSample& sample) {
  std::string out = "{\"text\":";
  out += nlohmann::json(sample.text).dump();
  out += ",\"label\":[";
  for (std::size_t i = 0; i < sample.label.size(); ++i) {
    if (i > 0) out.push_back(',');
    out += detail::FormatDouble(sample.label[i]);
  }
  out += "],\"provenance\":[";
  for (std::size_t i = 0; i < sample.provenance.size(); ++i) {
    if (i > 0) out.push_back(',');
    out += nlohmann::json(sample.provenance[i]).dump();
  }
  out += "]}";
  return out;
}

inline void Persist(const std::vector<TextSample>& samples, std::ostream& out) {
  for (const auto& sample : samples) out << FormatRecord(sample) << '\n';
}

inline std::string PersistToString(const std::vector<TextSample>& samples) {
  std::ostringstream out;
  Persist(samples, out);
  return out.str();
}

// Writes to a sibling temp file and renames it into place.
inline void WriteFileAtomically(const std::filesystem::path& path, std::string_view contents) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp);
      throw Error(ErrorCode::kIoError, "write failed for " + tmp);
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorCode::kIoError, "cannot rename to " + path.string() + ": " + ec.message());
  }
}

inline void Persist(const Dataset& dataset, const std::filesystem::path& path) {
  WriteFileAtomically(path, PersistToString(dataset.samples));
}

// First `per_class` samples of each class (by argmax), input order kept.
inline Dataset BalancedSubset(const Dataset& dataset, std::size_t per_class) {
  Dataset out{dataset.task, {}};
  std::vector<std::size_t> taken(dataset.task.num_classes(), 0);
  for (const auto& sample : dataset.samples) {
    const std::size_t c = sample.label.ArgMax();
    if (taken[c] < per_class) {
      ++taken[c];
      out.samples.push_back(sample);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Transformation pipelines

enum class PipelineKind { kOrig, kInv, kSib, kInvSib, kSingle };

struct PipelineSpec {
  PipelineKind kind = PipelineKind::kOrig;
  std::string single_id;  // kSingle only
  std::size_t multiplier = 30;
  bool retain_original = true;
  bool with_replacement = true;

  std::size_t arity() const {
    switch (kind) {
      case PipelineKind::kOrig: return 0;
      case PipelineKind::kInv:
      case PipelineKind::kSib:
      case PipelineKind::kInvSib: return 2;
      case PipelineKind::kSingle: return 1;
    }
    return 0;
  }

  // "orig", "inv", "sib", "invsib" or "single:<transform id>".
  static PipelineSpec Parse(std::string_view text) {
    PipelineSpec spec;
    if (text == "orig") {
      spec.kind = PipelineKind::kOrig;
    } else if (text == "inv") {
      spec.kind = PipelineKind::kInv;
    } else if (text == "sib") {
      spec.kind = PipelineKind::kSib;
    } else if (text == "invsib") {
      spec.kind = PipelineKind::kInvSib;
    } else if (text.substr(0, 7) == "single:") {
      spec.kind = PipelineKind::kSingle;
      spec.single_id = std::string(text.substr(7));
      GetTransform(spec.single_id);
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown pipeline '" + std::string(text) + "'");
    }
    return spec;
  }

  std::string name() const {
    switch (kind) {
      case PipelineKind::kOrig: return "orig";
      case PipelineKind::kInv: return "inv";
      case PipelineKind::kSib: return "sib";
      case PipelineKind::kInvSib: return "invsib";
      case PipelineKind::kSingle: return "single:" + single_id;
    }
    return "";
  }
};

inline constexpr std::string_view kSkippedPrefix = "skipped:";

// Transform id behind a provenance entry ("skipped:<id>" notes included).
inline std::string_view ProvenanceTransform(std::string_view entry) {
  if (entry.substr(0, kSkippedPrefix.size()) == kSkippedPrefix) return entry.substr(kSkippedPrefix.size());
  return entry;
}

namespace detail {

inline std::vector<std::string_view> VarianceClass(const VarianceTable& variance, const TaskSpec& task, bool sib) {
  auto ids = variance.Ids(task.kind(), sib);
  if (ids.empty()) {
    throw Error(ErrorCode::kEmptyVarianceClass,
                std::string(task.kind_name()) + " has no " + (sib ? "SIB" : "INV") + " transforms");
  }
  return ids;
}

inline std::string Draw(const std::vector<std::string_view>& pool, Stream& rng, std::string_view avoid = {}) {
  if (!avoid.empty() && pool.size() > 1) {
    std::vector<std::string_view> rest;
    for (auto id : pool) {
      if (id != avoid) rest.push_back(id);
    }
    return std::string(rest[rng.UniformIndex(rest.size())]);
  }
  return std::string(pool[rng.UniformIndex(pool.size())]);
}

}  // namespace detail

// Draws the transform chain for one output record.
inline std::vector<std::string> SampleTransforms(const PipelineSpec& spec, const VarianceTable& variance,
                                                 const TaskSpec& task, Stream& rng) {
  switch (spec.kind) {
    case PipelineKind::kOrig:
      return {};
    case PipelineKind::kSingle:
      GetTransform(spec.single_id);
      return {spec.single_id};
    case PipelineKind::kInv:
    case PipelineKind::kSib: {
      const auto pool = detail::VarianceClass(variance, task, spec.kind == PipelineKind::kSib);
      std::string first = detail::Draw(pool, rng);
      std::string second = detail::Draw(pool, rng, spec.with_replacement ? std::string_view{} : first);
      return {std::move(first), std::move(second)};
    }
    case PipelineKind::kInvSib: {
      const auto inv = detail::VarianceClass(variance, task, false);
      const auto sib = detail::VarianceClass(variance, task, true);
      std::string first = detail::Draw(inv, rng);
      std::string second = detail::Draw(sib, rng);
      return {std::move(first), std::move(second)};
    }
  }
  return {};
}

inline constexpr int kMaxRetries = 10;

struct StepResult {
  TextSample sample;
  std::string used;  // applied id, or "skipped:<id>"
};

// Applies one pipeline step. A step that does not apply is redrawn from the
// same variance class up to kMaxRetries times (never for SINGLE pipelines),
// then passes the sample through with a "skipped:<id>" provenance note.
// Mixtures take a partner from `pool`, uniformly, excluding `self` when the
// pool has other members.
inline StepResult ApplyStep(const std::string& id, const TextSample& current, const std::vector<TextSample>& pool,
                            std::size_t self, const PipelineSpec& spec, const TransformContext& ctx, Stream base) {
  std::string attempt_id = id;
  const bool sib = IsSib(ctx.variance.Get(id, ctx.task.kind()));
  for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
    Stream rng = base.Fork(static_cast<std::uint64_t>(attempt));
    if (IsMixture(attempt_id)) {
      if (!pool.empty()) {
        std::size_t partner = rng.UniformIndex(pool.size());
        if (pool.size() > 1) {
          partner = rng.UniformIndex(pool.size() - 1);
          if (partner >= self) ++partner;
        }
        try {
          return {MixText(attempt_id, current, pool[partner], rng), attempt_id};
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kEmptyConstituent) throw;
        }
      }
    } else {
      auto outcome = ApplyUnary(attempt_id, current, ctx, rng);
      if (outcome.produced()) return {std::move(outcome).sample(), attempt_id};
    }
    if (spec.kind == PipelineKind::kSingle) break;
    attempt_id = detail::Draw(detail::VarianceClass(ctx.variance, ctx.task, sib), rng);
  }
  TextSample passed = current;
  std::string note = std::string(kSkippedPrefix) + id;
  passed.provenance.push_back(note);
  return {std::move(passed), std::move(note)};
}

struct AugmentResult {
  Dataset dataset;
  std::map<std::string, std::size_t> usage;  // per-step transform histogram
  std::size_t skipped = 0;                    // steps that exhausted retries
};

// Originals (when retained) followed by `multiplier` rounds over the input.
// Within a round, step s of every record runs before step s+1, and mixture
// partners come from the round's records as they stand after step s-1.
// Output is a pure function of (dataset, spec, variance, store, seed).
inline AugmentResult Augment(const Dataset& dataset, const PipelineSpec& spec, const VarianceTable& variance,
                             const LexiconStore& store, std::uint64_t master_seed, std::size_t workers = 1,
                             double typo_intensity = 0.1) {
  if (dataset.empty()) throw Error(ErrorCode::kInvalidArgument, "dataset is empty");
  const TransformContext ctx{dataset.task, store, variance, typo_intensity};
  const std::size_t n = dataset.size();
  AugmentResult result{Dataset{dataset.task, {}}, {}, 0};
  if (spec.retain_original) result.dataset.samples = dataset.samples;
  result.dataset.samples.reserve(n * (spec.multiplier + (spec.retain_original ? 1 : 0)));

  for (std::size_t round = 0; round < spec.multiplier; ++round) {
    std::vector<std::vector<std::string>> chains(n);
    ParallelFor(n, workers, [&](std::size_t i) {
      Stream rng = Stream::Derive(master_seed, {stream_tag::kSample, round, i});
      chains[i] = SampleTransforms(spec, variance, dataset.task, rng);
    });
    std::vector<TextSample> current = dataset.samples;
    std::vector<std::vector<std::string>> used(n);
    for (std::size_t step = 0; step < spec.arity(); ++step) {
      std::vector<TextSample> next(n);
      ParallelFor(n, workers, [&](std::size_t i) {
        const Stream base = Stream::Derive(master_seed, {stream_tag::kStep, round, i, step});
        auto outcome = ApplyStep(chains[i][step], current[i], current, i, spec, ctx, base);
        next[i] = std::move(outcome.sample);
        used[i].push_back(std::move(outcome.used));
      });
      current = std::move(next);
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& u : used[i]) {
        ++result.usage[u];
        if (u.substr(0, kSkippedPrefix.size()) == kSkippedPrefix) ++result.skipped;
      }
      result.dataset.samples.push_back(std::move(current[i]));
    }
  }
  return result;
}

}  // namespace sibyl

#endif  // SIBYL_PIPELINE_HPP_
