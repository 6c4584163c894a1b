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

#ifndef SIBYL_CLI_HPP_
#define SIBYL_CLI_HPP_

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sibyl/adaptive.hpp"
#include "sibyl/error.hpp"
#include "sibyl/eval.hpp"
#include "sibyl/http_client.hpp"
#include "sibyl/label.hpp"
#include "sibyl/lexicon.hpp"
#include "sibyl/pipeline.hpp"
#include "sibyl/registry.hpp"

namespace sibyl {

enum ExitCode { kExitOk = 0, kExitConfig = 2, kExitData = 3, kExitTransport = 4 };

inline int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return kExitConfig;
    case ErrorKind::kData: return kExitData;
    case ErrorKind::kTransport: return kExitTransport;
  }
  return kExitData;
}

namespace cli {

struct CommonOptions {
  std::string task = "sentiment";
  std::string classes_file;
  std::uint64_t seed = 0;
  std::string lexicon_dir;
  std::string variance_overrides;
  std::size_t workers = 1;
  double typo_intensity = 0.1;
  bool without_replacement = false;
};

struct Resolved {
  TaskSpec task;
  VarianceTable variance;
};

inline TaskSpec ResolveTask(const CommonOptions& o) {
  if (o.classes_file.empty()) return TaskSpec::Parse(o.task);
  std::ifstream in(o.classes_file);
  if (!in) throw Error(ErrorCode::kInvalidTask, "cannot open classes file " + o.classes_file);
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) names.push_back(line);
  }
  if (o.task == "sentiment") {
    if (names.size() != 2) throw Error(ErrorCode::kInvalidTask, "sentiment takes exactly two class names");
    return TaskSpec::Sentiment();
  }
  if (o.task != "topic") {
    const auto parsed = TaskSpec::Parse(o.task);
    if (parsed.num_classes() != names.size()) {
      throw Error(ErrorCode::kInvalidTask, "classes file lists " + std::to_string(names.size()) + " names, task has " +
                                               std::to_string(parsed.num_classes()));
    }
  }
  return TaskSpec::Topic(std::move(names));
}

inline Resolved Resolve(const CommonOptions& o) {
  Resolved r{ResolveTask(o), VarianceTable::Defaults()};
  if (!o.variance_overrides.empty()) r.variance = VarianceTable::FromFile(o.variance_overrides);
  if (!(o.typo_intensity > 0.0 && o.typo_intensity <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "--typo-intensity must be in (0, 1]");
  }
  return r;
}

inline LexiconStore LoadLexicon(const CommonOptions& o) {
  return o.lexicon_dir.empty() ? LexiconStore::LoadDefault() : LexiconStore::Load(o.lexicon_dir);
}

inline void AddCommon(CLI::App* cmd, CommonOptions& o, bool lexicon = true) {
  cmd->add_option("--task", o.task, "sentiment | topic:<n> | topic (with --classes)")->capture_default_str();
  cmd->add_option("--classes", o.classes_file, "file with one class name per line");
  cmd->add_option("--seed", o.seed, "master seed")->capture_default_str();
  cmd->add_option("--variance-overrides", o.variance_overrides, "TSV: id<TAB>sentiment|topic<TAB>INV|SIB");
  cmd->add_option("--workers", o.workers, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  if (lexicon) {
    cmd->add_option("--lexicon-dir", o.lexicon_dir, "lexicon tables (default: $SIBYL_LEXICON_DIR or packaged)");
    cmd->add_option("--typo-intensity", o.typo_intensity, "fraction of units a typo perturbs")->capture_default_str();
  }
}

inline std::vector<std::filesystem::path> SuiteFiles(const std::filesystem::path& path) {
  if (!std::filesystem::is_directory(path)) return {path};
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(path)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.rfind("suite_", 0) == 0 && entry.path().extension() == ".jsonl") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error(ErrorCode::kIoError, "no suite_*.jsonl files in " + path.string());
  return files;
}

inline std::string SuiteFileName(std::size_t index) {
  std::ostringstream name;
  name << "suite_" << std::setw(3) << std::setfill('0') << index << ".jsonl";
  return name.str();
}

}  // namespace cli

// Entry point for the `sibyl` tool. Returns the process exit code.
inline int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{
      "sibyl: label-aware text transformations, mixtures, test-suite generation and adaptive batches.\n\n"
      "Formats:\n"
      "  dataset JSONL     {\"text\": str, \"label\": index | [floats], \"provenance\": [ids]}\n"
      "  predictions JSONL {\"probs\": [floats]}\n"
      "  confusion JSON    {\"classes\": [...], \"counts\": [[...], ...]}\n"
      "  HTTP predictor    POST {\"texts\": [...]} -> {\"probs\": [[...], ...]}\n"
      "Exit codes: 0 ok, 2 config, 3 data, 4 transport.",
      "sibyl"};
  app.require_subcommand(1);
  cli::CommonOptions common;

  auto* list = app.add_subcommand("list-transforms", "print the transform manifest (id, category, sentiment, topic)");
  std::string list_overrides;
  list->add_option("--variance-overrides", list_overrides, "TSV: id<TAB>sentiment|topic<TAB>INV|SIB");

  auto* transform = app.add_subcommand("transform", "apply one transform to every record");
  std::string transform_id, input, output;
  transform->add_option("--transform", transform_id, "transform id")->required();
  transform->add_option("--input", input, "dataset JSONL")->required();
  transform->add_option("--output", output, "output JSONL")->required();
  cli::AddCommon(transform, common);

  auto* augment = app.add_subcommand("augment", "expand a dataset with a transformation pipeline");
  std::string pipeline = "orig";
  std::size_t multiplier = 30;
  bool drop_original = false;
  augment->add_option("--pipeline", pipeline, "orig | inv | sib | invsib | single:<id>")->capture_default_str();
  augment->add_option("--multiplier", multiplier, "new records per input record")->capture_default_str();
  augment->add_flag("--drop-original", drop_original, "omit the input records from the output");
  augment->add_flag("--without-replacement", common.without_replacement, "draw the two pipeline transforms distinct");
  augment->add_option("--input", input, "dataset JSONL")->required();
  augment->add_option("--output", output, "output JSONL")->required();
  cli::AddCommon(augment, common);

  auto* testgen = app.add_subcommand("testgen", "generate test suites");
  std::string output_dir;
  std::size_t num_suites = 100, tests_per_suite = 100;
  testgen->add_option("--pipeline", pipeline, "orig | inv | sib | invsib | single:<id>")->capture_default_str();
  testgen->add_option("--num-suites", num_suites)->capture_default_str()->check(CLI::PositiveNumber);
  testgen->add_option("--tests-per-suite", tests_per_suite)->capture_default_str()->check(CLI::PositiveNumber);
  testgen->add_flag("--without-replacement", common.without_replacement, "draw the two pipeline transforms distinct");
  testgen->add_option("--input", input, "dataset JSONL")->required();
  testgen->add_option("--output-dir", output_dir, "directory for suite_NNN.jsonl")->required();
  cli::AddCommon(testgen, common);

  auto* score = app.add_subcommand("score", "score test suites with weighted top-k accuracy");
  std::string suites_path, pred_file, pred_url;
  std::size_t k = 1, http_batch = 32, http_concurrency = 1;
  double http_timeout = 30.0;
  score->add_option("--suites", suites_path, "suite JSONL file or directory of suite_NNN.jsonl")->required();
  auto* pf = score->add_option("--pred-file", pred_file, "predictions JSONL, suites concatenated in name order");
  auto* pu = score->add_option("--pred-url", pred_url, "http:// endpoint of a predictor");
  pf->excludes(pu);
  score->add_option("--k", k, "top-k")->capture_default_str();
  score->add_option("--batch-size", http_batch, "texts per HTTP request")->capture_default_str()->check(CLI::PositiveNumber);
  score->add_option("--timeout", http_timeout, "HTTP timeout, seconds")->capture_default_str();
  score->add_option("--concurrency", http_concurrency, "HTTP requests in flight")->capture_default_str()->check(CLI::PositiveNumber);
  cli::AddCommon(score, common, false);

  auto* adapt = app.add_subcommand("adapt", "mixture batches targeting the most confused class pair");
  std::string confusion, mix = "textmix";
  std::optional<std::size_t> per_batch;
  std::size_t batch_size = 16, num_batches = 1;
  bool symmetric = false;
  adapt->add_option("--confusion", confusion, "confusion snapshot JSON")->required();
  adapt->add_option("--mix", mix, "textmix | sentmix | wordmix")->capture_default_str();
  adapt->add_option("--per-batch", per_batch, "mixed samples per batch (default: 25% of --batch-size)");
  adapt->add_option("--batch-size", batch_size, "training batch size")->capture_default_str();
  adapt->add_option("--num-batches", num_batches, "batches in this cycle")->capture_default_str();
  adapt->add_flag("--symmetric", symmetric, "score pairs by counts[i][j] + counts[j][i]");
  adapt->add_option("--input", input, "dataset JSONL (constituent pool)")->required();
  adapt->add_option("--output", output, "output JSONL")->required();
  cli::AddCommon(adapt, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    const int code = app.exit(e, o, er);
    out << o.str();
    err << er.str();
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (list->parsed()) {
      auto variance = list_overrides.empty() ? VarianceTable::Defaults() : VarianceTable::FromFile(list_overrides);
      out << variance.Manifest();
      return kExitOk;
    }

    const auto resolved = cli::Resolve(common);
    const auto& task = resolved.task;
    const auto& variance = resolved.variance;

    if (transform->parsed()) {
      GetTransform(transform_id);
      const auto store = cli::LoadLexicon(common);
      const auto dataset = Ingest(std::filesystem::path(input), task);
      PipelineSpec spec;
      spec.kind = PipelineKind::kSingle;
      spec.single_id = transform_id;
      const TransformContext ctx{task, store, variance, common.typo_intensity};
      std::vector<TextSample> results(dataset.size());
      ParallelFor(dataset.size(), common.workers, [&](std::size_t i) {
        const Stream base = Stream::Derive(common.seed, {stream_tag::kSingleTransform, i});
        results[i] = ApplyStep(transform_id, dataset.samples[i], dataset.samples, i, spec, ctx, base).sample;
      });
      WriteFileAtomically(output, PersistToString(results));
      std::size_t skipped = 0;
      for (const auto& r : results) {
        if (!r.provenance.empty() && r.provenance.back().rfind(kSkippedPrefix, 0) == 0) ++skipped;
      }
      out << "records: " << results.size() << "\nnot applicable: " << skipped << "\n";
      return kExitOk;
    }

    if (augment->parsed()) {
      auto spec = PipelineSpec::Parse(pipeline);
      spec.multiplier = multiplier;
      spec.retain_original = !drop_original;
      spec.with_replacement = !common.without_replacement;
      const auto store = cli::LoadLexicon(common);
      const auto dataset = Ingest(std::filesystem::path(input), task);
      const auto result = Augment(dataset, spec, variance, store, common.seed, common.workers, common.typo_intensity);
      Persist(result.dataset, output);
      out << "input records: " << dataset.size() << "\noutput records: " << result.dataset.size()
          << "\nskipped steps: " << result.skipped << "\n";
      for (const auto& [id, count] : result.usage) out << id << '\t' << count << '\n';
      return kExitOk;
    }

    if (testgen->parsed()) {
      auto spec = PipelineSpec::Parse(pipeline);
      spec.with_replacement = !common.without_replacement;
      const auto store = cli::LoadLexicon(common);
      const auto dataset = Ingest(std::filesystem::path(input), task);
      SuiteOptions options{num_suites, tests_per_suite, common.workers, common.typo_intensity};
      const auto suites = GenerateSuites(dataset, spec, variance, store, common.seed, options);
      std::filesystem::create_directories(output_dir);
      for (const auto& suite : suites) {
        WriteFileAtomically(std::filesystem::path(output_dir) / cli::SuiteFileName(suite.suite_id),
                            PersistToString(suite.tests));
      }
      out << "suites: " << suites.size() << "\ntests per suite: " << tests_per_suite << "\n";
      return kExitOk;
    }

    if (score->parsed()) {
      if (pred_file.empty() == pred_url.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "give exactly one of --pred-file or --pred-url");
      }
      if (k == 0 || k > task.num_classes()) throw Error(ErrorCode::kKOutOfRange, "--k outside 1.." + std::to_string(task.num_classes()));
      std::vector<TestSuite> suites;
      for (const auto& file : cli::SuiteFiles(suites_path)) {
        TestSuite suite;
        suite.suite_id = suites.size();
        suite.tests = Ingest(file, task).samples;
        suites.push_back(std::move(suite));
      }
      std::vector<Prediction> flat;
      if (!pred_file.empty()) {
        flat = PredictFile(pred_file, task.num_classes());
      } else {
        std::vector<std::string> texts;
        for (const auto& s : suites) {
          for (const auto& t : s.tests) texts.push_back(t.text);
        }
        HttpOptions options;
        options.batch_size = http_batch;
        options.concurrency = http_concurrency;
        options.timeout = std::chrono::milliseconds(static_cast<std::int64_t>(http_timeout * 1000));
        flat = PredictHttp(pred_url, texts, task.num_classes(), options);
      }
      std::size_t total = 0;
      for (const auto& s : suites) total += s.tests.size();
      if (flat.size() != total) {
        throw Error(ErrorCode::kLengthMismatch,
                    std::to_string(total) + " tests but " + std::to_string(flat.size()) + " predictions");
      }
      std::vector<std::vector<Prediction>> per_suite;
      std::size_t offset = 0;
      for (const auto& s : suites) {
        per_suite.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(offset),
                               flat.begin() + static_cast<std::ptrdiff_t>(offset + s.tests.size()));
        offset += s.tests.size();
      }
      const auto report = ScoreSuites(suites, per_suite, k);
      char buf[64];
      for (std::size_t s = 0; s < suites.size(); ++s) {
        std::snprintf(buf, sizeof(buf), "%.6f", report.suite_scores[s]);
        out << "suite " << s << '\t' << buf << '\n';
      }
      std::snprintf(buf, sizeof(buf), "%.6f", report.mean());
      out << "mean\t" << buf << "\nk\t" << k << '\n';
      return kExitOk;
    }

    if (adapt->parsed()) {
      const std::size_t count = per_batch.value_or(batch_size / 4);
      const auto snapshot = ConfusionMatrix::Load(confusion);
      const auto dataset = Ingest(std::filesystem::path(input), task);
      const auto pools = GroupByClass(dataset.samples, task.num_classes());
      AdaptivePlan{{0, 1}, mix, count}.Validate(task.num_classes());
      const auto cycle = RunCycle(snapshot, pools, mix, count, num_batches, common.seed, symmetric, common.workers);
      if (cycle.fallback) {
        err << "warning: confusion snapshot has no off-diagonal counts; using uniform random class pairs\n";
      }
      std::vector<TextSample> flat;
      for (const auto& batch : cycle.batches) flat.insert(flat.end(), batch.begin(), batch.end());
      WriteFileAtomically(output, PersistToString(flat));
      if (!cycle.fallback && !cycle.pairs.empty()) {
        out << "pair: " << cycle.pairs.front().first << ' ' << cycle.pairs.front().second << '\n';
      }
      out << "batches: " << cycle.batches.size() << "\nsamples: " << flat.size() << '\n';
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return ExitCodeFor(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: IoError: " << e.what() << '\n';
    return kExitData;
  }
  return kExitConfig;
}

}  // namespace sibyl

#endif  // SIBYL_CLI_HPP_
