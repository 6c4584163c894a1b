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

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sibyl/cli.hpp"
#include "sibyl/sibyl.hpp"
#include "support/fixtures.hpp"
#include "support/mock_server.hpp"
#include "support/oracles.hpp"

namespace {

using namespace sibyl;
using Clock = std::chrono::steady_clock;

// Pinned tolerances and budgets.
constexpr double kExactTolerance = 1e-12;
constexpr double kSumTolerance = 1e-9;
constexpr double kTextMixTolerance = 0.06;
constexpr double kConstantTolerance = 0.02;
constexpr double kFastBudgetSeconds = 1.0;
constexpr double kDeterminismBudgetSeconds = 30.0;
constexpr double kSuiteBudgetSeconds = 60.0;
constexpr std::size_t kDeskRecords = 1000;

struct Verdict {
  bool pass = true;
  std::string detail;

  void Require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

double Seconds(Clock::time_point since) { return std::chrono::duration<double>(Clock::now() - since).count(); }

std::string Fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, value);
  return buf;
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sibyl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

TextSample Text(std::string text, SoftLabel label) { return {std::move(text), std::move(label), {}}; }

ImageSample Solid(int w, int h, std::uint8_t value, SoftLabel label) {
  ImageSample img;
  img.width = w;
  img.height = h;
  img.channels = 1;
  img.pixels.assign(static_cast<std::size_t>(w * h), value);
  img.label = std::move(label);
  return img;
}

SoftLabel RandomLabel(Stream& rng, std::size_t n) {
  std::vector<double> w(n, 0.0);
  const std::size_t support = 1 + rng.UniformIndex(n);
  for (std::size_t i = 0; i < support; ++i) w[rng.UniformIndex(n)] += 0.05 + rng.Uniform();
  return Normalize(w);
}

bool SumsToOne(const SoftLabel& label) {
  double sum = 0.0;
  for (double p : label.probs()) sum += p;
  return std::abs(sum - 1.0) <= kSumTolerance;
}

bool SupportedOn(const SoftLabel& mixed, const std::vector<const SoftLabel*>& parts) {
  for (std::size_t c = 0; c < mixed.size(); ++c) {
    if (mixed[c] == 0.0) continue;
    bool seen = false;
    for (const auto* p : parts) seen = seen || (*p)[c] > 0.0;
    if (!seen) return false;
  }
  return true;
}

// Unique texts so a lookup predictor can recover gold labels.
Dataset DeskDataset(const TaskSpec& task, std::size_t records, std::uint64_t seed) {
  auto d = fixture::MakeDataset(task, records / task.num_classes(), seed);
  for (std::size_t i = 0; i < d.samples.size(); ++i) d.samples[i].text += " Entry " + std::to_string(i) + ".";
  return d;
}

Verdict WordMixArithmetic() {
  Verdict v;
  const auto a = Text("it is essentially empty", SoftLabel::OneHot(2, 0));
  const auto b = Text("this is a visually stunning rumination on love", SoftLabel::OneHot(2, 1));
  Stream rng = Stream::Derive(0, {});
  const auto mixed = WordMix(a, b, rng);
  const auto exact = oracle::BlendExact({oracle::OneHot(2, 0), oracle::OneHot(2, 1)},
                                        {static_cast<std::int64_t>(oracle::AsciiWordCount(a.text)),
                                         static_cast<std::int64_t>(oracle::AsciiWordCount(b.text))});
  v.Require(exact[0] == oracle::Fraction(1, 3) && exact[1] == oracle::Fraction(2, 3), "oracle is not [1/3, 2/3]");
  v.Require(mixed.label[0] == exact[0].ToDouble() && mixed.label[1] == exact[1].ToDouble(),
            "label " + Fmt("%.17g", mixed.label[0]) + " differs from 1/3");
  v.Require(std::round(mixed.label[0] * 100) == 33 && std::round(mixed.label[1] * 100) == 67, "not [0.33, 0.67]");
  v.detail = v.pass ? "label [" + Fmt("%.4f", mixed.label[0]) + ", " + Fmt("%.4f", mixed.label[1]) + "]" : v.detail;
  return v;
}

Verdict TopKExample() {
  Verdict v;
  const double score = WeightedTopK({{0.5, 0.1, 0.4}}, SoftLabel::FromProbs({0.7, 0.3, 0.0}), 2);
  v.Require(std::abs(score - 0.7) <= kExactTolerance, "score " + Fmt("%.17g", score));
  if (v.pass) v.detail = "score " + Fmt("%.6f", score);
  return v;
}

Verdict TileAndMixup() {
  Verdict v;
  const std::vector<ImageSample> quads = {Solid(4, 4, 10, SoftLabel::OneHot(4, 0)), Solid(4, 4, 20, SoftLabel::OneHot(4, 2)),
                                          Solid(4, 4, 30, SoftLabel::OneHot(4, 1)), Solid(4, 4, 40, SoftLabel::OneHot(4, 3))};
  const auto tiled = Tile(quads);
  for (std::size_t c = 0; c < 4; ++c) v.Require(tiled.label[c] == 0.25, "tile label not uniform");
  const auto mixed = Mixup(Solid(4, 4, 0, SoftLabel::OneHot(2, 0)), Solid(4, 4, 200, SoftLabel::OneHot(2, 1)), 0.35);
  v.Require(std::abs(mixed.label[0] - 0.35) <= kExactTolerance && std::abs(mixed.label[1] - 0.65) <= kExactTolerance,
            "mixup label [" + Fmt("%.6f", mixed.label[0]) + ", " + Fmt("%.6f", mixed.label[1]) + "]");
  if (v.pass) v.detail = "tile [0.25 x4], mixup [0.35, 0.65]";
  return v;
}

Verdict TextMixFigure() {
  Verdict v;
  const auto mixed = TextMix(
      Text("virutally unwatchable...", SoftLabel::OneHot(2, 0)),
      Text("a vivid, thoughtful, unapologetically raw coming-of-age tale full of sex, drugs and rock 'n' roll.",
           SoftLabel::OneHot(2, 1)));
  const double d0 = std::abs(mixed.label[0] - 0.17);
  const double d1 = std::abs(mixed.label[1] - 0.83);
  v.Require(d0 <= kTextMixTolerance && d1 <= kTextMixTolerance,
            "label [" + Fmt("%.4f", mixed.label[0]) + ", " + Fmt("%.4f", mixed.label[1]) + "]");
  if (v.pass) {
    v.detail = "label [" + Fmt("%.4f", mixed.label[0]) + ", " + Fmt("%.4f", mixed.label[1]) + "], max deviation " +
               Fmt("%.4f", std::max(d0, d1));
  }
  return v;
}

Verdict NormalizationProperty() {
  Verdict v;
  static const char* kWords[] = {"red", "fox", "jumps", "over", "the", "lazy", "dog.", "Then", "it", "sleeps!"};
  Stream rng = Stream::Derive(5, {});
  const std::vector<std::string> kinds = {"textmix", "sentmix", "wordmix"};
  for (int trial = 0; trial < 10000 && v.pass; ++trial) {
    const std::size_t n = 2 + rng.UniformIndex(9);
    const auto la = RandomLabel(rng, n);
    const auto lb = RandomLabel(rng, n);
    if (trial % 2 == 0) {
      auto words = [&] {
        std::string s;
        const std::size_t len = 1 + rng.UniformIndex(12);
        for (std::size_t i = 0; i < len; ++i) s += (i ? " " : "") + std::string(kWords[rng.UniformIndex(10)]);
        return s;
      };
      const auto mixed = MixText(kinds[rng.UniformIndex(3)], Text(words(), la), Text(words(), lb), rng);
      v.Require(SumsToOne(mixed.label), "text label sum off");
      v.Require(SupportedOn(mixed.label, {&la, &lb}), "text label leaks outside constituents");
    } else {
      const int w = 2 * (1 + static_cast<int>(rng.UniformIndex(6)));
      const int h = 2 * (1 + static_cast<int>(rng.UniformIndex(6)));
      const auto a = Solid(w, h, 10, la);
      const auto b = Solid(w, h, 200, lb);
      const std::size_t pick = rng.UniformIndex(3);
      if (pick == 0) {
        const auto m = Mixup(a, b, rng);
        v.Require(SumsToOne(m.label) && SupportedOn(m.label, {&la, &lb}), "mixup label invalid");
      } else if (pick == 1) {
        const auto m = Cutmix(a, b, rng);
        v.Require(SumsToOne(m.label) && SupportedOn(m.label, {&la, &lb}), "cutmix label invalid");
      } else {
        const auto lc = RandomLabel(rng, n);
        const auto ld = RandomLabel(rng, n);
        const std::vector<ImageSample> quads = {a, b, Solid(w, h, 50, lc), Solid(w, h, 90, ld)};
        const auto m = Tile(quads);
        v.Require(SumsToOne(m.label) && SupportedOn(m.label, {&la, &lb, &lc, &ld}), "tile label invalid");
      }
    }
  }
  if (v.pass) v.detail = "10000 mixtures";
  return v;
}

Verdict SizeAndVarianceLaws() {
  Verdict v;
  const auto variance = VarianceTable::Defaults();
  const auto twenty = fixture::MakeDataset(TaskSpec::Sentiment(), 10);
  const auto grown = Augment(twenty, PipelineSpec::Parse("invsib"), variance, fixture::Store(), 1);
  v.Require(grown.dataset.size() == 620, "got " + std::to_string(grown.dataset.size()) + " records");

  std::size_t checked = 0;
  for (const auto& task : {TaskSpec::Sentiment(), TaskSpec::Topic(4)}) {
    const auto d = fixture::MakeDataset(task, 20 / task.num_classes());
    auto spec = PipelineSpec::Parse("inv");
    spec.multiplier = 50;
    spec.retain_original = false;
    const auto result = Augment(d, spec, variance, fixture::Store(), 2);
    v.Require(result.dataset.size() == 1000, "inv pipeline produced " + std::to_string(result.dataset.size()));
    for (const auto& s : result.dataset.samples) {
      ++checked;
      v.Require(s.provenance.size() == 2, "INV chain of length " + std::to_string(s.provenance.size()));
      for (const auto& entry : s.provenance) {
        v.Require(variance.Get(ProvenanceTransform(entry), task.kind()) == Variance::kInv,
                  "non-INV transform " + entry + " in an INV chain");
      }
    }
  }
  if (v.pass) v.detail = "620 records; " + std::to_string(checked) + " INV chains checked";
  return v;
}

Verdict Determinism() {
  Verdict v;
  fixture::TempDir dir;
  fixture::WriteFile(dir / "desk.jsonl", PersistToString(DeskDataset(TaskSpec::Sentiment(), kDeskRecords, 3).samples));
  const std::string input = (dir / "desk.jsonl").string();
  double slowest = 0.0;
  std::vector<std::string> augmented, suites;
  for (const char* workers : {"1", "1", "4"}) {
    const std::string tag = std::to_string(augmented.size());
    auto start = Clock::now();
    const auto a = Cli({"augment", "--pipeline", "invsib", "--seed", "17", "--workers", workers, "--input", input,
                        "--output", (dir / ("aug" + tag + ".jsonl")).string()});
    slowest = std::max(slowest, Seconds(start));
    v.Require(a.code == 0, "augment failed: " + a.err);
    augmented.push_back(fixture::ReadFile(dir / ("aug" + tag + ".jsonl")));

    start = Clock::now();
    const auto t = Cli({"testgen", "--pipeline", "invsib", "--seed", "17", "--workers", workers, "--input", input,
                        "--output-dir", (dir / ("suites" + tag)).string()});
    slowest = std::max(slowest, Seconds(start));
    v.Require(t.code == 0, "testgen failed: " + t.err);
    std::string all;
    for (const auto& f : cli::SuiteFiles(dir / ("suites" + tag))) all += fixture::ReadFile(f);
    suites.push_back(all);
  }
  v.Require(!augmented[0].empty() && !suites[0].empty(), "empty output");
  v.Require(augmented[0] == augmented[1] && augmented[0] == augmented[2], "augment output differs between runs");
  v.Require(suites[0] == suites[1] && suites[0] == suites[2], "testgen output differs between runs");
  v.Require(slowest < kDeterminismBudgetSeconds, "slowest run " + Fmt("%.1f s", slowest));
  if (v.pass) v.detail = "byte-identical at 1 and 4 workers; slowest run " + Fmt("%.2f s", slowest);
  return v;
}

Verdict AdaptiveCorrectness() {
  Verdict v;
  Stream rng = Stream::Derive(8, {});
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + rng.UniformIndex(13);
    std::vector<std::vector<std::uint64_t>> rows(n, std::vector<std::uint64_t>(n));
    ConfusionMatrix cm(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        rows[i][j] = rng.UniformIndex(5) == 0 ? 0 : rng.UniformIndex(20);
        cm.Set(i, j, rows[i][j]);
      }
    }
    const auto expected = oracle::MostConfused(rows);
    if (expected.first == n) {
      try {
        MostConfusedPair(cm);
        v.Require(false, "diagonal matrix did not raise NoConfusion");
      } catch (const Error& e) {
        v.Require(e.code() == ErrorCode::kNoConfusion, "wrong error for diagonal matrix");
      }
    } else {
      v.Require(MostConfusedPair(cm) == expected, "pair mismatch on trial " + std::to_string(trial));
    }
  }

  const auto topics = fixture::MakeDataset(TaskSpec::Topic(6), 10);
  const auto pools = GroupByClass(topics.samples, 6);
  for (int trial = 0; trial < 50; ++trial) {
    ConfusionMatrix cm(6);
    for (std::size_t i = 0; i < 6; ++i) {
      for (std::size_t j = 0; j < 6; ++j) cm.Set(i, j, rng.UniformIndex(10));
    }
    for (const char* mix : {"textmix", "sentmix", "wordmix"}) {
      const auto cycle = RunCycle(cm, pools, mix, 4, 3, static_cast<std::uint64_t>(trial));
      for (std::size_t b = 0; b < cycle.batches.size(); ++b) {
        const auto [x, y] = cycle.pairs[b];
        for (const auto& s : cycle.batches[b]) {
          for (std::size_t c = 0; c < 6; ++c) {
            v.Require(s.label[c] == 0.0 || c == x || c == y, "batch label outside the chosen pair");
          }
        }
      }
    }
  }

  const auto desk = DeskDataset(TaskSpec::Sentiment(), kDeskRecords, 4);
  const auto start = Clock::now();
  const auto generated = GenerateSuites(desk, PipelineSpec::Parse("invsib"), VarianceTable::Defaults(), fixture::Store(), 9);
  const double elapsed = Seconds(start);
  std::size_t tests = 0;
  for (const auto& s : generated) tests += s.tests.size();
  v.Require(generated.size() == 100 && tests == 10000, "generated " + std::to_string(tests) + " tests");
  v.Require(elapsed < kSuiteBudgetSeconds, "suite generation took " + Fmt("%.1f s", elapsed));
  if (v.pass) v.detail = "1000 matrices; 100x100 suites in " + Fmt("%.2f s", elapsed);
  return v;
}

Verdict ScorerEquivalence() {
  Verdict v;
  Stream rng = Stream::Derive(12, {});
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = 2 + rng.UniformIndex(9);
    const std::size_t gold = rng.UniformIndex(n);
    std::vector<double> pred(n);
    for (auto& p : pred) p = trial % 2 ? rng.Uniform() : static_cast<double>(rng.UniformIndex(3));
    const double expected = oracle::ExactMatch(pred, gold) ? 1.0 : 0.0;
    v.Require(WeightedTopK({pred}, SoftLabel::OneHot(n, gold), 1) == expected, "mismatch on trial " + std::to_string(trial));
  }
  if (v.pass) v.detail = "10000 cases";
  return v;
}

Verdict RegistryFidelity() {
  Verdict v;
  const auto run = Cli({"list-transforms"});
  const auto expected = fixture::ReadFile(std::filesystem::path(SIBYL_TEST_DATA_DIR) / "transform_manifest.tsv");
  v.Require(run.code == 0, "list-transforms failed");
  v.Require(run.out == expected, "manifest differs from the checked-in copy");
  const auto rows = static_cast<std::size_t>(std::count(run.out.begin(), run.out.end(), '\n'));
  v.Require(rows == 40, std::to_string(rows) + " rows");
  if (v.pass) v.detail = "40 rows match";
  return v;
}

Verdict EndToEndScoring() {
  Verdict v;
  fixture::TempDir dir;
  const auto desk = DeskDataset(TaskSpec::Sentiment(), kDeskRecords, 6);
  std::map<std::string, std::size_t> gold;
  for (const auto& s : desk.samples) gold[s.text] = s.label.ArgMax();
  fixture::WriteFile(dir / "desk.jsonl", PersistToString(desk.samples));
  const auto gen = Cli({"testgen", "--pipeline", "orig", "--seed", "2", "--input", (dir / "desk.jsonl").string(),
                        "--output-dir", (dir / "suites").string()});
  v.Require(gen.code == 0, "testgen failed: " + gen.err);

  auto mean_of = [&](const fixture::Scorer& scorer) {
    fixture::MockServer server(scorer);
    const auto run = Cli({"score", "--suites", (dir / "suites").string(), "--pred-url", server.url(), "--k", "1"});
    v.Require(run.code == 0, "score failed: " + run.err);
    const auto at = run.out.find("mean\t");
    return at == std::string::npos ? -1.0 : std::stod(run.out.substr(at + 5));
  };
  const double perfect = mean_of([&](const std::string& text) {
    std::vector<double> row(2, 0.0);
    row[gold.at(text)] = 1.0;
    return row;
  });
  const double constant = mean_of([](const std::string&) { return std::vector<double>{0.6, 0.4}; });
  v.Require(perfect == 1.0, "gold predictor scored " + Fmt("%.6f", perfect));
  v.Require(std::abs(constant - 0.5) <= kConstantTolerance, "constant predictor scored " + Fmt("%.6f", constant));
  if (v.pass) v.detail = "gold " + Fmt("%.6f", perfect) + ", constant " + Fmt("%.6f", constant);
  return v;
}

struct Criterion {
  int number;
  const char* name;
  std::function<Verdict()> check;
  double budget_seconds;  // 0 means no budget beyond internal checks
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "wordmix label arithmetic", WordMixArithmetic, kFastBudgetSeconds},
      {2, "weighted top-k worked example", TopKExample, kFastBudgetSeconds},
      {3, "tile and mixup labels", TileAndMixup, 0},
      {4, "textmix figure within tolerance", TextMixFigure, 0},
      {5, "mixture labels normalized and supported", NormalizationProperty, 0},
      {6, "size and variance laws", SizeAndVarianceLaws, 0},
      {7, "deterministic augment and testgen", Determinism, 0},
      {8, "adaptive correctness", AdaptiveCorrectness, 0},
      {9, "top-1 equals exact match", ScorerEquivalence, 0},
      {10, "registry manifest", RegistryFidelity, 0},
      {11, "end-to-end scoring", EndToEndScoring, 0},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = Clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double elapsed = Seconds(start);
    if (c.budget_seconds > 0 && elapsed >= c.budget_seconds) {
      v.pass = false;
      v.detail = "took " + Fmt("%.3f s", elapsed);
    }
    if (!v.pass) ++failed;
    std::printf("[%s] %2d %s: %s (%.3f s)\n", v.pass ? "PASS" : "FAIL", c.number, c.name, v.detail.c_str(), elapsed);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
