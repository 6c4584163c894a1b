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

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "sibyl/error.hpp"
#include "sibyl/label.hpp"
#include "sibyl/random.hpp"
#include "sibyl/text.hpp"
#include "sibyl/unicode.hpp"
#include "support/oracles.hpp"

namespace sibyl {
namespace {

template <typename Fn>
ErrorCode CodeOf(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kInvalidArgument;
}

// ---- TaskSpec ---------------------------------------------------------------

TEST(TaskSpecTest, Parses) {
  EXPECT_EQ(TaskSpec::Parse("sentiment").num_classes(), 2u);
  EXPECT_EQ(TaskSpec::Parse("sentiment").class_names()[0], "negative");
  EXPECT_EQ(TaskSpec::Parse("topic:14").num_classes(), 14u);
  EXPECT_EQ(TaskSpec::Parse("topic:4").kind(), TaskKind::kTopic);
}

TEST(TaskSpecTest, RejectsInvalid) {
  EXPECT_EQ(CodeOf([] { TaskSpec::Parse("topic:1"); }), ErrorCode::kInvalidTask);
  EXPECT_EQ(CodeOf([] { TaskSpec::Parse("topic:x"); }), ErrorCode::kInvalidTask);
  EXPECT_EQ(CodeOf([] { TaskSpec::Parse("genre"); }), ErrorCode::kInvalidTask);
  EXPECT_EQ(CodeOf([] { TaskSpec::Topic(std::vector<std::string>{"a", "a"}); }), ErrorCode::kInvalidTask);
}

// ---- SoftLabel algebra ------------------------------------------------------

TEST(NormalizeTest, WorkedExamples) {
  const std::array<double, 2> w1 = {4, 8};
  auto l1 = Normalize(w1, 2);
  const auto third = oracle::Fraction(1, 3).ToDouble();
  EXPECT_EQ(l1[0], third);
  EXPECT_EQ(l1[1], oracle::Fraction(2, 3).ToDouble());

  const std::array<double, 2> w2 = {1, 0};
  EXPECT_EQ(Normalize(w2, 2).probs(), (std::vector<double>{1, 0}));

  const std::array<double, 3> w3 = {3, 3, 6};
  EXPECT_EQ(Normalize(w3, 3).probs(), (std::vector<double>{0.25, 0.25, 0.5}));
}

TEST(NormalizeTest, Errors) {
  const std::array<double, 2> zero = {0, 0};
  EXPECT_EQ(CodeOf([&] { Normalize(zero, 2); }), ErrorCode::kAllZeroWeights);
  const std::array<double, 3> three = {1, 1, 1};
  EXPECT_EQ(CodeOf([&] { Normalize(three, 2); }), ErrorCode::kDimensionMismatch);
}

TEST(NormalizeTest, SumsToOneOnRandomWeights) {
  Stream rng = Stream::Derive(7, {0});
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = 2 + rng.UniformIndex(13);
    std::vector<double> w(n);
    for (auto& x : w) x = rng.UniformIndex(4) == 0 ? 0.0 : rng.Uniform() * 100.0;
    w[rng.UniformIndex(n)] += 1.0;
    const auto label = Normalize(w, n);
    double sum = 0.0;
    for (double p : label.probs()) {
      EXPECT_GE(p, 0.0);
      sum += p;
    }
    ASSERT_NEAR(sum, 1.0, kLabelTolerance);
  }
}

TEST(BlendTest, WorkedExamples) {
  const std::array<SoftLabel, 2> pair = {SoftLabel::OneHot(2, 0), SoftLabel::OneHot(2, 1)};
  const std::array<double, 2> w = {0.35, 0.65};
  const auto mixed = Blend(pair, w);
  EXPECT_NEAR(mixed[0], 0.35, kLabelTolerance);
  EXPECT_NEAR(mixed[1], 0.65, kLabelTolerance);

  const std::array<SoftLabel, 2> same = {SoftLabel::OneHot(2, 0), SoftLabel::OneHot(2, 0)};
  const std::array<double, 2> w57 = {5, 7};
  EXPECT_EQ(Blend(same, w57).probs(), (std::vector<double>{1, 0}));

  const std::array<SoftLabel, 4> quad = {SoftLabel::OneHot(4, 0), SoftLabel::OneHot(4, 2), SoftLabel::OneHot(4, 1),
                                         SoftLabel::OneHot(4, 3)};
  const std::array<double, 4> ones = {1, 1, 1, 1};
  EXPECT_EQ(Blend(quad, ones).probs(), (std::vector<double>{0.25, 0.25, 0.25, 0.25}));
}

TEST(BlendTest, ErrorsOnMixedDimensions) {
  const std::array<SoftLabel, 2> bad = {SoftLabel::OneHot(2, 0), SoftLabel::OneHot(3, 0)};
  const std::array<double, 2> w = {1, 1};
  EXPECT_EQ(CodeOf([&] { Blend(bad, w); }), ErrorCode::kDimensionMismatch);
  const std::array<SoftLabel, 2> ok = {SoftLabel::OneHot(2, 0), SoftLabel::OneHot(2, 1)};
  const std::array<double, 2> zero = {0, 0};
  EXPECT_EQ(CodeOf([&] { Blend(ok, zero); }), ErrorCode::kAllZeroWeights);
}

TEST(BlendTest, PermutationEquivariantAndIdentity) {
  Stream rng = Stream::Derive(11, {0});
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + rng.UniformIndex(5);
    const std::size_t m = 1 + rng.UniformIndex(4);
    std::vector<SoftLabel> labels;
    std::vector<double> weights;
    for (std::size_t i = 0; i < m; ++i) {
      labels.push_back(SoftLabel::OneHot(n, rng.UniformIndex(n)));
      weights.push_back(1.0 + static_cast<double>(rng.UniformIndex(9)));
    }
    const auto base = Blend(labels, weights);
    std::vector<std::size_t> perm(m);
    for (std::size_t i = 0; i < m; ++i) perm[i] = i;
    rng.Shuffle(std::span<std::size_t>(perm));
    std::vector<SoftLabel> pl;
    std::vector<double> pw;
    for (auto i : perm) {
      pl.push_back(labels[i]);
      pw.push_back(weights[i]);
    }
    EXPECT_TRUE(ApproxEqual(base, Blend(pl, pw)));
    const std::array<SoftLabel, 1> single = {labels[0]};
    const std::array<double, 1> sw = {weights[0]};
    EXPECT_EQ(Blend(single, sw).probs(), labels[0].probs());
  }
}

TEST(SoftLabelTest, ArgMaxPrefersLowestIndexOnTies) {
  EXPECT_EQ(SoftLabel::FromProbs({0.5, 0.5}).ArgMax(), 0u);
  EXPECT_EQ(SoftLabel::FromProbs({0.2, 0.4, 0.4}).ArgMax(), 1u);
  EXPECT_EQ(CodeOf([] { SoftLabel::FromProbs({0.5, 0.6}); }), ErrorCode::kInvalidArgument);
}

// ---- Tokenization -----------------------------------------------------------

TEST(TokenizeTest, Examples) {
  EXPECT_EQ(TokenizeWords("it is essentially empty"),
            (std::vector<std::string>{"it", "is", "essentially", "empty"}));
  EXPECT_EQ(WordCount("it is essentially empty"), 4u);
  EXPECT_TRUE(TokenizeWords("").empty());
  EXPECT_EQ(TokenizeWords("rock 'n' roll."), (std::vector<std::string>{"rock", "'n'", "roll", "."}));
  EXPECT_EQ(WordCount("rock 'n' roll."), 3u);
  EXPECT_EQ(TokenizeWords("coming-of-age tale"), (std::vector<std::string>{"coming-of-age", "tale"}));
  EXPECT_EQ(TokenizeWords("\"Wow!\" she said"), (std::vector<std::string>{"\"", "Wow", "!\"", "she", "said"}));
  EXPECT_EQ(WordCount("virutally unwatchable..."), 2u);
  EXPECT_EQ(WordCount("... !!! ---"), 0u);
}

TEST(TokenizeTest, UnicodeWhitespaceAndLetters) {
  EXPECT_EQ(TokenizeWords("caf\xC3\xA9\xE2\x80\x83na\xC3\xAFve"),
            (std::vector<std::string>{"caf\xC3\xA9", "na\xC3\xAFve"}));
  EXPECT_EQ(WordCount("\xF0\x9F\x98\x80 great"), 1u);
}

TEST(TokenizeTest, CountAdditiveOverConcatenation) {
  Stream rng = Stream::Derive(3, {0});
  const std::vector<std::string> vocab = {"a", "film", "...", "it's", "2", "--", "(fine)", "ok.", "!"};
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::string> wa, wb;
    for (std::size_t i = 0, n = rng.UniformIndex(6); i < n; ++i) wa.push_back(vocab[rng.UniformIndex(vocab.size())]);
    for (std::size_t i = 0, n = rng.UniformIndex(6); i < n; ++i) wb.push_back(vocab[rng.UniformIndex(vocab.size())]);
    const std::string a = Join(TokenizeWords(Join(wa)));
    const std::string b = Join(TokenizeWords(Join(wb)));
    EXPECT_EQ(WordCount(a + " " + b), WordCount(a) + WordCount(b));
    EXPECT_EQ(WordCount(a), oracle::AsciiWordCount(a));
    EXPECT_EQ(TokenizeWords(a), TokenizeWords(a));
  }
}

// ---- Sentences --------------------------------------------------------------

TEST(SentenceTest, Examples) {
  EXPECT_EQ(SplitSentences("Good film. Bad ending."), (std::vector<std::string>{"Good film.", "Bad ending."}));
  EXPECT_EQ(SplitSentences("no terminator here"), (std::vector<std::string>{"no terminator here"}));
  EXPECT_EQ(SplitSentences("Mr. Smith left. He returned."),
            (std::vector<std::string>{"Mr. Smith left.", "He returned."}));
  EXPECT_EQ(SplitSentences("Wow!! Really?\" Yes."), (std::vector<std::string>{"Wow!!", "Really?\"", "Yes."}));
  EXPECT_EQ(SplitSentences("The U.S. economy grew. Fine."),
            (std::vector<std::string>{"The U.S. economy grew.", "Fine."}));
  EXPECT_EQ(SplitSentences("Version 2.5 shipped."), (std::vector<std::string>{"Version 2.5 shipped."}));
  EXPECT_TRUE(SplitSentences("").empty());
}

TEST(SentenceTest, PreservesNonWhitespace) {
  Stream rng = Stream::Derive(5, {0});
  const std::vector<std::string> parts = {"Good", "film.", "Dr.", "No!", "why?", "e.g.", "ok", "...", "\xE2\x80\x9CHi.\xE2\x80\x9D"};
  auto squeeze = [](const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c != ' ') out.push_back(c);
    }
    return out;
  };
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::string> words;
    for (std::size_t i = 0, n = 1 + rng.UniformIndex(10); i < n; ++i) words.push_back(parts[rng.UniformIndex(parts.size())]);
    const std::string text = Join(words);
    const auto sentences = SplitSentences(text);
    EXPECT_EQ(squeeze(Join(sentences)), squeeze(text));
    for (std::size_t i = 0; i + 1 < sentences.size(); ++i) {
      const char last = sentences[i].back();
      EXPECT_TRUE(last == '.' || last == '!' || last == '?' || static_cast<unsigned char>(last) >= 0x80) << text;
    }
  }
}

// ---- Randomness -------------------------------------------------------------

TEST(StreamTest, DerivationIsPureAndPathSensitive) {
  Stream a = Stream::Derive(42, {1, 2, 3});
  Stream b = Stream::Derive(42, {1, 2, 3});
  Stream c = Stream::Derive(42, {1, 3, 2});
  Stream d = Stream::Derive(43, {1, 2, 3});
  std::set<std::uint64_t> firsts;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.NextU64();
    EXPECT_EQ(x, b.NextU64());
    firsts.insert(x);
  }
  EXPECT_NE(Stream::Derive(42, {1, 2, 3}).NextU64(), c.NextU64());
  EXPECT_NE(Stream::Derive(42, {1, 2, 3}).NextU64(), d.NextU64());
  EXPECT_EQ(firsts.size(), 100u);
}

TEST(StreamTest, UniformIndexIsUnbiased) {
  Stream rng = Stream::Derive(1, {});
  std::array<int, 7> counts{};
  constexpr int kDraws = 70000;
  for (int i = 0; i < kDraws; ++i) ++counts[rng.UniformIndex(7)];
  for (int c : counts) EXPECT_NEAR(c, kDraws / 7, 400);
}

TEST(StreamTest, BetaMomentsMatch) {
  Stream rng = Stream::Derive(2, {});
  double sum = 0.0, sq = 0.0;
  constexpr int kDraws = 40000;
  for (int i = 0; i < kDraws; ++i) {
    const double x = rng.Beta(2.0, 5.0);
    ASSERT_GE(x, 0.0);
    ASSERT_LE(x, 1.0);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / kDraws;
  const double var = sq / kDraws - mean * mean;
  EXPECT_NEAR(mean, 2.0 / 7.0, 0.005);
  EXPECT_NEAR(var, 10.0 / (49.0 * 8.0), 0.002);
}

TEST(StreamTest, ShuffleIsAPermutation) {
  Stream rng = Stream::Derive(9, {});
  std::vector<int> v(50);
  for (int i = 0; i < 50; ++i) v[i] = i;
  rng.Shuffle(std::span<int>(v));
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
  EXPECT_NE(v, sorted);
}

// ---- Unicode ----------------------------------------------------------------

TEST(UnicodeTest, DecodeAndCase) {
  EXPECT_TRUE(unicode::IsValidUtf8("na\xC3\xAFve \xF0\x9F\x98\x80"));
  EXPECT_FALSE(unicode::IsValidUtf8("\xC3"));
  EXPECT_FALSE(unicode::IsValidUtf8("\xC0\x80"));
  EXPECT_EQ(unicode::MatchCase("Love", "hate"), "Hate");
  EXPECT_EQ(unicode::MatchCase("love", "hate"), "hate");
  EXPECT_EQ(unicode::Lower("\xC3\x89T\xC3\x89"), "\xC3\xA9t\xC3\xA9");
}

}  // namespace
}  // namespace sibyl
