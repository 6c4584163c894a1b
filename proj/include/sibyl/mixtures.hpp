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

#ifndef SIBYL_MIXTURES_HPP_
#define SIBYL_MIXTURES_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sibyl/error.hpp"
#include "sibyl/label.hpp"
#include "sibyl/random.hpp"
#include "sibyl/sample.hpp"
#include "sibyl/text.hpp"

namespace sibyl {

enum class MixKind { kTextMix, kSentMix, kWordMix, kMixup, kCutmix, kTile };
enum class LambdaSource { kCountProportional, kBeta, kAreaProportional, kUniform };

// How a mixture picks its mixing coefficient.
struct MixRecipe {
  MixKind kind = MixKind::kTextMix;
  LambdaSource lambda_source = LambdaSource::kCountProportional;
  double alpha = 1.0;

  static MixRecipe For(MixKind kind, double alpha = 1.0) {
    MixRecipe recipe{kind, LambdaSource::kCountProportional, alpha};
    switch (kind) {
      case MixKind::kTextMix:
      case MixKind::kSentMix:
      case MixKind::kWordMix: recipe.lambda_source = LambdaSource::kCountProportional; break;
      case MixKind::kMixup: recipe.lambda_source = LambdaSource::kBeta; break;
      case MixKind::kCutmix: recipe.lambda_source = LambdaSource::kAreaProportional; break;
      case MixKind::kTile: recipe.lambda_source = LambdaSource::kUniform; break;
    }
    recipe.Validate();
    return recipe;
  }

  void Validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
      throw Error(ErrorCode::kInvalidArgument, "alpha must be > 0");
    }
    const bool text = kind == MixKind::kTextMix || kind == MixKind::kSentMix || kind == MixKind::kWordMix;
    const bool ok = (text && lambda_source == LambdaSource::kCountProportional) ||
                    (kind == MixKind::kMixup && lambda_source == LambdaSource::kBeta) ||
                    (kind == MixKind::kCutmix && lambda_source == LambdaSource::kAreaProportional) ||
                    (kind == MixKind::kTile && lambda_source == LambdaSource::kUniform);
    if (!ok) throw Error(ErrorCode::kInvalidArgument, "lambda source not valid for this mix kind");
  }
};

namespace detail {

inline SoftLabel CountProportionalLabel(const TextSample& a, const TextSample& b) {
  if (a.label.size() != b.label.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "constituents come from different tasks");
  }
  const std::size_t wa = WordCount(a.text);
  const std::size_t wb = WordCount(b.text);
  if (wa == 0 || wb == 0) {
    throw Error(ErrorCode::kEmptyConstituent, "a constituent has no words");
  }
  const std::array<SoftLabel, 2> labels = {a.label, b.label};
  const std::array<double, 2> weights = {static_cast<double>(wa), static_cast<double>(wb)};
  return Blend(labels, weights);
}

inline TextSample Mixed(const TextSample& a, std::string text, SoftLabel label, std::string_view id) {
  TextSample out{std::move(text), std::move(label), a.provenance};
  out.provenance.emplace_back(id);
  return out;
}

}  // namespace detail

// Concatenation; label proportional to each side's word count.
inline TextSample TextMix(const TextSample& a, const TextSample& b) {
  auto label = detail::CountProportionalLabel(a, b);
  return detail::Mixed(a, a.text + " " + b.text, std::move(label), "textmix");
}

// Sentences of both texts, shuffled. Same label as TextMix.
inline TextSample SentMix(const TextSample& a, const TextSample& b, Stream& rng) {
  auto label = detail::CountProportionalLabel(a, b);
  auto sentences = SplitSentences(a.text);
  for (auto& s : SplitSentences(b.text)) sentences.push_back(std::move(s));
  rng.Shuffle(std::span<std::string>(sentences));
  return detail::Mixed(a, Join(sentences), std::move(label), "sentmix");
}

// Tokens of both texts, shuffled. Same label as TextMix.
inline TextSample WordMix(const TextSample& a, const TextSample& b, Stream& rng) {
  auto label = detail::CountProportionalLabel(a, b);
  auto tokens = TokenizeWords(a.text);
  for (auto& t : TokenizeWords(b.text)) tokens.push_back(std::move(t));
  rng.Shuffle(std::span<std::string>(tokens));
  return detail::Mixed(a, Join(tokens), std::move(label), "wordmix");
}

// Dispatch by registry id ("textmix", "sentmix", "wordmix").
inline TextSample MixText(std::string_view id, const TextSample& a, const TextSample& b, Stream& rng) {
  if (id == "textmix") return TextMix(a, b);
  if (id == "sentmix") return SentMix(a, b, rng);
  if (id == "wordmix") return WordMix(a, b, rng);
  throw Error(ErrorCode::kUnknownTransform, "'" + std::string(id) + "' is not a text mixture");
}

namespace detail {

inline void CheckSameShape(const ImageSample& a, const ImageSample& b) {
  Validate(a);
  Validate(b);
  if (a.width != b.width || a.height != b.height || a.channels != b.channels) {
    throw Error(ErrorCode::kShapeMismatch,
                std::to_string(a.width) + "x" + std::to_string(a.height) + "x" + std::to_string(a.channels) +
                    " vs " + std::to_string(b.width) + "x" + std::to_string(b.height) + "x" +
                    std::to_string(b.channels));
  }
  if (a.label.size() != b.label.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "labels differ in dimension");
  }
}

inline SoftLabel Interpolate(const ImageSample& a, const ImageSample& b, double lambda) {
  const std::array<SoftLabel, 2> labels = {a.label, b.label};
  const std::array<double, 2> weights = {lambda, 1.0 - lambda};
  return Blend(labels, weights);
}

}  // namespace detail

// pixel = round(lambda * a + (1 - lambda) * b).
inline ImageSample Mixup(const ImageSample& a, const ImageSample& b, double lambda) {
  detail::CheckSameShape(a, b);
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must be in [0, 1]");
  }
  ImageSample out = a;
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    const double v = lambda * a.pixels[i] + (1.0 - lambda) * b.pixels[i];
    out.pixels[i] = static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
  }
  out.label = detail::Interpolate(a, b, lambda);
  return out;
}

inline ImageSample Mixup(const ImageSample& a, const ImageSample& b, Stream& rng, double alpha = 1.0) {
  return Mixup(a, b, rng.Beta(alpha, alpha));
}

struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  friend bool operator==(const Rect&, const Rect&) = default;
};

// b's pixels inside rect over a; lambda = 1 - area / total.
inline ImageSample Cutmix(const ImageSample& a, const ImageSample& b, Rect rect) {
  detail::CheckSameShape(a, b);
  if (rect.w < 1 || rect.h < 1 || rect.x < 0 || rect.y < 0 || rect.x + rect.w > a.width ||
      rect.y + rect.h > a.height) {
    throw Error(ErrorCode::kRectOutOfBounds, "rect (" + std::to_string(rect.x) + "," + std::to_string(rect.y) +
                                                 "," + std::to_string(rect.w) + "," + std::to_string(rect.h) +
                                                 ") outside image");
  }
  ImageSample out = a;
  for (int y = rect.y; y < rect.y + rect.h; ++y) {
    for (int x = rect.x; x < rect.x + rect.w; ++x) {
      for (int c = 0; c < a.channels; ++c) out.pixels[out.index(x, y, c)] = b.pixels[b.index(x, y, c)];
    }
  }
  const double area = static_cast<double>(rect.w) * rect.h;
  const double total = static_cast<double>(a.width) * a.height;
  out.label = detail::Interpolate(a, b, 1.0 - area / total);
  return out;
}

// Random box: sides W*sqrt(1-l), H*sqrt(1-l) with l ~ Beta(alpha, alpha),
// uniform center, clipped to the image and at least 1x1.
inline Rect RandomCutRect(int width, int height, Stream& rng, double alpha = 1.0) {
  const double l = rng.Beta(alpha, alpha);
  const double ratio = std::sqrt(1.0 - l);
  const int cut_w = static_cast<int>(width * ratio);
  const int cut_h = static_cast<int>(height * ratio);
  const int cx = static_cast<int>(rng.UniformIndex(static_cast<std::size_t>(width)));
  const int cy = static_cast<int>(rng.UniformIndex(static_cast<std::size_t>(height)));
  int x0 = std::clamp(cx - cut_w / 2, 0, width);
  int y0 = std::clamp(cy - cut_h / 2, 0, height);
  int x1 = std::clamp(cx + (cut_w + 1) / 2, 0, width);
  int y1 = std::clamp(cy + (cut_h + 1) / 2, 0, height);
  if (x1 <= x0) {
    x0 = std::min(cx, width - 1);
    x1 = x0 + 1;
  }
  if (y1 <= y0) {
    y0 = std::min(cy, height - 1);
    y1 = y0 + 1;
  }
  return {x0, y0, x1 - x0, y1 - y0};
}

inline ImageSample Cutmix(const ImageSample& a, const ImageSample& b, Stream& rng, double alpha = 1.0) {
  detail::CheckSameShape(a, b);
  return Cutmix(a, b, RandomCutRect(a.width, a.height, rng, alpha));
}

// 2x2 grid (TL, TR, BL, BR) of half-size box-averaged inputs; uniform label.
inline ImageSample Tile(std::span<const ImageSample> quads) {
  if (quads.size() != 4) throw Error(ErrorCode::kInvalidArgument, "tile needs exactly 4 images");
  for (const auto& q : quads) detail::CheckSameShape(quads[0], q);
  const int w = quads[0].width;
  const int h = quads[0].height;
  if (w % 2 != 0 || h % 2 != 0) {
    throw Error(ErrorCode::kOddDimensions, std::to_string(w) + "x" + std::to_string(h));
  }
  ImageSample out;
  out.width = w;
  out.height = h;
  out.channels = quads[0].channels;
  out.pixels.assign(quads[0].pixels.size(), 0);
  const int hw = w / 2;
  const int hh = h / 2;
  for (std::size_t q = 0; q < 4; ++q) {
    const int ox = (q % 2 == 1) ? hw : 0;
    const int oy = (q >= 2) ? hh : 0;
    const ImageSample& src = quads[q];
    for (int y = 0; y < hh; ++y) {
      for (int x = 0; x < hw; ++x) {
        for (int c = 0; c < out.channels; ++c) {
          const int sum = src.pixels[src.index(2 * x, 2 * y, c)] + src.pixels[src.index(2 * x + 1, 2 * y, c)] +
                          src.pixels[src.index(2 * x, 2 * y + 1, c)] +
                          src.pixels[src.index(2 * x + 1, 2 * y + 1, c)];
          out.pixels[out.index(ox + x, oy + y, c)] = static_cast<std::uint8_t>((sum + 2) / 4);
        }
      }
    }
  }
  std::vector<SoftLabel> labels;
  for (const auto& q : quads) labels.push_back(q.label);
  const std::array<double, 4> weights = {1.0, 1.0, 1.0, 1.0};
  out.label = Blend(labels, weights);
  return out;
}

}  // namespace sibyl

#endif  // SIBYL_MIXTURES_HPP_
