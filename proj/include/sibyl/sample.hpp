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

#ifndef SIBYL_SAMPLE_HPP_
#define SIBYL_SAMPLE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "sibyl/error.hpp"
#include "sibyl/label.hpp"

namespace sibyl {

struct TextSample {
  std::string text;
  SoftLabel label;
  std::vector<std::string> provenance;

  friend bool operator==(const TextSample&, const TextSample&) = default;
};

// Row-major interleaved 8-bit pixels.
struct ImageSample {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<std::uint8_t> pixels;
  SoftLabel label;

  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
            static_cast<std::size_t>(x)) * static_cast<std::size_t>(channels) +
           static_cast<std::size_t>(c);
  }

  friend bool operator==(const ImageSample&, const ImageSample&) = default;
};

inline void Validate(const ImageSample& image) {
  if (image.width < 2 || image.height < 2) {
    throw Error(ErrorCode::kShapeMismatch, "images must be at least 2x2");
  }
  if (image.channels != 1 && image.channels != 3) {
    throw Error(ErrorCode::kShapeMismatch, "images have 1 or 3 channels");
  }
  const std::size_t expected = static_cast<std::size_t>(image.width) *
                               static_cast<std::size_t>(image.height) *
                               static_cast<std::size_t>(image.channels);
  if (image.pixels.size() != expected) {
    throw Error(ErrorCode::kShapeMismatch, "pixel buffer is " + std::to_string(image.pixels.size()) +
                                               " bytes, expected " + std::to_string(expected));
  }
}

}  // namespace sibyl

#endif  // SIBYL_SAMPLE_HPP_
