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

#ifndef SIBYL_IMAGE_IO_HPP_
#define SIBYL_IMAGE_IO_HPP_

#include <cctype>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "sibyl/error.hpp"
#include "sibyl/sample.hpp"

namespace sibyl {

namespace detail {

inline int ReadPnmInt(std::istream& in) {
  int c = in.get();
  for (;;) {
    if (c == '#') {
      while (c != '\n' && c != EOF) c = in.get();
    } else if (c != EOF && std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  if (c == EOF || !std::isdigit(c)) throw Error(ErrorCode::kImageFormat, "bad PNM header");
  int value = 0;
  while (c != EOF && std::isdigit(c)) {
    value = value * 10 + (c - '0');
    if (value > 1 << 20) throw Error(ErrorCode::kImageFormat, "PNM dimension too large");
    c = in.get();
  }
  // exactly one whitespace byte follows the last header field
  if (c == EOF || !std::isspace(c)) throw Error(ErrorCode::kImageFormat, "bad PNM header");
  return value;
}

}  // namespace detail

// Binary PGM (P5, 1 channel) or PPM (P6, 3 channels), maxval 255. The label
// is left empty.
inline ImageSample ReadPnm(std::istream& in) {
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6')) {
    throw Error(ErrorCode::kImageFormat, "expected P5 or P6");
  }
  ImageSample image;
  image.channels = magic[1] == '5' ? 1 : 3;
  image.width = detail::ReadPnmInt(in);
  image.height = detail::ReadPnmInt(in);
  const int maxval = detail::ReadPnmInt(in);
  if (maxval != 255) throw Error(ErrorCode::kImageFormat, "only maxval 255 is supported");
  image.pixels.resize(static_cast<std::size_t>(image.width) * static_cast<std::size_t>(image.height) *
                      static_cast<std::size_t>(image.channels));
  in.read(reinterpret_cast<char*>(image.pixels.data()), static_cast<std::streamsize>(image.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(image.pixels.size())) {
    throw Error(ErrorCode::kImageFormat, "truncated pixel data");
  }
  Validate(image);
  return image;
}

inline ImageSample ReadPnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return ReadPnm(in);
}

inline void WritePnm(std::ostream& out, const ImageSample& image) {
  Validate(image);
  out << (image.channels == 1 ? "P5" : "P6") << '\n'
      << image.width << ' ' << image.height << '\n'
      << 255 << '\n';
  out.write(reinterpret_cast<const char*>(image.pixels.data()), static_cast<std::streamsize>(image.pixels.size()));
}

inline std::string EncodePnm(const ImageSample& image) {
  std::ostringstream out(std::ios::binary);
  WritePnm(out, image);
  return out.str();
}

}  // namespace sibyl

#endif  // SIBYL_IMAGE_IO_HPP_
