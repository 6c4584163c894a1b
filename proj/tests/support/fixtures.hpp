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

#ifndef SIBYL_TESTS_SUPPORT_FIXTURES_HPP_
#define SIBYL_TESTS_SUPPORT_FIXTURES_HPP_

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "sibyl/label.hpp"
#include "sibyl/lexicon.hpp"
#include "sibyl/pipeline.hpp"
#include "sibyl/random.hpp"

namespace fixture {

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("sibyl-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::filesystem::path PackagedLexicon() { return SIBYL_DEFAULT_LEXICON_DIR; }

inline const sibyl::LexiconStore& Store() {
  static const sibyl::LexiconStore store = sibyl::LexiconStore::Load(PackagedLexicon());
  return store;
}

inline void WriteFile(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << contents;
}

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Review-style records, `per_class` per class, in class-interleaved order.
// Texts vary with the record index so transforms have something to act on.
inline sibyl::Dataset MakeDataset(const sibyl::TaskSpec& task, std::size_t per_class, std::uint64_t seed = 1) {
  static const char* kOpeners[] = {"I love this movie", "The plot is boring", "What a wonderful day in New York",
                                   "She isn't happy about the delays", "Stocks rose 7 percent today",
                                   "John said it was not good", "This film is terrible", "It is a great book"};
  static const char* kMiddles[] = {"and the acting was good", "but the ending is bad", "with Mary and John",
                                   "because it's fine", "after 12 long weeks", "so I won't watch it again",
                                   "and the music is happy", "while the cat slept"};
  static const char* kClosers[] = {".", "!", ". Really.", " :(", " 😀", ". Can you believe it?", "...", " 😞"};
  sibyl::Stream rng = sibyl::Stream::Derive(seed, {99});
  sibyl::Dataset d{task, {}};
  for (std::size_t i = 0; i < per_class; ++i) {
    for (std::size_t c = 0; c < task.num_classes(); ++c) {
      std::string text = kOpeners[rng.UniformIndex(8)];
      text += " ";
      text += kMiddles[rng.UniformIndex(8)];
      text += kClosers[rng.UniformIndex(8)];
      d.samples.push_back({std::move(text), sibyl::SoftLabel::OneHot(task.num_classes(), c), {}});
    }
  }
  return d;
}

}  // namespace fixture

#endif  // SIBYL_TESTS_SUPPORT_FIXTURES_HPP_
