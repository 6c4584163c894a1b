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

#ifndef SIBYL_RANDOM_HPP_
#define SIBYL_RANDOM_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <span>
#include <utility>

#include "sibyl/error.hpp"

namespace sibyl {

namespace detail {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t Mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// Counter-based random stream. The stream for a derivation path is a pure
// function of (master_seed, path), so records can be processed in any order
// or on any number of threads with identical results. All distributions are
// implemented here rather than with <random> so output is identical across
// standard library implementations.
class Stream {
 public:
  explicit constexpr Stream(std::uint64_t key) : key_(key) {}

  // Stream for master_seed followed by an arbitrary path of indices,
  // e.g. Derive(seed, {round, record, step}).
  static constexpr Stream Derive(std::uint64_t master_seed,
                                 std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = detail::Mix64(master_seed ^ 0x5851f42d4c957f2dULL);
    for (std::uint64_t p : path) {
      h = detail::Mix64(h + detail::kGolden * (p + 1));
    }
    return Stream(h);
  }

  // Child stream; consumes nothing from this stream.
  constexpr Stream Fork(std::uint64_t index) const {
    return Stream(detail::Mix64(key_ + detail::kGolden * (index + 1) +
                                0x2545f4914f6cdd1dULL));
  }

  constexpr std::uint64_t key() const { return key_; }

  constexpr std::uint64_t NextU64() {
    counter_ += detail::kGolden;
    return detail::Mix64(key_ ^ counter_);
  }

  // Uniform in [0, n). Rejection sampling, no modulo bias.
  std::size_t UniformIndex(std::size_t n) {
    if (n == 0) throw Error(ErrorCode::kInvalidArgument, "UniformIndex(0)");
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    std::uint64_t r = NextU64();
    while (r >= limit) r = NextU64();
    return static_cast<std::size_t>(r % bound);
  }

  // Uniform integer in [lo, hi].
  std::int64_t UniformInt(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    UniformIndex(static_cast<std::size_t>(hi - lo) + 1));
  }

  // Uniform double in [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>(NextU64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1).
  double UniformOpen() {
    double u = Uniform();
    while (u == 0.0) u = Uniform();
    return u;
  }

  double Normal() {
    const double u1 = UniformOpen();
    const double u2 = Uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  // Marsaglia-Tsang; shape < 1 handled by the usual boost.
  double Gamma(double shape) {
    if (!(shape > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "gamma shape must be > 0");
    }
    if (shape < 1.0) {
      const double g = Gamma(shape + 1.0);
      return g * std::pow(UniformOpen(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = 0.0;
      double v = 0.0;
      do {
        x = Normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = UniformOpen();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double Beta(double a, double b) {
    const double x = Gamma(a);
    const double y = Gamma(b);
    return x / (x + y);
  }

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = UniformIndex(i);
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Leading path element of each Derive() call site.
namespace stream_tag {
inline constexpr std::uint64_t kSample = 1;
inline constexpr std::uint64_t kStep = 2;
inline constexpr std::uint64_t kSuite = 3;
inline constexpr std::uint64_t kAdaptive = 4;
inline constexpr std::uint64_t kSingleTransform = 5;
}  // namespace stream_tag

}  // namespace sibyl

#endif  // SIBYL_RANDOM_HPP_
