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

#ifndef SIBYL_LABEL_HPP_
#define SIBYL_LABEL_HPP_

#include <cmath>
#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sibyl/error.hpp"

namespace sibyl {

inline constexpr double kLabelTolerance = 1e-9;

enum class TaskKind { kSentiment, kTopic };

// Class set of a classification task. Sentiment is always
// [negative, positive]; topic tasks carry any number (>= 2) of named classes.
class TaskSpec {
 public:
  static TaskSpec Sentiment() {
    return TaskSpec(TaskKind::kSentiment, {"negative", "positive"});
  }

  static TaskSpec Topic(std::size_t num_classes) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < num_classes; ++i) {
      names.push_back("class" + std::to_string(i));
    }
    return TaskSpec(TaskKind::kTopic, std::move(names));
  }

  static TaskSpec Topic(std::vector<std::string> class_names) {
    return TaskSpec(TaskKind::kTopic, std::move(class_names));
  }

  // "sentiment" or "topic:<n>".
  static TaskSpec Parse(std::string_view text) {
    if (text == "sentiment") return Sentiment();
    constexpr std::string_view kPrefix = "topic:";
    if (text.substr(0, kPrefix.size()) == kPrefix) {
      const std::string digits(text.substr(kPrefix.size()));
      std::size_t used = 0;
      unsigned long n = 0;
      try {
        n = std::stoul(digits, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == digits.size() && used > 0) return Topic(n);
    }
    throw Error(ErrorCode::kInvalidTask,
                "expected 'sentiment' or 'topic:<n>', got '" + std::string(text) + "'");
  }

  TaskKind kind() const { return kind_; }
  const std::vector<std::string>& class_names() const { return class_names_; }
  std::size_t num_classes() const { return class_names_.size(); }
  std::string_view kind_name() const {
    return kind_ == TaskKind::kSentiment ? "sentiment" : "topic";
  }

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;

 private:
  TaskSpec(TaskKind kind, std::vector<std::string> names)
      : kind_(kind), class_names_(std::move(names)) {
    if (class_names_.size() < 2) {
      throw Error(ErrorCode::kInvalidTask, "a task needs at least 2 classes");
    }
    std::set<std::string> unique(class_names_.begin(), class_names_.end());
    if (unique.size() != class_names_.size()) {
      throw Error(ErrorCode::kInvalidTask, "class names must be unique");
    }
    if (kind_ == TaskKind::kSentiment && class_names_.size() != 2) {
      throw Error(ErrorCode::kInvalidTask, "sentiment tasks have exactly 2 classes");
    }
  }

  TaskKind kind_;
  std::vector<std::string> class_names_;
};

inline constexpr std::size_t kNegativeClass = 0;
inline constexpr std::size_t kPositiveClass = 1;

// Probability vector over a task's classes.
class SoftLabel {
 public:
  SoftLabel() = default;

  // Validates entries in [0,1] summing to 1 within kLabelTolerance.
  static SoftLabel FromProbs(std::vector<double> probs) {
    if (probs.empty()) {
      throw Error(ErrorCode::kDimensionMismatch, "empty label");
    }
    double sum = 0.0;
    for (double p : probs) {
      if (!std::isfinite(p) || p < 0.0 || p > 1.0 + kLabelTolerance) {
        throw Error(ErrorCode::kInvalidArgument, "label entry outside [0,1]");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kLabelTolerance) {
      throw Error(ErrorCode::kInvalidArgument,
                  "label does not sum to 1 (sum=" + std::to_string(sum) + ")");
    }
    SoftLabel label;
    label.probs_ = std::move(probs);
    return label;
  }

  static SoftLabel OneHot(std::size_t num_classes, std::size_t index) {
    if (index >= num_classes) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "class " + std::to_string(index) + " >= " + std::to_string(num_classes));
    }
    SoftLabel label;
    label.probs_.assign(num_classes, 0.0);
    label.probs_[index] = 1.0;
    return label;
  }

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }

  // Lowest index wins ties.
  std::size_t ArgMax() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < probs_.size(); ++i) {
      if (probs_[i] > probs_[best]) best = i;
    }
    return best;
  }

  friend bool operator==(const SoftLabel&, const SoftLabel&) = default;

 private:
  std::vector<double> probs_;
};

inline bool ApproxEqual(const SoftLabel& a, const SoftLabel& b,
                        double tol = kLabelTolerance) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

// Divides non-negative weights by their sum.
inline SoftLabel Normalize(std::span<const double> weights, std::size_t num_classes) {
  if (weights.size() != num_classes) {
    throw Error(ErrorCode::kDimensionMismatch,
                "got " + std::to_string(weights.size()) + " weights for " +
                    std::to_string(num_classes) + " classes");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "weights must be finite and non-negative");
    }
    sum += w;
  }
  if (sum <= 0.0) throw Error(ErrorCode::kAllZeroWeights, "every weight is 0");
  std::vector<double> probs(weights.begin(), weights.end());
  for (double& p : probs) p /= sum;
  return SoftLabel::FromProbs(std::move(probs));
}

inline SoftLabel Normalize(std::span<const double> weights) {
  return Normalize(weights, weights.size());
}

// normalize(sum_i weights[i] * labels[i]).
inline SoftLabel Blend(std::span<const SoftLabel> labels, std::span<const double> weights) {
  if (labels.empty() || labels.size() != weights.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "need one weight per label");
  }
  const std::size_t dim = labels.front().size();
  std::vector<double> acc(dim, 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch, "labels differ in dimension");
    }
    if (!std::isfinite(weights[i]) || weights[i] < 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "weights must be finite and non-negative");
    }
    for (std::size_t c = 0; c < dim; ++c) acc[c] += weights[i] * labels[i][c];
  }
  return Normalize(acc, dim);
}

}  // namespace sibyl

#endif  // SIBYL_LABEL_HPP_
