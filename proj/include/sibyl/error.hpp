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

#ifndef SIBYL_ERROR_HPP_
#define SIBYL_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace sibyl {

enum class ErrorCode {
  // labels and tasks
  kAllZeroWeights,
  kDimensionMismatch,
  kInvalidTask,
  // lexicon
  kMissingTable,
  kMalformedLine,
  kAsymmetricAntonym,
  kUnknownTable,
  // transforms
  kUnknownTransform,
  kTaskMismatch,
  kNotTransmutative,
  kInvalidOverride,
  kInvalidArgument,
  // mixtures
  kEmptyConstituent,
  kShapeMismatch,
  kRectOutOfBounds,
  kOddDimensions,
  kImageFormat,
  // pipeline
  kParseError,
  kLabelDimensionMismatch,
  kEmptyText,
  kEmptyVarianceClass,
  kIoError,
  // adaptive
  kIndexOutOfRange,
  kNoConfusion,
  kEmptyClassPool,
  // eval
  kKOutOfRange,
  kLengthMismatch,
  kTransport,
  kProtocolError,
};

// Coarse grouping used by the CLI to pick an exit code.
enum class ErrorKind { kConfig, kData, kTransport };

constexpr std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kAllZeroWeights: return "AllZeroWeights";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidTask: return "InvalidTask";
    case ErrorCode::kMissingTable: return "MissingTable";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kAsymmetricAntonym: return "AsymmetricAntonym";
    case ErrorCode::kUnknownTable: return "UnknownTable";
    case ErrorCode::kUnknownTransform: return "UnknownTransform";
    case ErrorCode::kTaskMismatch: return "TaskMismatch";
    case ErrorCode::kNotTransmutative: return "NotTransmutative";
    case ErrorCode::kInvalidOverride: return "InvalidOverride";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kEmptyConstituent: return "EmptyConstituent";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kRectOutOfBounds: return "RectOutOfBounds";
    case ErrorCode::kOddDimensions: return "OddDimensions";
    case ErrorCode::kImageFormat: return "ImageFormat";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kLabelDimensionMismatch: return "LabelDimensionMismatch";
    case ErrorCode::kEmptyText: return "EmptyText";
    case ErrorCode::kEmptyVarianceClass: return "EmptyVarianceClass";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kNoConfusion: return "NoConfusion";
    case ErrorCode::kEmptyClassPool: return "EmptyClassPool";
    case ErrorCode::kKOutOfRange: return "KOutOfRange";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kTransport: return "Transport";
    case ErrorCode::kProtocolError: return "ProtocolError";
  }
  return "Unknown";
}

constexpr ErrorKind KindOf(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidTask:
    case ErrorCode::kMissingTable:
    case ErrorCode::kMalformedLine:
    case ErrorCode::kAsymmetricAntonym:
    case ErrorCode::kUnknownTable:
    case ErrorCode::kUnknownTransform:
    case ErrorCode::kTaskMismatch:
    case ErrorCode::kNotTransmutative:
    case ErrorCode::kInvalidOverride:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kEmptyVarianceClass:
    case ErrorCode::kKOutOfRange:
      return ErrorKind::kConfig;
    case ErrorCode::kTransport:
      return ErrorKind::kTransport;
    default:
      return ErrorKind::kData;
  }
}

// Every failure in the library is reported as an Error carrying a stable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorKind kind() const noexcept { return KindOf(code_); }

 private:
  ErrorCode code_;
};

}  // namespace sibyl

#endif  // SIBYL_ERROR_HPP_
