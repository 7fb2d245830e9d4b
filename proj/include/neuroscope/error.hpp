// Copyright 2026 The Neuroscope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NEUROSCOPE_ERROR_HPP_
#define NEUROSCOPE_ERROR_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace neuroscope {

// Values are part of the C ABI (see neuroscope.h); append only.
enum class ErrorCode : int {
  kOk = 0,
  kSyntaxError = 1,
  kBipartiteViolation = 2,
  kCycleDetected = 3,
  kDanglingEdge = 4,
  kDuplicateNodeId = 5,
  kUnknownNode = 6,
  kMissingFile = 7,
  kHeaderMismatch = 8,
  kRowCountMismatch = 9,
  kUnknownNodeInManifest = 10,
  kNonFiniteActivation = 11,
  kLabelOutsideClassList = 12,
  kInvalidMetadata = 13,
  kPredictionMismatch = 14,
  kIndexOutOfRange = 15,
  kUnknownField = 16,
  kTypeMismatch = 17,
  kDuplicateSubsetId = 18,
  kUnknownSubset = 19,
  kMemberIndexOutOfRange = 20,
  kUnknownRow = 21,
  kEmptyAnchorRow = 22,
  kDegenerateInput = 23,
  kPerplexityInfeasible = 24,
  kNonFiniteEncountered = 25,
  kCancelled = 26,
  kUnknownPinnedId = 27,
  kBudgetTooSmall = 28,
  kUnknownJob = 29,
  kUnknownPin = 30,
  kPortInUse = 31,
  kInvalidArgument = 32,
  kIoError = 33,
  kInternal = 34,
  kRouteNotFound = 35,
};

// Stable machine-readable name, e.g. "HeaderMismatch".
std::string_view error_code_name(ErrorCode code) noexcept;

// Every failure in the core is reported as an Error. `position` is set by
// parsers (byte offset into the source text).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> position = std::nullopt)
      : std::runtime_error(message), code_(code), position_(position) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> position() const noexcept { return position_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> position_;
};

}  // namespace neuroscope

#endif  // NEUROSCOPE_ERROR_HPP_
