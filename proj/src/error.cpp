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

#include "neuroscope/error.hpp"

namespace neuroscope {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kOk: return "Ok";
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kBipartiteViolation: return "BipartiteViolation";
    case ErrorCode::kCycleDetected: return "CycleDetected";
    case ErrorCode::kDanglingEdge: return "DanglingEdge";
    case ErrorCode::kDuplicateNodeId: return "DuplicateNodeId";
    case ErrorCode::kUnknownNode: return "UnknownNode";
    case ErrorCode::kMissingFile: return "MissingFile";
    case ErrorCode::kHeaderMismatch: return "HeaderMismatch";
    case ErrorCode::kRowCountMismatch: return "RowCountMismatch";
    case ErrorCode::kUnknownNodeInManifest: return "UnknownNodeInManifest";
    case ErrorCode::kNonFiniteActivation: return "NonFiniteActivation";
    case ErrorCode::kLabelOutsideClassList: return "LabelOutsideClassList";
    case ErrorCode::kInvalidMetadata: return "InvalidMetadata";
    case ErrorCode::kPredictionMismatch: return "PredictionMismatch";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kUnknownField: return "UnknownField";
    case ErrorCode::kTypeMismatch: return "TypeMismatch";
    case ErrorCode::kDuplicateSubsetId: return "DuplicateSubsetId";
    case ErrorCode::kUnknownSubset: return "UnknownSubset";
    case ErrorCode::kMemberIndexOutOfRange: return "MemberIndexOutOfRange";
    case ErrorCode::kUnknownRow: return "UnknownRow";
    case ErrorCode::kEmptyAnchorRow: return "EmptyAnchorRow";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kPerplexityInfeasible: return "PerplexityInfeasible";
    case ErrorCode::kNonFiniteEncountered: return "NonFiniteEncountered";
    case ErrorCode::kCancelled: return "Cancelled";
    case ErrorCode::kUnknownPinnedId: return "UnknownPinnedId";
    case ErrorCode::kBudgetTooSmall: return "BudgetTooSmall";
    case ErrorCode::kUnknownJob: return "UnknownJob";
    case ErrorCode::kUnknownPin: return "UnknownPin";
    case ErrorCode::kPortInUse: return "PortInUse";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInternal: return "Internal";
    case ErrorCode::kRouteNotFound: return "RouteNotFound";
  }
  return "Internal";
}

}  // namespace neuroscope
