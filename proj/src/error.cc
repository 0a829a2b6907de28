// Copyright 2026 The krselect Authors
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

#include "krselect/error.h"

namespace krselect {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kZeroMass: return "ZeroMass";
    case ErrorCode::kSupportMismatch: return "SupportMismatch";
    case ErrorCode::kMassMismatch: return "MassMismatch";
    case ErrorCode::kInvalidTargetIndex: return "InvalidTargetIndex";
    case ErrorCode::kEmptySample: return "EmptySample";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kDuplicatePoint: return "DuplicatePoint";
    case ErrorCode::kInvalidMetric: return "InvalidMetric";
    case ErrorCode::kEmptySubset: return "EmptySubset";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kNonFiniteCost: return "NonFiniteCost";
    case ErrorCode::kDegenerate: return "Degenerate";
    case ErrorCode::kDegenerateMargin: return "DegenerateMargin";
    case ErrorCode::kEmptyCategory: return "EmptyCategory";
    case ErrorCode::kConstantScores: return "ConstantScores";
    case ErrorCode::kZeroVariance: return "ZeroVariance";
    case ErrorCode::kDegenerateAlpha: return "DegenerateAlpha";
    case ErrorCode::kNegativeEps: return "NegativeEps";
    case ErrorCode::kRangeViolation: return "RangeViolation";
    case ErrorCode::kInvalidRho: return "InvalidRho";
    case ErrorCode::kWExceedsMass: return "WExceedsMass";
    case ErrorCode::kNotLipschitz: return "NotLipschitz";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kZeroDiameter: return "ZeroDiameter";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kInconsistentWidth: return "InconsistentWidth";
    case ErrorCode::kNegativeProbability: return "NegativeProbability";
    case ErrorCode::kMalformedHeader: return "MalformedHeader";
    case ErrorCode::kBadLabel: return "BadLabel";
    case ErrorCode::kAllMissing: return "AllMissing";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kNumericFailure: return "NumericFailure";
  }
  return "Unknown";
}

}  // namespace krselect
