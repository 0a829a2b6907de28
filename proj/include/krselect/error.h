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

#ifndef KRSELECT_ERROR_H_
#define KRSELECT_ERROR_H_

#include <stdexcept>
#include <string>

namespace krselect {

// Every failure raised by the library carries one of these codes. The C API
// maps them one-to-one onto kr_status values.
enum class ErrorCode {
  kZeroMass = 1,
  kSupportMismatch,
  kMassMismatch,
  kInvalidTargetIndex,
  kEmptySample,
  kDimensionMismatch,
  kDuplicatePoint,
  kInvalidMetric,
  kEmptySubset,
  kIndexOutOfRange,
  kNonFiniteCost,
  kDegenerate,
  kDegenerateMargin,
  kEmptyCategory,
  kConstantScores,
  kZeroVariance,
  kDegenerateAlpha,
  kNegativeEps,
  kRangeViolation,
  kInvalidRho,
  kWExceedsMass,
  kNotLipschitz,
  kSingleClass,
  kZeroDiameter,
  kTooLarge,
  kMalformedLine,
  kInconsistentWidth,
  kNegativeProbability,
  kMalformedHeader,
  kBadLabel,
  kAllMissing,
  kInvalidArgument,
  kIoError,
  kNumericFailure,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace krselect

#endif  // KRSELECT_ERROR_H_
