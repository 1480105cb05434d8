// Copyright 2026 The polsim Authors
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

#include "polsim/error.h"

namespace polsim {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::ZeroVector:
            return "ZeroVector";
        case ErrorCode::NonUnitBloch:
            return "NonUnitBloch";
        case ErrorCode::NonHermitian:
            return "NonHermitian";
        case ErrorCode::ImpossibleOutcome:
            return "ImpossibleOutcome";
        case ErrorCode::LengthMismatch:
            return "LengthMismatch";
        case ErrorCode::TooManyLevels:
            return "TooManyLevels";
        case ErrorCode::ZeroSharpness:
            return "ZeroSharpness";
        case ErrorCode::InvalidSubset:
            return "InvalidSubset";
        case ErrorCode::CoefficientRange:
            return "CoefficientRange";
        case ErrorCode::ChiRange:
            return "ChiRange";
        case ErrorCode::OrthogonalSelection:
            return "OrthogonalSelection";
        case ErrorCode::EmptySample:
            return "EmptySample";
        case ErrorCode::SchemaError:
            return "SchemaError";
        case ErrorCode::RangeError:
            return "RangeError";
        case ErrorCode::CrossCheckFailure:
            return "CrossCheckFailure";
        case ErrorCode::InternalInconsistency:
            return "InternalInconsistency";
    }
    return "Unknown";
}

SimError::SimError(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {
}

void throw_error(ErrorCode code, const std::string &message) {
    throw SimError(code, message);
}

}  // namespace polsim
