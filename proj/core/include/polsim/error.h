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

#ifndef POLSIM_ERROR_H
#define POLSIM_ERROR_H

#include <stdexcept>
#include <string>
#include <string_view>

namespace polsim {

enum class ErrorCode {
    ZeroVector,
    NonUnitBloch,
    NonHermitian,
    ImpossibleOutcome,
    LengthMismatch,
    TooManyLevels,
    ZeroSharpness,
    InvalidSubset,
    CoefficientRange,
    ChiRange,
    OrthogonalSelection,
    EmptySample,
    SchemaError,
    RangeError,
    CrossCheckFailure,
    InternalInconsistency,
};

std::string_view error_code_name(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so that
/// callers (notably the CLI) can map it to an exit status.
class SimError : public std::runtime_error {
   public:
    SimError(ErrorCode code, const std::string &message);

    ErrorCode code() const noexcept {
        return code_;
    }

   private:
    ErrorCode code_;
};

[[noreturn]] void throw_error(ErrorCode code, const std::string &message);

}  // namespace polsim

#endif
