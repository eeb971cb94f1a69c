// Copyright 2026 The qtransfer Authors
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
#include "qtransfer/errors.hpp"

namespace qtransfer {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotUnitTrace: return "NotUnitTrace";
    case ErrorCode::NotPhysical: return "NotPhysical";
    case ErrorCode::NotAnticommuting: return "NotAnticommuting";
    case ErrorCode::NotIdempotentSquare: return "NotIdempotentSquare";
    case ErrorCode::InconsistentSquares: return "InconsistentSquares";
    case ErrorCode::UnverifiedSubalgebra: return "UnverifiedSubalgebra";
    case ErrorCode::NormTooLarge: return "NormTooLarge";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotEnumerable: return "NotEnumerable";
    case ErrorCode::TooManySequences: return "TooManySequences";
    case ErrorCode::DegenerateSeed: return "DegenerateSeed";
    case ErrorCode::InvalidSeed: return "InvalidSeed";
    case ErrorCode::BranchAmbiguity: return "BranchAmbiguity";
    case ErrorCode::IntegratorFailure: return "IntegratorFailure";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace qtransfer
