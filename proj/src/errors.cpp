// Copyright 2026 The weakhist Authors
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
#include "weakhist/errors.hpp"

namespace weakhist {

std::string_view error_kind_name(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::Dimension: return "DimensionError";
    case ErrorKind::BasisMismatch: return "BasisMismatch";
    case ErrorKind::UndefinedWeakValue: return "UndefinedWeakValue";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotProjector: return "NotProjector";
    case ErrorKind::Normalization: return "NormalizationError";
    case ErrorKind::UnknownEigenvalue: return "UnknownEigenvalue";
    case ErrorKind::UndefinedABL: return "UndefinedABL";
    case ErrorKind::UndefinedWeight: return "UndefinedWeight";
    case ErrorKind::PostSelectionImpossible: return "PostSelectionImpossible";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::Fixture: return "FixtureMismatch";
    }
    return "Error";
}

bool is_computational(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::UndefinedWeakValue:
    case ErrorKind::UndefinedABL:
    case ErrorKind::UndefinedWeight:
    case ErrorKind::PostSelectionImpossible:
    case ErrorKind::Fixture:
        return true;
    default:
        return false;
    }
}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string &message)
    : Error(ErrorKind::Parse,
            std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line), column_(column), message_(message) {}

} // namespace weakhist
