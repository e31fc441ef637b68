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
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace weakhist {

enum class ErrorKind {
    Dimension,
    BasisMismatch,
    UndefinedWeakValue,
    NotHermitian,
    NotProjector,
    Normalization,
    UnknownEigenvalue,
    UndefinedABL,
    UndefinedWeight,
    PostSelectionImpossible,
    InvalidArgument,
    Parse,
    UnknownName,
    Fixture,
};

/// Stable identifier used in CLI error records, e.g. "UndefinedWeakValue".
std::string_view error_kind_name(ErrorKind kind) noexcept;

/// True for failures of a well-formed computation (CLI exit code 2) as
/// opposed to bad input (exit code 1).
bool is_computational(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Parse failure with a 1-based source position.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string &message);

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }
    [[nodiscard]] const std::string &message() const noexcept { return message_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string message_;
};

} // namespace weakhist
