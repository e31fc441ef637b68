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
/**
 * @file
 * Line-oriented scenario text format.
 *
 *     # comment
 *     name three-box
 *     basis a b c
 *     state psi = (1/sqrt(3)) a + (1/sqrt(3)) b + (1/sqrt(3)) c
 *     state phi = 1 a + 1 b - 1 c normalize
 *     pre psi
 *     post phi
 *     proj C = |c><c|              # also |c⟩⟨c|
 *     proj Cp = span(a, b)
 *     proj D = 1 - C
 *     obs O = 1*C + 0*Cp
 *     expect weakvalue C = -1
 *     expect abl C 1 = 0.2         # outcome between name and '='
 *     expect weight C = 1
 *     expect consistency C = -2/9
 *
 * Coefficients are complex expressions over decimal literals, imaginary
 * literals such as `0.5i`, `+ - * /`, parentheses and `sqrt(...)` (or `√`).
 * A vector term is `[coef [*]] name` where name is a basis label or an
 * earlier state. States must be unit norm within 1e-6 unless followed by
 * `normalize`. Names must be declared before use.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "weakhist/scenarios.hpp"

namespace weakhist {

struct SourcePos {
    std::size_t line = 0;
    std::size_t column = 0;
};

/// Coefficient expression tree.
struct Expr {
    enum class Op { Number, Neg, Add, Sub, Mul, Div, Sqrt };

    Op op = Op::Number;
    double number = 0.0;    ///< Number only
    bool imaginary = false; ///< Number only: literal carried an 'i' suffix
    std::vector<Expr> args;

    [[nodiscard]] Complex evaluate() const;
    friend bool operator==(const Expr &, const Expr &) = default;
};

struct VecTerm {
    bool negated = false;
    std::optional<Expr> coef;
    std::string name;
    friend bool operator==(const VecTerm &, const VecTerm &) = default;
};

struct VecExpr {
    std::vector<VecTerm> terms;
    friend bool operator==(const VecExpr &, const VecExpr &) = default;
};

struct ProjExpr {
    enum class Kind { Ref, Ket, Span, Complement };
    Kind kind = Kind::Ref;
    std::string name;           ///< Ref, Ket, Complement
    std::vector<VecExpr> span;  ///< Span
    friend bool operator==(const ProjExpr &, const ProjExpr &) = default;
};

struct ObsTerm {
    bool negated = false;
    Expr coef;
    ProjExpr proj;
    friend bool operator==(const ObsTerm &, const ObsTerm &) = default;
};

struct NameStmt { std::string name; friend bool operator==(const NameStmt &, const NameStmt &) = default; };
struct BasisStmt { std::vector<std::string> labels; friend bool operator==(const BasisStmt &, const BasisStmt &) = default; };
struct StateStmt {
    std::string name;
    VecExpr vec;
    bool normalize = false;
    friend bool operator==(const StateStmt &, const StateStmt &) = default;
};
struct SelectStmt {
    bool is_pre = true;
    std::string name;
    friend bool operator==(const SelectStmt &, const SelectStmt &) = default;
};
struct ProjStmt {
    std::string name;
    ProjExpr proj;
    friend bool operator==(const ProjStmt &, const ProjStmt &) = default;
};
struct ObsStmt {
    std::string name;
    std::vector<ObsTerm> terms;
    friend bool operator==(const ObsStmt &, const ObsStmt &) = default;
};
struct ExpectStmt {
    ExpectKind kind = ExpectKind::WeakValue;
    std::string observable;
    std::optional<Expr> outcome;
    Expr value;
    friend bool operator==(const ExpectStmt &, const ExpectStmt &) = default;
};

using Statement =
    std::variant<NameStmt, BasisStmt, StateStmt, SelectStmt, ProjStmt, ObsStmt, ExpectStmt>;

struct PositionedStatement {
    Statement stmt;
    SourcePos pos; ///< not part of equality
    friend bool operator==(const PositionedStatement &a, const PositionedStatement &b) {
        return a.stmt == b.stmt;
    }
};

struct ScenarioDoc {
    std::vector<PositionedStatement> statements;
    friend bool operator==(const ScenarioDoc &, const ScenarioDoc &) = default;
};

/// Syntax only. Throws ParseError with a line/column.
[[nodiscard]] ScenarioDoc parse_document(std::string_view text);

/// Canonical text; parse_document(format_document(d)) == d.
[[nodiscard]] std::string format_document(const ScenarioDoc &doc);

/// Resolves names and builds the scenario. Errors carry a "line:column: "
/// prefix and keep their kind (UnknownName, Normalization, NotHermitian, ...).
[[nodiscard]] Scenario build_scenario(const ScenarioDoc &doc);

/// Like build_scenario but skips the fixture self-check (used by `verify`,
/// which reports failing fixtures instead of refusing the file).
[[nodiscard]] Scenario build_scenario_unchecked(const ScenarioDoc &doc);

/// parse_document + build_scenario.
[[nodiscard]] Scenario parse_scenario(std::string_view text);

/// Scenario -> document with decimal amplitudes that reproduce every double
/// exactly.
[[nodiscard]] ScenarioDoc to_document(const Scenario &scenario);

/// format_document(to_document(s)).
[[nodiscard]] std::string serialize_scenario(const Scenario &scenario);

} // namespace weakhist
