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
 * Pre/post-selection scenarios with self-checking expected values.
 *
 * Two constructions are built in:
 *
 *  - "three-box": boxes {a, b, c}, pre (a + b + c)/sqrt3, post (a + b - c)/sqrt3.
 *  - "hardy": electron/positron interferometers in the pair basis
 *    {NOp_NOe, Op_Oe, NOp_Oe, Op_NOe}, with the pre-selection obtained by
 *    removing the annihilation component from the product state after the
 *    first beam splitters, and the post-selection given by both dark-port
 *    detectors clicking.
 */
#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "weakhist/histories.hpp"

namespace weakhist {

enum class ExpectKind { WeakValue, Abl, Weight, Consistency };

[[nodiscard]] std::string_view expect_kind_name(ExpectKind kind) noexcept;

struct Expectation {
    ExpectKind kind;
    std::string observable;
    double outcome = 0.0; ///< only used by Abl
    Complex value;

    friend bool operator==(const Expectation &, const Expectation &) = default;
};

struct Scenario {
    std::string name;
    Basis basis;
    State pre;
    State post;
    std::map<std::string, Observable> observables;
    /// Every named state, including pre and post.
    std::map<std::string, State> states;
    std::vector<Expectation> expected;

    /// Throws UnknownName if the observable is missing.
    [[nodiscard]] const Observable &observable(std::string_view name) const;
};

struct FixtureCheck {
    std::string name; ///< e.g. "weakvalue C"
    Complex expected;
    Complex actual;
    bool pass;
};

/// Recomputes every expected entry; tolerance 1e-10.
[[nodiscard]] std::vector<FixtureCheck> check_fixtures(const Scenario &scenario);

/// Returns `scenario` unchanged if it is well formed and every fixture holds;
/// otherwise throws (UnknownName for dangling references, Fixture for a
/// failed check).
[[nodiscard]] Scenario validated(Scenario scenario);

/// Evaluates one expectation kind for an observable.
[[nodiscard]] Complex evaluate(const Scenario &scenario, const Expectation &what);

[[nodiscard]] Scenario three_box();
[[nodiscard]] Scenario hardy();

/// Hardy pre-selection built from the product of single-particle beam
/// splitter outputs with the annihilation term projected out, expressed in
/// the pair basis.
[[nodiscard]] State hardy_preselection_from_beamsplitters();

[[nodiscard]] std::vector<std::string> builtin_names();
/// "three-box" or "hardy"; throws UnknownName.
[[nodiscard]] Scenario builtin(std::string_view name);

/// Same structure and names in both, with numeric entries compared to `tol`.
[[nodiscard]] bool equivalent(const Scenario &a, const Scenario &b, double tol = 1e-12);

} // namespace weakhist
