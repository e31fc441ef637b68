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
#include <doctest.h>

#include "weakhist/errors.hpp"
#include "weakhist/scenarios.hpp"

using namespace weakhist;

TEST_SUITE("scenarios") {

TEST_CASE("built-in names") {
    CHECK(builtin_names() == std::vector<std::string>{"three-box", "hardy"});
    CHECK(builtin("three-box").name == "three-box");
    CHECK_THROWS_AS((void)builtin("four-box"), Error);
}

TEST_CASE("three-box fixtures all hold") {
    const Scenario s = three_box();
    const auto checks = check_fixtures(s);
    CHECK(checks.size() == s.expected.size());
    for (const auto &c : checks) {
        CAPTURE(c.name);
        CHECK(c.pass);
    }
}

TEST_CASE("three-box values by hand") {
    const Scenario s = three_box();
    CHECK(std::abs(inner(s.post.vec(), s.pre.vec()) - 1.0 / 3.0) < 1e-15);
    CHECK(std::abs(weak_value(s.observable("A"), s.pre, s.post).value - 1.0) < 1e-12);
    CHECK(std::abs(weak_value(s.observable("B"), s.pre, s.post).value - 1.0) < 1e-12);
    CHECK(std::abs(weak_value(s.observable("C"), s.pre, s.post).value + 1.0) < 1e-12);
    // the other two post-selection basis states are orthogonal to phi and each other
    const CVec &p1 = s.states.at("phi1").vec();
    const CVec &p2 = s.states.at("phi2").vec();
    CHECK(std::abs(inner(p1, s.post.vec())) < 1e-15);
    CHECK(std::abs(inner(p2, s.post.vec())) < 1e-15);
    CHECK(std::abs(inner(p1, p2)) < 1e-15);
}

TEST_CASE("hardy fixtures all hold") {
    for (const auto &c : check_fixtures(hardy())) {
        CAPTURE(c.name);
        CHECK(c.pass);
    }
}

TEST_CASE("hardy pre-selection from beam splitters") {
    // Product of (NO + O)/sqrt2 for each particle has equal weight 1/2 on the
    // four pair states; removing Op_Oe and renormalizing gives 1/sqrt3 on the
    // three survivors.
    const State psi = hardy_preselection_from_beamsplitters();
    const double r3 = 1.0 / std::sqrt(3.0);
    CHECK(std::abs(psi.vec()[0] - r3) < 1e-15);
    CHECK(std::abs(psi.vec()[1]) < 1e-15);
    CHECK(std::abs(psi.vec()[2] - r3) < 1e-15);
    CHECK(std::abs(psi.vec()[3] - r3) < 1e-15);
    const Scenario h = hardy();
    CHECK(std::abs(std::norm(inner(h.post.vec(), h.pre.vec())) - 1.0 / 12.0) < 1e-12);
}

TEST_CASE("validation rejects bad fixtures and dangling names") {
    Scenario s = three_box();
    s.expected.push_back({ExpectKind::WeakValue, "C", 0.0, 1.0});
    try {
        (void)validated(s);
        FAIL("expected a fixture failure");
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::Fixture);
    }
    Scenario t = three_box();
    t.expected.push_back({ExpectKind::WeakValue, "Z", 0.0, 1.0});
    try {
        (void)validated(t);
        FAIL("expected an unknown name");
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::UnknownName);
    }
}

TEST_CASE("equivalence") {
    CHECK(equivalent(three_box(), three_box()));
    CHECK_FALSE(equivalent(three_box(), hardy()));
    Scenario s = three_box();
    s.expected.back().value += 1e-6;
    CHECK_FALSE(equivalent(three_box(), s));
}

} // TEST_SUITE
