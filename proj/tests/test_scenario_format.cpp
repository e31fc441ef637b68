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

#include <cctype>
#include <random>
#include <regex>

#include "weakhist/errors.hpp"
#include "weakhist/scenario_format.hpp"

using namespace weakhist;

namespace {

const char *const kThreeBox = R"(# three boxes, one ball
name three-box
basis a b c
state psi = (1/sqrt(3)) a + (1/sqrt(3)) b + (1/sqrt(3)) c
state phi = 1 a + 1 b - 1 c normalize
pre psi
post phi
proj A = |a><a|
proj B = |b⟩⟨b|
proj C = span(c)
proj Cp = span(a, b)
proj notC = 1 - C
obs N = 2 * A + 1 * B - 0.5 * C
expect weakvalue C = -1
expect weakvalue N = 3.5
expect abl C 1 = 0.2
expect abl C 0 = 1 - 0.2
expect weight C = 1
expect consistency C = -2/9
expect consistency A = 0
)";

const char *const kHardy = R"(name hardy-file
basis NOp_NOe OP_Oe NOp_Oe Op_NOe
state psi = √(1/3) NOp_NOe + sqrt(1/3) NOp_Oe + sqrt(1/3) Op_NOe
state phi = 0.5 NOp_NOe + 0.5 OP_Oe - 0.5 NOp_Oe - 0.5 Op_NOe
pre psi
post phi
proj N1 = span(NOp_NOe)
proj N2 = span(OP_Oe)
proj N3 = span(NOp_Oe)
proj N4 = span(Op_NOe)
)";

template <class F>
ErrorKind kind_of(F &&f) {
    try {
        f();
    } catch (const Error &e) {
        return e.kind();
    }
    FAIL("expected weakhist::Error");
    return ErrorKind::InvalidArgument;
}

ParseError parse_error(std::string_view text) {
    try {
        (void)parse_scenario(text);
    } catch (const ParseError &e) {
        return e;
    }
    FAIL("expected a ParseError");
    return ParseError(0, 0, "");
}

bool has_position(const Error &e) {
    if (const auto *pe = dynamic_cast<const ParseError *>(&e)) return pe->line() >= 1 && pe->column() >= 1;
    static const std::regex pos(R"(^[0-9]+:[0-9]+: .*)");
    return std::regex_match(std::string(e.what()), pos);
}

// Byte ranges of the tokens of `text`: runs of word characters (including
// UTF-8 continuation bytes) or single punctuation characters.
std::vector<std::pair<std::size_t, std::size_t>> token_spans(const std::string &text) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    auto word = [](unsigned char c) { return std::isalnum(c) || c == '_' || c == '.' || c == '\'' || c >= 0x80; };
    std::size_t i = 0;
    while (i < text.size()) {
        const auto c = static_cast<unsigned char>(text[i]);
        if (std::isspace(c)) {
            ++i;
        } else if (word(c)) {
            std::size_t j = i;
            while (j < text.size() && word(static_cast<unsigned char>(text[j]))) ++j;
            out.emplace_back(i, j);
            i = j;
        } else {
            out.emplace_back(i, i + 1);
            ++i;
        }
    }
    return out;
}

} // namespace

TEST_SUITE("scenario_format") {

TEST_CASE("a hand-written three-box file builds and checks its fixtures") {
    const Scenario s = parse_scenario(kThreeBox);
    CHECK(s.name == "three-box");
    CHECK(s.pre.label() == "psi");
    CHECK(std::abs(weak_value(s.observable("C"), s.pre, s.post).value + 1.0) < 1e-12);
    CHECK(std::abs(weak_value(s.observable("notC"), s.pre, s.post).value - 2.0) < 1e-12);
    CHECK(s.expected.size() == 7);
    CHECK(equivalent(s, s));
}

TEST_CASE("hardy file with its own label spelling") {
    const Scenario s = parse_scenario(kHardy);
    const double want[] = {-1.0, 0.0, 1.0, 1.0};
    const char *names[] = {"N1", "N2", "N3", "N4"};
    for (int k = 0; k < 4; ++k) {
        CHECK(std::abs(weak_value(s.observable(names[k]), s.pre, s.post).value - want[k]) < 1e-12);
    }
}

TEST_CASE("round trip: built-in scenarios survive serialization") {
    for (const auto &name : builtin_names()) {
        CAPTURE(name);
        const Scenario s = builtin(name);
        const std::string text = serialize_scenario(s);
        const Scenario back = parse_scenario(text);
        CHECK(equivalent(s, back, 0.0));
        CHECK(serialize_scenario(back) == text);
    }
}

TEST_CASE("round trip: documents survive formatting") {
    for (const char *text : {kThreeBox, kHardy}) {
        const ScenarioDoc doc = parse_document(text);
        const std::string canonical = format_document(doc);
        CHECK(parse_document(canonical) == doc);
        CHECK(format_document(parse_document(canonical)) == canonical);
    }
}

TEST_CASE("coefficient expressions") {
    const auto value = [](const char *coef) {
        const std::string text = std::string("basis a\nstate s = ") + coef + " a normalize\npre s\npost s\n"
                                 "obs O = " + coef + " * span(a)\n";
        const Scenario s = parse_scenario(text);
        return s.observable("O").eigenvalues().back();
    };
    CHECK(value("2 * 3 - 4 / 8") == doctest::Approx(5.5));
    CHECK(value("sqrt(16) + 1e-1") == doctest::Approx(4.1));
    CHECK(value("-(1 - 3)") == doctest::Approx(2.0));
    CHECK(value("√4") == doctest::Approx(2.0));
}

TEST_CASE("complex amplitudes") {
    const Scenario s = parse_scenario("basis u d\nstate s = (1/sqrt(2)) u + (0.5i*sqrt(2)) d\npre s\npost s\n");
    CHECK(std::abs(s.pre.vec()[1] - Complex(0.0, std::sqrt(0.5))) < 1e-15);
}

TEST_CASE("semantic errors") {
    CHECK(kind_of([] { (void)parse_scenario("basis a b\nstate x = 1 a + 1 b\npre x\npost x\n"); }) ==
          ErrorKind::Normalization);
    CHECK(kind_of([] { (void)parse_scenario("basis a b\nstate x = 1 q\n"); }) == ErrorKind::UnknownName);
    CHECK(kind_of([] {
              (void)parse_scenario("basis a b\nstate x = 1 a\npre x\npost x\nobs O = 1i * span(a)\n");
          }) == ErrorKind::NotHermitian);
    CHECK(kind_of([] { (void)parse_scenario("basis a b\nstate x = 1 a\npre y\n"); }) == ErrorKind::UnknownName);
    CHECK(kind_of([] { (void)parse_scenario("basis a b\nstate a = 1 b\n"); }) == ErrorKind::Parse);
    CHECK(kind_of([] {
              (void)parse_scenario("basis a b\nstate x = 1 a\npre x\npost x\nproj P = span(a)\n"
                                   "expect weakvalue P = 0.5\n");
          }) == ErrorKind::Fixture);
}

TEST_CASE("semantic errors carry the statement position") {
    try {
        (void)parse_scenario("basis a b\n\nstate x = 1 a + 1 b\n");
        FAIL("expected an error");
    } catch (const Error &e) {
        CHECK(std::string(e.what()).rfind("3:1: ", 0) == 0);
    }
}

TEST_CASE("syntax errors report line and column") {
    const ParseError e1 = parse_error("basis a b\nstate x 1 a\n");
    CHECK(e1.line() == 2);
    CHECK(e1.column() == 9);
    const ParseError e2 = parse_error("basis a b\nstate x = (1 a\n");
    CHECK(e2.line() == 2);
    const ParseError e3 = parse_error("basis a b\nfrobnicate\n");
    CHECK(e3.line() == 2);
    CHECK(e3.column() == 1);
    CHECK(std::string(e3.what()).rfind("2:1:", 0) == 0);
    const ParseError e4 = parse_error("basis a b\nstate x = 1 a $\n");
    CHECK(e4.line() == 2);
    CHECK(e4.column() == 15);
}

TEST_CASE("missing statements") {
    CHECK(kind_of([] { (void)parse_scenario("basis a\n"); }) == ErrorKind::Parse);
    CHECK(kind_of([] { (void)parse_scenario("state x = 1 a\n"); }) == ErrorKind::Parse);
}

TEST_CASE("fuzz: single-token deletions never crash and errors are positioned") {
    const std::string base = kThreeBox;
    const auto spans = token_spans(base);
    REQUIRE(spans.size() > 100);
    std::mt19937_64 rng(20261015);
    std::uniform_int_distribution<std::size_t> pick(0, spans.size() - 1);
    int rejected = 0, accepted = 0, unpositioned = 0, foreign = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto [b, e] = spans[pick(rng)];
        const std::string mutated = base.substr(0, b) + base.substr(e);
        try {
            (void)parse_scenario(mutated);
            ++accepted;
        } catch (const Error &err) {
            ++rejected;
            if (!has_position(err)) {
                ++unpositioned;
                MESSAGE("unpositioned: " << err.what());
            }
        } catch (...) {
            ++foreign;
        }
    }
    MESSAGE("fuzz: " << rejected << " rejected, " << accepted << " accepted");
    CHECK(foreign == 0);
    CHECK(unpositioned == 0);
    CHECK(rejected + accepted == 1000);
    CHECK(rejected > accepted);
}

TEST_CASE("fuzz: deleting any structural token is rejected") {
    const std::string base = kThreeBox;
    int checked = 0;
    for (const auto &[b, e] : token_spans(base)) {
        const std::string tok = base.substr(b, e - b);
        // keywords and punctuation are required wherever they appear
        const bool structural = tok == "basis" || tok == "state" || tok == "pre" || tok == "post" ||
                                tok == "proj" || tok == "obs" || tok == "expect" || tok == "=" ||
                                tok == "(" || tok == ")" || tok == "|" || tok == "<" || tok == ">" ||
                                tok == "span" || tok == "sqrt";
        if (!structural) continue;
        // a comment line has no structure
        if (base.rfind('#', b) != std::string::npos && base.find('\n', base.rfind('#', b)) > b) continue;
        ++checked;
        const std::string mutated = base.substr(0, b) + base.substr(e);
        CAPTURE(b);
        CAPTURE(tok);
        bool threw = false;
        try {
            (void)parse_scenario(mutated);
        } catch (const Error &err) {
            threw = true;
            CHECK(has_position(err));
        }
        CHECK(threw);
    }
    CHECK(checked > 50);
}

} // TEST_SUITE
