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
#include "weakhist/scenarios.hpp"

#include <cmath>
#include <sstream>

#include "weakhist/errors.hpp"

namespace weakhist {

namespace {

CVec ket(const Basis &basis, std::initializer_list<Complex> amps) {
    const std::vector<Complex> v(amps);
    return CVec(basis, std::span<const Complex>(v));
}

Observable basis_projector(const Basis &basis, std::initializer_list<const char *> labels) {
    std::vector<CVec> vs;
    for (const char *l : labels) {
        vs.push_back(CVec::basis_vector(basis, l));
    }
    return Observable::from_projector(Projector::span(vs));
}

std::string check_name(const Expectation &e) {
    std::ostringstream os;
    os << expect_kind_name(e.kind) << ' ' << e.observable;
    if (e.kind == ExpectKind::Abl) {
        os.precision(12);
        os << ' ' << e.outcome;
    }
    return os.str();
}

const Basis &pair_basis() {
    static const Basis basis({"NOp_NOe", "Op_Oe", "NOp_Oe", "Op_NOe"});
    return basis;
}

} // namespace

std::string_view expect_kind_name(ExpectKind kind) noexcept {
    switch (kind) {
    case ExpectKind::WeakValue: return "weakvalue";
    case ExpectKind::Abl: return "abl";
    case ExpectKind::Weight: return "weight";
    case ExpectKind::Consistency: return "consistency";
    }
    return "?";
}

const Observable &Scenario::observable(std::string_view name) const {
    auto it = observables.find(std::string(name));
    if (it == observables.end()) {
        throw Error(ErrorKind::UnknownName,
                    "scenario '" + this->name + "' has no observable '" + std::string(name) + "'");
    }
    return it->second;
}

Complex evaluate(const Scenario &s, const Expectation &what) {
    const Observable &obs = s.observable(what.observable);
    switch (what.kind) {
    case ExpectKind::WeakValue:
        return weak_value(obs, s.pre, s.post).value;
    case ExpectKind::Abl:
        return abl_probability(obs, s.pre, s.post, what.outcome);
    case ExpectKind::Weight:
        return conditional_weight(obs.as_projector(), Projector::onto(s.pre),
                                  Projector::onto(s.post));
    case ExpectKind::Consistency:
        return consistency(Family(s.pre, obs.as_projector(), s.post)).functional;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown expectation kind");
}

std::vector<FixtureCheck> check_fixtures(const Scenario &scenario) {
    std::vector<FixtureCheck> out;
    out.reserve(scenario.expected.size());
    for (const auto &e : scenario.expected) {
        const Complex actual = evaluate(scenario, e);
        out.push_back({check_name(e), e.value, actual, std::abs(actual - e.value) <= kTolerance});
    }
    return out;
}

Scenario validated(Scenario scenario) {
    for (const State *s : {&scenario.pre, &scenario.post}) {
        auto it = scenario.states.find(s->label());
        if (it == scenario.states.end()) {
            throw Error(ErrorKind::UnknownName, "scenario '" + scenario.name + "': state '" +
                                                    s->label() + "' is not declared");
        }
        if (!(s->basis() == scenario.basis)) {
            throw Error(ErrorKind::BasisMismatch,
                        "scenario '" + scenario.name + "': pre/post basis differs");
        }
    }
    for (const auto &e : scenario.expected) {
        if (!scenario.observables.contains(e.observable)) {
            throw Error(ErrorKind::UnknownName, "scenario '" + scenario.name +
                                                    "': expectation names unknown observable '" +
                                                    e.observable + "'");
        }
    }
    for (const auto &check : check_fixtures(scenario)) {
        if (!check.pass) {
            std::ostringstream msg;
            msg.precision(12);
            msg << "scenario '" << scenario.name << "': fixture '" << check.name
                << "' expected " << check.expected << " but computed " << check.actual;
            throw Error(ErrorKind::Fixture, msg.str());
        }
    }
    return scenario;
}

Scenario three_box() {
    const Basis basis({"a", "b", "c"});
    const double r3 = 1.0 / std::sqrt(3.0);
    const double r2 = 1.0 / std::sqrt(2.0);
    const double r6 = 1.0 / std::sqrt(6.0);
    const State psi(ket(basis, {r3, r3, r3}), "psi");
    const State phi(ket(basis, {r3, r3, -r3}), "phi");
    // remaining members of the orthonormal post-selection basis
    const State phi1(ket(basis, {r2, -r2, 0.0}), "phi1");
    const State phi2(ket(basis, {r6, r6, 2.0 * r6}), "phi2");

    Scenario s{"three-box", basis, psi, phi, {}, {}, {}};
    s.states = {{"psi", psi}, {"phi", phi}, {"phi1", phi1}, {"phi2", phi2}};
    s.observables.emplace("A", basis_projector(basis, {"a"}));
    s.observables.emplace("B", basis_projector(basis, {"b"}));
    s.observables.emplace("C", basis_projector(basis, {"c"}));
    s.observables.emplace("Cp", basis_projector(basis, {"a", "b"}));
    s.observables.emplace("I", basis_projector(basis, {"a", "b", "c"}));
    s.expected = {
        {ExpectKind::WeakValue, "A", 0.0, 1.0},
        {ExpectKind::WeakValue, "B", 0.0, 1.0},
        {ExpectKind::WeakValue, "C", 0.0, -1.0},
        {ExpectKind::WeakValue, "Cp", 0.0, 2.0},
        {ExpectKind::Abl, "C", 1.0, 0.2},
        {ExpectKind::Abl, "C", 0.0, 0.8},
        {ExpectKind::Weight, "A", 0.0, 1.0},
        {ExpectKind::Weight, "B", 0.0, 1.0},
        {ExpectKind::Weight, "C", 0.0, 1.0},
        {ExpectKind::Weight, "I", 0.0, 1.0},
        {ExpectKind::Consistency, "A", 0.0, 0.0},
        {ExpectKind::Consistency, "C", 0.0, -2.0 / 9.0},
    };
    return validated(std::move(s));
}

State hardy_preselection_from_beamsplitters() {
    const Basis positron({"NOp", "Op"});
    const Basis electron({"NOe", "Oe"});
    const double r2 = 1.0 / std::sqrt(2.0);
    const CVec split = tensor(ket(positron, {r2, r2}), ket(electron, {r2, r2}));
    const CVec pair = reorder(split, pair_basis());
    const Projector annihilation = Projector::onto(CVec::basis_vector(pair_basis(), "Op_Oe"));
    return State::normalized(apply(annihilation.complement().mat(), pair), "psi");
}

Scenario hardy() {
    const Basis &basis = pair_basis();
    const double r3 = 1.0 / std::sqrt(3.0);
    const State psi(ket(basis, {r3, 0.0, r3, r3}), "psi");
    const State phi(ket(basis, {0.5, 0.5, -0.5, -0.5}), "phi");

    if (max_abs_diff(hardy_preselection_from_beamsplitters().vec(), psi.vec()) > 1e-12) {
        throw Error(ErrorKind::Fixture, "hardy: projected beam-splitter state differs from psi");
    }
    const Basis positron({"NOp", "Op"});
    const Basis electron({"NOe", "Oe"});
    const double r2 = 1.0 / std::sqrt(2.0);
    const CVec clicks =
        reorder(tensor(ket(positron, {-r2, r2}), ket(electron, {-r2, r2})), basis);
    if (max_abs_diff(clicks, phi.vec()) > 1e-12) {
        throw Error(ErrorKind::Fixture, "hardy: detector-click state differs from phi");
    }

    Scenario s{"hardy", basis, psi, phi, {}, {}, {}};
    s.states = {{"psi", psi}, {"phi", phi}};
    s.observables.emplace("N1", basis_projector(basis, {"NOp_NOe"}));
    s.observables.emplace("N2", basis_projector(basis, {"Op_Oe"}));
    s.observables.emplace("N3", basis_projector(basis, {"NOp_Oe"}));
    s.observables.emplace("N4", basis_projector(basis, {"Op_NOe"}));
    s.observables.emplace("I", basis_projector(basis, {"NOp_NOe", "Op_Oe", "NOp_Oe", "Op_NOe"}));
    s.expected = {
        {ExpectKind::WeakValue, "N1", 0.0, -1.0},
        {ExpectKind::WeakValue, "N2", 0.0, 0.0},
        {ExpectKind::WeakValue, "N3", 0.0, 1.0},
        {ExpectKind::WeakValue, "N4", 0.0, 1.0},
        {ExpectKind::WeakValue, "I", 0.0, 1.0},
        {ExpectKind::Weight, "I", 0.0, 1.0},
        {ExpectKind::Weight, "N2", 0.0, 0.0},
        {ExpectKind::Weight, "N1", 0.0, 1.0},
        {ExpectKind::Abl, "N1", 1.0, 0.2},
        {ExpectKind::Consistency, "N1", 0.0, -1.0 / 6.0},
        {ExpectKind::Consistency, "N2", 0.0, 0.0},
    };
    return validated(std::move(s));
}

std::vector<std::string> builtin_names() { return {"three-box", "hardy"}; }

Scenario builtin(std::string_view name) {
    if (name == "three-box") {
        return three_box();
    }
    if (name == "hardy") {
        return hardy();
    }
    throw Error(ErrorKind::UnknownName, "unknown built-in scenario '" + std::string(name) + "'");
}

bool equivalent(const Scenario &a, const Scenario &b, double tol) {
    if (a.name != b.name || !(a.basis == b.basis)) {
        return false;
    }
    auto same_state = [tol](const State &x, const State &y) {
        return x.label() == y.label() && x.basis() == y.basis() &&
               max_abs_diff(x.vec(), y.vec()) <= tol;
    };
    if (!same_state(a.pre, b.pre) || !same_state(a.post, b.post)) {
        return false;
    }
    if (a.states.size() != b.states.size() || a.observables.size() != b.observables.size() ||
        a.expected.size() != b.expected.size()) {
        return false;
    }
    for (const auto &[name, st] : a.states) {
        auto it = b.states.find(name);
        if (it == b.states.end() || !same_state(st, it->second)) {
            return false;
        }
    }
    for (const auto &[name, obs] : a.observables) {
        auto it = b.observables.find(name);
        if (it == b.observables.end() || !(obs.basis() == it->second.basis()) ||
            max_abs_diff(obs.mat(), it->second.mat()) > tol) {
            return false;
        }
        const auto ea = obs.eigenvalues();
        const auto eb = it->second.eigenvalues();
        if (ea.size() != eb.size()) {
            return false;
        }
        for (std::size_t i = 0; i < ea.size(); ++i) {
            if (std::abs(ea[i] - eb[i]) > tol) {
                return false;
            }
        }
    }
    for (std::size_t i = 0; i < a.expected.size(); ++i) {
        const auto &x = a.expected[i];
        const auto &y = b.expected[i];
        if (x.kind != y.kind || x.observable != y.observable ||
            std::abs(x.outcome - y.outcome) > tol || std::abs(x.value - y.value) > tol) {
            return false;
        }
    }
    return true;
}

} // namespace weakhist
