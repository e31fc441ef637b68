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
#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "weakhist/cli.hpp"
#include "weakhist/errors.hpp"
#include "weakhist/histories.hpp"
#include "weakhist/pointer.hpp"
#include "weakhist/scenario_format.hpp"
#include "weakhist/scenarios.hpp"

namespace py = pybind11;
using namespace weakhist;

namespace {

Basis basis_for(Eigen::Index dim) { return Basis::indexed(static_cast<std::size_t>(dim)); }

State state_from(const Eigen::VectorXcd &v, const char *label) {
    return State::normalized(CVec(basis_for(v.size()), v), label);
}

Projector projector_from(const Eigen::MatrixXcd &m) { return Projector(CMat(basis_for(m.rows()), m)); }

// Copies into a fresh numpy array owned by Python.
py::array_t<double> to_array(const std::vector<double> &v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::dict consistency_dict(const ConsistencyReport &r) {
    py::dict d;
    d["functional"] = r.functional;
    d["consistent"] = r.consistent;
    d["failure_mode"] = std::string(failure_mode_name(r.failure_mode));
    if (r.factors) {
        d["overlap_sq"] = r.factors->overlap_sq;
        d["weak_value"] = r.factors->wv;
        d["complement_weak_value_conj"] = r.factors->wv_conj;
    }
    return d;
}

py::dict simulate_dict(const Scenario &s, const std::string &obs, double delta, std::size_t n,
                       std::uint64_t seed, double x0, double coupling, unsigned threads) {
    PointerConfig cfg;
    cfg.delta = delta;
    cfg.x0 = x0;
    cfg.coupling = coupling;
    cfg.validate();
    SimulationResult r;
    {
        py::gil_scoped_release release;
        r = simulate(s.observable(obs), s.pre, s.post, cfg, n, seed, threads);
    }
    const auto &ens = r.ensemble;
    py::dict d;
    d["estimate"] = r.estimate;
    d["mean"] = ens.mean;
    d["variance"] = ens.variance;
    d["exact_mean"] = ens.density.exact.mean;
    d["exact_variance"] = ens.density.exact.variance;
    d["postselect_rate"] = ens.postselect_rate;
    d["samples"] = to_array(ens.samples);
    d["x"] = to_array(ens.density.x);
    d["p_x"] = to_array(ens.density.p);
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Weak values and history consistency for pre/post-selected systems";

    // The module keeps both types alive, so plain handles suffice here.
    static const py::handle error_type = py::exception<Error>(m, "WeakhistError").release();
    static const py::handle parse_error_type =
        py::exception<ParseError>(m, "ScenarioParseError", error_type).release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ParseError &e) {
            py::object exc = parse_error_type(e.what());
            exc.attr("kind") = std::string(error_kind_name(e.kind()));
            exc.attr("line") = e.line();
            exc.attr("column") = e.column();
            PyErr_SetObject(parse_error_type.ptr(), exc.ptr());
        } catch (const Error &e) {
            py::object exc = error_type(e.what());
            exc.attr("kind") = std::string(error_kind_name(e.kind()));
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    py::class_<Scenario>(m, "Scenario")
        .def_readonly("name", &Scenario::name)
        .def_property_readonly("basis", [](const Scenario &s) { return s.basis.labels(); })
        .def_property_readonly("pre", [](const Scenario &s) { return s.pre.vec().amplitudes(); })
        .def_property_readonly("post", [](const Scenario &s) { return s.post.vec().amplitudes(); })
        .def_property_readonly("pre_label", [](const Scenario &s) { return s.pre.label(); })
        .def_property_readonly("post_label", [](const Scenario &s) { return s.post.label(); })
        .def_property_readonly("observables",
                               [](const Scenario &s) {
                                   std::vector<std::string> names;
                                   for (const auto &[k, v] : s.observables) names.push_back(k);
                                   return names;
                               })
        .def("matrix", [](const Scenario &s, const std::string &obs) { return s.observable(obs).mat().entries(); },
             py::arg("obs"))
        .def("eigenvalues", [](const Scenario &s, const std::string &obs) { return s.observable(obs).eigenvalues(); },
             py::arg("obs"))
        .def(
            "weak_value",
            [](const Scenario &s, const std::string &obs) {
                const auto r = weak_value(s.observable(obs), s.pre, s.post);
                return py::make_tuple(r.value, std::string(class_name(r.cls)));
            },
            py::arg("obs"), "(value, class) with class one of SWV, UWV, STWV")
        .def(
            "consistency",
            [](const Scenario &s, const std::string &obs) {
                return consistency_dict(consistency(Family(s.pre, s.observable(obs).as_projector(), s.post)));
            },
            py::arg("obs"))
        .def(
            "abl",
            [](const Scenario &s, const std::string &obs, double outcome) {
                return abl_probability(s.observable(obs), s.pre, s.post, outcome);
            },
            py::arg("obs"), py::arg("outcome"))
        .def(
            "weight",
            [](const Scenario &s, const std::string &obs) {
                return conditional_weight(s.observable(obs).as_projector(), Projector::onto(s.pre),
                                          Projector::onto(s.post));
            },
            py::arg("obs"))
        .def("simulate", &simulate_dict, py::arg("obs"), py::arg("delta"), py::arg("n"), py::arg("seed"),
             py::arg("x0") = 0.0, py::arg("coupling") = 1.0, py::arg("threads") = 0u)
        .def("verify",
             [](const Scenario &s) {
                 py::list out;
                 for (const auto &c : check_fixtures(s)) out.append(py::make_tuple(c.name, c.expected, c.actual, c.pass));
                 return out;
             })
        .def("serialize", [](const Scenario &s) { return serialize_scenario(s); })
        .def("__repr__", [](const Scenario &s) { return "<weakhist.Scenario '" + s.name + "'>"; });

    m.def("builtin_names", &builtin_names);
    m.def("builtin", [](const std::string &name) { return builtin(name); }, py::arg("name"));
    m.def("parse_scenario", [](const std::string &text) { return parse_scenario(text); }, py::arg("text"));
    m.def("load", [](const std::string &source) { return load_scenario(source); }, py::arg("source"),
          "Load 'builtin:<name>' or a scenario file");

    m.def(
        "weak_value",
        [](const Eigen::MatrixXcd &op, const Eigen::VectorXcd &pre, const Eigen::VectorXcd &post) {
            const Observable obs = spectral_decompose(CMat(basis_for(op.rows()), op));
            const auto r = weak_value(obs, state_from(pre, "pre"), state_from(post, "post"));
            return py::make_tuple(r.value, std::string(class_name(r.cls)));
        },
        py::arg("op"), py::arg("pre"), py::arg("post"),
        "Weak value of a Hermitian matrix between normalized pre and post states");
    m.def(
        "consistency",
        [](const Eigen::VectorXcd &pre, const Eigen::MatrixXcd &e, const Eigen::VectorXcd &post) {
            return consistency_dict(consistency(Family(state_from(pre, "pre"), projector_from(e), state_from(post, "post"))));
        },
        py::arg("pre"), py::arg("e"), py::arg("post"));
    m.def(
        "abl",
        [](const Eigen::MatrixXcd &op, const Eigen::VectorXcd &pre, const Eigen::VectorXcd &post, double outcome) {
            const Observable obs = spectral_decompose(CMat(basis_for(op.rows()), op));
            return abl_probability(obs, state_from(pre, "pre"), state_from(post, "post"), outcome);
        },
        py::arg("op"), py::arg("pre"), py::arg("post"), py::arg("outcome"));
    m.def("abl_from_weak_value", &abl_from_weak_values, py::arg("w"));
    m.def(
        "conditional_weight",
        [](const Eigen::MatrixXcd &e, const Eigen::MatrixXcd &d, const Eigen::MatrixXcd &f) {
            return conditional_weight(projector_from(e), projector_from(d), projector_from(f));
        },
        py::arg("e"), py::arg("d"), py::arg("f"));
    m.def(
        "run_cli",
        [](const std::vector<std::string> &args) {
            std::ostringstream out, err;
            const int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run a command line; returns (exit_code, stdout, stderr)");
}
