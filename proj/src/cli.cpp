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
#include "weakhist/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "weakhist/errors.hpp"
#include "weakhist/histories.hpp"
#include "weakhist/pointer.hpp"
#include "weakhist/run_result.hpp"
#include "weakhist/scenario_format.hpp"

namespace weakhist {

namespace {

constexpr std::string_view kBuiltinPrefix = "builtin:";

std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': break;
        default: out += c;
        }
    }
    return out;
}

void error_record(std::ostream &err, std::string_view kind, int code, std::string_view message) {
    err << "error kind=" << kind << " exit=" << code << " message=\"" << escape(message)
        << "\"\n";
}

struct Options {
    std::string source;
    std::string obs;
    double outcome = 0.0;
    double delta = 10.0;
    double x0 = 0.0;
    double coupling = 1.0;
    std::size_t n = 100000;
    std::uint64_t seed = 0;
    std::size_t grid_points = kDefaultGridPoints;
    unsigned threads = 0;
    std::string density_out;
    std::string samples_out;
};

void provenance(RunResult &r, const Scenario &s, const Options &o) {
    r.set("scenario", s.name);
    r.set("source", o.source);
    r.set("pre", s.pre.label());
    r.set("post", s.post.label());
}

RunResult cmd_weakvalue(const Options &o) {
    const Scenario s = load_scenario(o.source);
    const auto report = weak_value(s.observable(o.obs), s.pre, s.post);
    RunResult r("weakvalue");
    provenance(r, s, o);
    r.set("observable", o.obs);
    r.set_complex("weak_value", report.value);
    r.set("class", std::string(class_name(report.cls)));
    r.set_complex("overlap", report.overlap);
    return r;
}

RunResult cmd_consistency(const Options &o) {
    const Scenario s = load_scenario(o.source);
    const auto report = consistency(Family(s.pre, s.observable(o.obs).as_projector(), s.post));
    RunResult r("consistency");
    provenance(r, s, o);
    r.set("observable", o.obs);
    r.set_complex("functional", report.functional);
    r.set_bool("consistent", report.consistent);
    r.set("failure_mode", std::string(failure_mode_name(report.failure_mode)));
    if (report.factors) {
        r.set_real("factor_overlap_sq", report.factors->overlap_sq);
        r.set_complex("factor_wv", report.factors->wv);
        r.set_complex("factor_wv_conj", report.factors->wv_conj);
    } else {
        r.set("factor_overlap_sq", "undefined");
        r.set("factor_wv", "undefined");
        r.set("factor_wv_conj", "undefined");
    }
    return r;
}

RunResult cmd_abl(const Options &o) {
    const Scenario s = load_scenario(o.source);
    RunResult r("abl");
    provenance(r, s, o);
    r.set("observable", o.obs);
    r.set_real("outcome", o.outcome);
    r.set_real("abl_probability", abl_probability(s.observable(o.obs), s.pre, s.post, o.outcome));
    return r;
}

RunResult cmd_weight(const Options &o) {
    const Scenario s = load_scenario(o.source);
    const Projector e = s.observable(o.obs).as_projector();
    const Projector d = Projector::onto(s.pre);
    const Projector f = Projector::onto(s.post);
    RunResult r("weight");
    provenance(r, s, o);
    r.set("observable", o.obs);
    r.set_real("conditional_weight", conditional_weight(e, d, f));
    r.set_real("history_weight", history_weight(History(d, e, f)));
    return r;
}

RunResult cmd_simulate(const Options &o) {
    const Scenario s = load_scenario(o.source);
    const Observable &obs = s.observable(o.obs);
    PointerConfig cfg;
    cfg.delta = o.delta;
    cfg.x0 = o.x0;
    cfg.coupling = o.coupling;
    cfg.validate();

    PostSelection ps = postselect(entangle(obs, s.pre, cfg), s.post);
    if (o.grid_points != kDefaultGridPoints) {
        PointerGrid g = effective_grid(ps, cfg);
        g.n_points = o.grid_points;
        cfg.grid = g;
        cfg.validate();
    }
    const PointerDensity density = pointer_density(ps, cfg);
    const PointerEnsemble ens = sample(density, o.n, o.seed, o.threads);

    if (!o.density_out.empty()) {
        std::ofstream f(o.density_out);
        if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write '" + o.density_out + "'");
        write_density_csv(f, density);
    }
    if (!o.samples_out.empty()) {
        std::ofstream f(o.samples_out);
        if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write '" + o.samples_out + "'");
        write_samples_csv(f, ens);
    }

    RunResult r("simulate");
    provenance(r, s, o);
    r.set("observable", o.obs);
    r.set_real("delta", cfg.delta);
    r.set_real("x0", cfg.x0);
    r.set_real("coupling", cfg.coupling);
    r.set_int("n", o.n);
    r.set_int("seed", o.seed);
    r.set_int("grid_points", density.x.size());
    r.set_real("estimate", weak_value_estimate(ens, cfg));
    r.set_real("sample_mean", ens.mean);
    r.set_real("sample_variance", ens.variance);
    r.set_real("exact_mean", density.exact.mean);
    r.set_real("exact_variance", density.exact.variance);
    r.set_real("grid_mean", density.grid_mean);
    r.set_real("postselect_rate", ps.rate);
    try {
        r.set_complex("weak_value", weak_value(obs, s.pre, s.post).value);
    } catch (const Error &) {
        r.set("weak_value", "undefined");
    }
    return r;
}

std::pair<RunResult, bool> cmd_verify(const Options &o) {
    const Scenario s = load_scenario(o.source, /*check_fixtures=*/false);
    RunResult r("verify");
    provenance(r, s, o);
    const auto checks = check_fixtures(s);
    bool all = true;
    for (const auto &c : checks) {
        all = all && c.pass;
        r.set("check." + c.name, std::string(c.pass ? "PASS" : "FAIL") + " expected=" +
                                     format_complex(c.expected) +
                                     " actual=" + format_complex(c.actual));
    }
    r.set_int("checks", checks.size());
    r.set_bool("all_passed", all);
    return {r, all};
}

} // namespace

Scenario load_scenario(std::string_view source, bool check) {
    if (source.starts_with(kBuiltinPrefix)) {
        return builtin(source.substr(kBuiltinPrefix.size()));
    }
    std::ifstream in{std::string(source)};
    if (!in) {
        throw Error(ErrorKind::InvalidArgument, "cannot open scenario file '" + std::string(source) + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const ScenarioDoc doc = parse_document(buf.str());
    return check ? build_scenario(doc) : build_scenario_unchecked(doc);
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Weak values and history consistency for pre- and post-selected "
                 "finite-dimensional systems",
                 "weakhist"};
    app.require_subcommand(1);
    Options o;

    const char *src_help = "builtin:three-box, builtin:hardy or a scenario file";
    auto add_source = [&](CLI::App *sub) { sub->add_option("source", o.source, src_help)->required(); };
    auto add_obs = [&](CLI::App *sub) { sub->add_option("--obs", o.obs, "Observable name")->required(); };

    auto *wv = app.add_subcommand("weakvalue", "Weak value and its SWV/UWV/STWV class");
    add_source(wv);
    add_obs(wv);
    auto *cons = app.add_subcommand("consistency", "Consistency functional Tr[F E D (1-E)]");
    add_source(cons);
    add_obs(cons);
    auto *abl = app.add_subcommand("abl", "ABL probability of an outcome");
    add_source(abl);
    add_obs(abl);
    abl->add_option("--outcome", o.outcome, "Eigenvalue")->required();
    auto *weight = app.add_subcommand("weight", "Conditional weight Tr[DEFE]/Tr[DF]");
    add_source(weight);
    add_obs(weight);
    auto *sim = app.add_subcommand("simulate", "Monte Carlo pointer measurement");
    add_source(sim);
    add_obs(sim);
    sim->add_option("--delta", o.delta, "Pointer spread")->required()->check(CLI::PositiveNumber);
    sim->add_option("--n", o.n, "Number of samples")->required()->check(CLI::PositiveNumber);
    sim->add_option("--seed", o.seed, "RNG seed")->required();
    sim->add_option("--x0", o.x0, "Pointer ready position");
    sim->add_option("--coupling", o.coupling, "Pointer shift per unit eigenvalue");
    sim->add_option("--grid-points", o.grid_points, "Density grid size")->check(CLI::Range(2, 1 << 24));
    sim->add_option("--threads", o.threads, "Sampling threads (0 = all cores)");
    sim->add_option("--density-out", o.density_out, "Write density CSV (x,p_x)");
    sim->add_option("--samples-out", o.samples_out, "Write samples CSV (index,x)");
    auto *verify = app.add_subcommand("verify", "Recompute every expected value of a scenario");
    add_source(verify);
    auto *exp = app.add_subcommand("export", "Print a scenario in the text format");
    add_source(exp);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kExitOk;
        }
        error_record(err, "UsageError", kExitUsage, e.what());
        return kExitUsage;
    }

    try {
        if (wv->parsed()) {
            out << cmd_weakvalue(o).to_text();
        } else if (cons->parsed()) {
            out << cmd_consistency(o).to_text();
        } else if (abl->parsed()) {
            out << cmd_abl(o).to_text();
        } else if (weight->parsed()) {
            out << cmd_weight(o).to_text();
        } else if (sim->parsed()) {
            out << cmd_simulate(o).to_text();
        } else if (verify->parsed()) {
            auto [r, all] = cmd_verify(o);
            out << r.to_text();
            if (!all) {
                error_record(err, error_kind_name(ErrorKind::Fixture), kExitComputation,
                             "one or more fixture checks failed");
                return kExitComputation;
            }
        } else if (exp->parsed()) {
            out << serialize_scenario(load_scenario(o.source));
        }
    } catch (const Error &e) {
        const int code = is_computational(e.kind()) ? kExitComputation : kExitUsage;
        error_record(err, error_kind_name(e.kind()), code, e.what());
        return code;
    } catch (const std::exception &e) {
        error_record(err, "InternalError", kExitComputation, e.what());
        return kExitComputation;
    }
    return kExitOk;
}

} // namespace weakhist
