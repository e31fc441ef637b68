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

#include <algorithm>
#include <array>
#include <numbers>
#include <sstream>

#include "test_support.hpp"
#include "weakhist/errors.hpp"
#include "weakhist/pointer.hpp"

using namespace weakhist;
using weakhist::testing::Rng;

namespace {

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

const Basis kBoxes({"a", "b", "c"});

State box_state(double a, double b, double c, const char *label) {
    const std::array<Complex, 3> v{a, b, c};
    return State::normalized(CVec(kBoxes, std::span<const Complex>(v)), label);
}

const State kPsi = box_state(1, 1, 1, "psi");
const State kPhi = box_state(1, 1, -1, "phi");
const Observable kC = Observable::from_projector(Projector::onto(CVec::basis_vector(kBoxes, "c")));

// Independent model of the post-selected pointer: branch amplitudes from the
// spectral projectors, density |sum_k a_k G(x; c_k)|^2 written out directly.
struct Oracle {
    std::vector<std::pair<double, Complex>> branches; // centre, amplitude
    double delta;

    Oracle(const Observable &obs, const State &pre, const State &post, const PointerConfig &cfg)
        : delta(cfg.delta) {
        for (const auto &t : obs.spectrum()) {
            const Complex a = inner(post.vec(), apply(t.projector.mat(), pre.vec()));
            branches.emplace_back(cfg.x0 + cfg.coupling * t.eigenvalue, a);
        }
    }

    double unnormalized(double x) const {
        Complex psi = 0.0;
        for (const auto &[c, a] : branches) {
            const double g = std::pow(2.0 * std::numbers::pi * delta * delta, -0.25) *
                             std::exp(-(x - c) * (x - c) / (4.0 * delta * delta));
            psi += a * g;
        }
        return std::norm(psi);
    }

    double lo() const { return -1.0 - 14.0 * delta; }
    double hi() const { return 2.0 + 14.0 * delta; }

    double weight() const {
        return testing::simpson([&](double x) { return unnormalized(x); }, lo(), hi(), 200000);
    }
    double mean() const {
        return testing::simpson([&](double x) { return x * unnormalized(x); }, lo(), hi(), 200000) /
               weight();
    }
    double variance() const {
        const double m = mean();
        return testing::simpson([&](double x) { return (x - m) * (x - m) * unnormalized(x); }, lo(),
                                hi(), 200000) /
               weight();
    }
    double mass(double a, double b) const {
        return testing::simpson([&](double x) { return unnormalized(x); }, a, b, 200000) / weight();
    }
};

PostSelection three_box_ps(const PointerConfig &cfg) {
    return postselect(entangle(kC, kPsi, cfg), kPhi);
}

} // namespace

TEST_SUITE("pointer") {

TEST_CASE("config validation") {
    PointerConfig cfg;
    cfg.delta = 0.0;
    CHECK(kind_of([&] { cfg.validate(); }) == ErrorKind::InvalidArgument);
    cfg.delta = 1.0;
    cfg.grid = PointerGrid{1.0, 0.0, 100};
    CHECK(kind_of([&] { cfg.validate(); }) == ErrorKind::InvalidArgument);
    cfg.grid = PointerGrid{0.0, 1.0, 1};
    CHECK(kind_of([&] { cfg.validate(); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("entangle places one branch per eigenvalue") {
    PointerConfig cfg;
    cfg.x0 = 3.0;
    cfg.coupling = 2.0;
    const BranchState bs = entangle(kC, kPsi, cfg);
    REQUIRE(bs.branches.size() == 2);
    CHECK(bs.branches[0].center == doctest::Approx(3.0));
    CHECK(bs.branches[1].center == doctest::Approx(5.0));
    // ||P_c psi||^2 = 1/3
    CHECK(std::abs(bs.branches[1].component.norm() - std::sqrt(1.0 / 3.0)) < 1e-14);
}

TEST_CASE("post-selection amplitudes and rate") {
    PointerConfig cfg;
    cfg.delta = 0.01;
    const PostSelection ps = three_box_ps(cfg);
    REQUIRE(ps.amplitudes.size() == 2);
    // <phi|(1-P_c)|psi> = 2/3, <phi|P_c|psi> = -1/3; branches far apart so rate = 5/9
    CHECK(std::abs(ps.amplitudes[0].amplitude - Complex(2.0 / 3.0)) < 1e-14);
    CHECK(std::abs(ps.amplitudes[1].amplitude - Complex(-1.0 / 3.0)) < 1e-14);
    CHECK(std::abs(ps.rate - 5.0 / 9.0) < 1e-12);
    // in the weak limit the rate tends to |<phi|psi>|^2 = 1/9
    cfg.delta = 1e4;
    CHECK(std::abs(three_box_ps(cfg).rate - 1.0 / 9.0) < 1e-8);
}

TEST_CASE("impossible post-selection") {
    const Observable id = Observable::from_projector(Projector::identity(kBoxes));
    PointerConfig cfg;
    CHECK(kind_of([&] {
              (void)postselect(entangle(id, box_state(1, 0, 0, "a"), cfg), box_state(0, 1, 0, "b"));
          }) == ErrorKind::PostSelectionImpossible);
}

TEST_CASE("exact moments match quadrature of the explicit density") {
    for (double delta : {0.05, 0.3, 1.0, 4.0, 10.0}) {
        PointerConfig cfg;
        cfg.delta = delta;
        const Oracle oracle(kC, kPsi, kPhi, cfg);
        const PointerMoments m = exact_moments(three_box_ps(cfg));
        CAPTURE(delta);
        CHECK(std::abs(m.weight - oracle.weight()) < 1e-9);
        CHECK(std::abs(m.mean - oracle.mean()) < 1e-8);
        CHECK(std::abs(m.variance - oracle.variance()) < 1e-6 * std::max(1.0, m.variance));
    }
}

TEST_CASE("exact moments for random observables and states") {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const Basis b = Basis::indexed(testing::uniform_int(rng, 2, 4));
        const Observable obs = spectral_decompose(testing::random_hermitian(rng, b));
        const State pre = testing::random_state(rng, b);
        const State post = testing::random_state(rng, b);
        PointerConfig cfg;
        cfg.delta = std::uniform_real_distribution<double>(0.2, 3.0)(rng);
        cfg.x0 = 0.5;
        cfg.coupling = 0.7;
        Oracle oracle(obs, pre, post, cfg);
        // widen the oracle window to cover every centre
        const PointerMoments m = exact_moments(postselect(entangle(obs, pre, cfg), post));
        double lo = 1e300, hi = -1e300;
        for (const auto &[c, a] : oracle.branches) {
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        lo -= 14 * cfg.delta;
        hi += 14 * cfg.delta;
        const double w = testing::simpson([&](double x) { return oracle.unnormalized(x); }, lo, hi, 200000);
        const double mean =
            testing::simpson([&](double x) { return x * oracle.unnormalized(x); }, lo, hi, 200000) / w;
        CHECK(std::abs(m.weight - w) < 1e-9);
        CHECK(std::abs(m.mean - mean) < 1e-7 * std::max(1.0, std::abs(mean)));
    }
}

TEST_CASE("exact mass matches quadrature") {
    PointerConfig cfg;
    cfg.delta = 0.4;
    const PostSelection ps = three_box_ps(cfg);
    const Oracle oracle(kC, kPsi, kPhi, cfg);
    for (auto [a, b] : std::array<std::pair<double, double>, 4>{{{-1, 0.5}, {0.5, 2}, {-0.2, 0.3}, {-10, 10}}}) {
        CHECK(std::abs(exact_mass(ps, a, b) - oracle.mass(a, b)) < 1e-9);
    }
}

TEST_CASE("tabulated density is normalized and reproduces the exact mean") {
    PointerConfig cfg;
    cfg.delta = 2.0;
    const PostSelection ps = three_box_ps(cfg);
    const PointerDensity d = pointer_density(ps, cfg);
    CHECK(d.x.size() == kDefaultGridPoints);
    CHECK(std::abs(grid_mass(d, d.x.front(), d.x.back()) - 1.0) < 1e-12);
    CHECK(std::abs(d.grid_mean - d.exact.mean) < 1e-6);
    CHECK(std::abs(d.grid_variance - d.exact.variance) < 1e-5);
    CHECK(std::abs(grid_mass(d, -1.0, 0.5) - exact_mass(ps, -1.0, 0.5)) < 1e-6);
    const PointerGrid g = effective_grid(ps, cfg);
    CHECK(g.x_min <= -8 * cfg.delta - 2);
    CHECK(g.x_max >= 1 + 8 * cfg.delta + 2);
}

TEST_CASE("weak regime: pointer mean approaches the weak value") {
    PointerConfig cfg;
    cfg.delta = 100.0;
    CHECK(std::abs(pointer_density(three_box_ps(cfg), cfg).exact.mean + 1.0) < 1e-3);
    cfg.delta = 10.0;
    const double m10 = exact_moments(three_box_ps(cfg)).mean;
    CHECK(m10 > -1.1);
    CHECK(m10 < -0.9);
}

TEST_CASE("sharp regime: branch masses become ABL probabilities") {
    PointerConfig cfg;
    cfg.delta = 0.01;
    const PostSelection ps = three_box_ps(cfg);
    const PointerDensity d = pointer_density(ps, cfg);
    CHECK(std::abs(exact_mass(ps, 0.5, 1.5) - 0.2) < 1e-12);
    CHECK(std::abs(grid_mass(d, 0.5, 1.5) - 0.2) < 1e-6);
}

TEST_CASE("sampling is deterministic and independent of worker count") {
    PointerConfig cfg;
    cfg.delta = 1.0;
    const PointerDensity d = pointer_density(three_box_ps(cfg), cfg);
    const std::size_t n = 3 * kSampleBlock + 17;
    const PointerEnsemble one = sample(d, n, 42, 1);
    const PointerEnsemble four = sample(d, n, 42, 4);
    const PointerEnsemble again = sample(d, n, 42, 3);
    CHECK(one.samples == four.samples);
    CHECK(one.samples == again.samples);
    CHECK(one.samples.size() == n);
    CHECK(sample(d, n, 43, 1).samples != one.samples);
    CHECK(kind_of([&] { (void)sample(d, 0, 1, 1); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("samples follow the tabulated distribution") {
    PointerConfig cfg;
    cfg.delta = 0.6;
    const PostSelection ps = three_box_ps(cfg);
    const PointerDensity d = pointer_density(ps, cfg);
    const std::size_t n = 400000;
    PointerEnsemble ens = sample(d, n, 2026, 0);
    const double se = std::sqrt(d.exact.variance / n);
    CHECK(std::abs(ens.mean - d.exact.mean) < 5 * se);
    CHECK(std::abs(ens.variance / d.exact.variance - 1.0) < 0.02);
    // Kolmogorov distance against the exact CDF at a few cut points
    std::sort(ens.samples.begin(), ens.samples.end());
    for (double cut : {-1.0, -0.3, 0.0, 0.4, 0.9, 1.6}) {
        const double emp =
            double(std::lower_bound(ens.samples.begin(), ens.samples.end(), cut) - ens.samples.begin()) / n;
        const double want = exact_mass(ps, d.x.front(), cut);
        CAPTURE(cut);
        CHECK(std::abs(emp - want) < 5.0 / std::sqrt(double(n)));
    }
}

TEST_CASE("simulate pipeline and estimate") {
    PointerConfig cfg;
    cfg.delta = 10.0;
    cfg.x0 = 2.0;
    cfg.coupling = 0.5;
    const SimulationResult r = simulate(kC, kPsi, kPhi, cfg, 200000, 7, 0);
    CHECK(r.estimate == doctest::Approx((r.ensemble.mean - 2.0) / 0.5));
    // statistical tolerance: 5 standard errors of (mean - x0)/coupling
    CHECK(std::abs(r.estimate - (r.ensemble.density.exact.mean - 2.0) / 0.5) <
          5 * std::sqrt(r.ensemble.density.exact.variance / 200000) / 0.5);
}

TEST_CASE("CSV exports") {
    PointerConfig cfg;
    cfg.grid = PointerGrid{-3.0, 3.0, 7};
    const PointerDensity d = pointer_density(three_box_ps(cfg), cfg);
    std::ostringstream dens;
    write_density_csv(dens, d);
    std::string line;
    std::istringstream in(dens.str());
    std::getline(in, line);
    CHECK(line == "x,p_x");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 7);
    std::ostringstream smp;
    write_samples_csv(smp, sample(d, 3, 1, 1));
    CHECK(smp.str().rfind("index,x\n0,", 0) == 0);
}

} // TEST_SUITE
