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
#include "weakhist/pointer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>

#include "weakhist/errors.hpp"

namespace weakhist {

namespace {

constexpr double kAmplitudeFloor = 1e-12;

// Gaussian overlap factor and midpoint shared by branches i and j.
struct PairTerm {
    double coeff; // Re(conj(a_i) a_j) * overlap
    double mid;
};

std::vector<PairTerm> pair_terms(const PostSelection &ps) {
    const double eight_var = 8.0 * ps.delta * ps.delta;
    std::vector<PairTerm> out;
    out.reserve(ps.amplitudes.size() * ps.amplitudes.size());
    for (const auto &ai : ps.amplitudes) {
        for (const auto &aj : ps.amplitudes) {
            const double gap = ai.center - aj.center;
            const double overlap = std::exp(-gap * gap / eight_var);
            out.push_back({(std::conj(ai.amplitude) * aj.amplitude).real() * overlap,
                           0.5 * (ai.center + aj.center)});
        }
    }
    return out;
}

// Standard normal CDF, accurate in both tails.
double normal_cdf(double z) {
    if (z == std::numeric_limits<double>::infinity()) return 1.0;
    if (z == -std::numeric_limits<double>::infinity()) return 0.0;
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double uniform01(std::mt19937_64 &engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

} // namespace

void PointerConfig::validate() const {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw Error(ErrorKind::InvalidArgument, "pointer spread delta must be positive");
    }
    if (!std::isfinite(x0) || !std::isfinite(coupling)) {
        throw Error(ErrorKind::InvalidArgument, "pointer x0 and coupling must be finite");
    }
    if (grid) {
        if (grid->n_points < 2) {
            throw Error(ErrorKind::InvalidArgument, "pointer grid needs at least 2 points");
        }
        if (!(grid->x_min < grid->x_max)) {
            throw Error(ErrorKind::InvalidArgument, "pointer grid needs x_min < x_max");
        }
    }
}

BranchState entangle(const Observable &obs, const State &pre, const PointerConfig &cfg) {
    cfg.validate();
    if (obs.dim() != pre.dim()) {
        throw Error(ErrorKind::Dimension, "entangle: observable and state dimensions differ");
    }
    BranchState bs{cfg.delta, {}};
    for (const auto &term : obs.spectrum()) {
        bs.branches.push_back({term.eigenvalue, cfg.x0 + cfg.coupling * term.eigenvalue,
                               apply(term.projector.mat(), pre.vec())});
    }
    return bs;
}

PostSelection postselect(const BranchState &bs, const State &post) {
    PostSelection ps{{}, 0.0, bs.delta};
    bool any = false;
    for (const auto &branch : bs.branches) {
        if (branch.component.dim() != post.dim()) {
            throw Error(ErrorKind::Dimension, "postselect: state dimension differs");
        }
        const Complex a = inner(post.vec(), branch.component);
        any = any || std::abs(a) > kAmplitudeFloor;
        ps.amplitudes.push_back({branch.center, a});
    }
    if (!any) {
        throw Error(ErrorKind::PostSelectionImpossible,
                    "post-selection impossible: every branch amplitude vanishes");
    }
    double rate = 0.0;
    for (const auto &t : pair_terms(ps)) {
        rate += t.coeff;
    }
    ps.rate = std::clamp(rate, 0.0, 1.0);
    return ps;
}

PointerMoments exact_moments(const PostSelection &ps) {
    double z = 0.0;
    double first = 0.0;
    double second = 0.0;
    const double var = ps.delta * ps.delta;
    for (const auto &t : pair_terms(ps)) {
        z += t.coeff;
        first += t.coeff * t.mid;
        second += t.coeff * (var + t.mid * t.mid);
    }
    if (!(z > 0.0)) {
        throw Error(ErrorKind::PostSelectionImpossible, "post-selected pointer has zero weight");
    }
    const double mean = first / z;
    return {z, mean, second / z - mean * mean};
}

double exact_mass(const PostSelection &ps, double lo, double hi) {
    double z = 0.0;
    double mass = 0.0;
    for (const auto &t : pair_terms(ps)) {
        z += t.coeff;
        mass += t.coeff *
                (normal_cdf((hi - t.mid) / ps.delta) - normal_cdf((lo - t.mid) / ps.delta));
    }
    if (!(z > 0.0)) {
        throw Error(ErrorKind::PostSelectionImpossible, "post-selected pointer has zero weight");
    }
    return mass / z;
}

PointerGrid effective_grid(const PostSelection &ps, const PointerConfig &cfg) {
    if (cfg.grid) {
        return *cfg.grid;
    }
    double lo = cfg.x0;
    double hi = cfg.x0;
    for (const auto &a : ps.amplitudes) {
        lo = std::min(lo, a.center);
        hi = std::max(hi, a.center);
    }
    const double pad = 8.0 * cfg.delta + 2.0;
    return {lo - pad, hi + pad, kDefaultGridPoints};
}

PointerDensity pointer_density(const PostSelection &ps, const PointerConfig &cfg) {
    cfg.validate();
    const PointerGrid grid = effective_grid(ps, cfg);
    const std::size_t n = grid.n_points;
    const double dx = (grid.x_max - grid.x_min) / static_cast<double>(n - 1);
    const double norm = std::pow(2.0 * std::numbers::pi * cfg.delta * cfg.delta, -0.25);
    const double inv_4var = 1.0 / (4.0 * cfg.delta * cfg.delta);

    PointerDensity d;
    d.x.resize(n);
    d.p.resize(n);
    d.dx = dx;
    d.postselect_rate = ps.rate;
    for (std::size_t k = 0; k < n; ++k) {
        const double x = grid.x_min + dx * static_cast<double>(k);
        Complex amp = 0.0;
        for (const auto &a : ps.amplitudes) {
            const double u = x - a.center;
            amp += a.amplitude * (norm * std::exp(-u * u * inv_4var));
        }
        d.x[k] = x;
        d.p[k] = std::norm(amp);
    }

    double total = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        total += 0.5 * (d.p[k] + d.p[k + 1]) * dx;
    }
    if (!(total > 0.0)) {
        throw Error(ErrorKind::PostSelectionImpossible,
                    "post-selected pointer density vanishes on the grid");
    }
    for (auto &v : d.p) {
        v /= total;
    }

    double m1 = 0.0;
    double m2 = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double w0 = 0.5 * dx * d.p[k];
        const double w1 = 0.5 * dx * d.p[k + 1];
        m1 += w0 * d.x[k] + w1 * d.x[k + 1];
        m2 += w0 * d.x[k] * d.x[k] + w1 * d.x[k + 1] * d.x[k + 1];
    }
    d.grid_mean = m1;
    d.grid_variance = m2 - m1 * m1;
    d.exact = exact_moments(ps);
    return d;
}

double grid_mass(const PointerDensity &density, double lo, double hi) {
    const auto &x = density.x;
    const auto &p = density.p;
    double mass = 0.0;
    for (std::size_t k = 0; k + 1 < x.size(); ++k) {
        const double a = std::max(lo, x[k]);
        const double b = std::min(hi, x[k + 1]);
        if (!(a < b)) {
            continue;
        }
        const double slope = (p[k + 1] - p[k]) / density.dx;
        const double pa = p[k] + slope * (a - x[k]);
        const double pb = p[k] + slope * (b - x[k]);
        mass += 0.5 * (pa + pb) * (b - a);
    }
    return mass;
}

PointerEnsemble sample(const PointerDensity &density, std::size_t n, std::uint64_t seed,
                       unsigned workers) {
    if (n == 0) {
        throw Error(ErrorKind::InvalidArgument, "sample count must be at least 1");
    }
    const auto &x = density.x;
    const auto &p = density.p;
    const double dx = density.dx;

    std::vector<double> cdf(x.size(), 0.0);
    for (std::size_t k = 0; k + 1 < x.size(); ++k) {
        cdf[k + 1] = cdf[k] + 0.5 * (p[k] + p[k + 1]) * dx;
    }
    const double total = cdf.back();

    // Exact inverse of the piecewise-linear CDF inside cell k.
    auto invert = [&](double u) {
        const double target = u * total;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
        std::size_t k = static_cast<std::size_t>(std::distance(cdf.begin(), it));
        k = std::clamp<std::size_t>(k, 1, cdf.size() - 1) - 1;
        const double r = target - cdf[k];
        const double p0 = p[k];
        const double slope = (p[k + 1] - p[k]) / dx;
        const double disc = std::max(0.0, p0 * p0 + 2.0 * slope * r);
        const double denom = p0 + std::sqrt(disc);
        double t = denom > 0.0 ? 2.0 * r / denom : 0.0;
        t = std::clamp(t, 0.0, dx);
        return x[k] + t;
    };

    const std::size_t blocks = (n + kSampleBlock - 1) / kSampleBlock;
    std::vector<double> samples(n);
    auto run_block = [&](std::size_t b) {
        const std::array<std::uint32_t, 4> key{
            static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
            static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
        std::seed_seq seq(key.begin(), key.end());
        std::mt19937_64 engine(seq);
        const std::size_t begin = b * kSampleBlock;
        const std::size_t end = std::min(n, begin + kSampleBlock);
        for (std::size_t i = begin; i < end; ++i) {
            samples[i] = invert(uniform01(engine));
        }
    };

    unsigned threads = workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : workers;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, blocks));
    if (threads <= 1) {
        for (std::size_t b = 0; b < blocks; ++b) {
            run_block(b);
        }
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t b = w; b < blocks; b += threads) {
                    run_block(b);
                }
            });
        }
    }

    PointerEnsemble ens{std::move(samples), 0.0, 0.0, density, density.postselect_rate};
    double sum = 0.0;
    for (double s : ens.samples) {
        sum += s;
    }
    ens.mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double s : ens.samples) {
        ss += (s - ens.mean) * (s - ens.mean);
    }
    ens.variance = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;
    return ens;
}

double weak_value_estimate(const PointerEnsemble &ens, const PointerConfig &cfg) {
    if (ens.samples.empty()) {
        throw Error(ErrorKind::InvalidArgument, "empty ensemble");
    }
    if (cfg.coupling == 0.0) {
        throw Error(ErrorKind::InvalidArgument, "coupling must be nonzero to estimate a weak value");
    }
    return (ens.mean - cfg.x0) / cfg.coupling;
}

SimulationResult simulate(const Observable &obs, const State &pre, const State &post,
                          const PointerConfig &cfg, std::size_t n, std::uint64_t seed,
                          unsigned workers) {
    PostSelection ps = postselect(entangle(obs, pre, cfg), post);
    PointerEnsemble ens = sample(pointer_density(ps, cfg), n, seed, workers);
    const double estimate = weak_value_estimate(ens, cfg);
    return {std::move(ps), std::move(ens), estimate};
}

void write_density_csv(std::ostream &out, const PointerDensity &density) {
    const auto old = out.precision(17);
    out << "x,p_x\n";
    for (std::size_t k = 0; k < density.x.size(); ++k) {
        out << density.x[k] << ',' << density.p[k] << '\n';
    }
    out.precision(old);
}

void write_samples_csv(std::ostream &out, const PointerEnsemble &ensemble) {
    const auto old = out.precision(17);
    out << "index,x\n";
    for (std::size_t i = 0; i < ensemble.samples.size(); ++i) {
        out << i << ',' << ensemble.samples[i] << '\n';
    }
    out.precision(old);
}

} // namespace weakhist
