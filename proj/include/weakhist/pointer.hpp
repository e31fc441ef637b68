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
 * Von Neumann pointer measurement with a Gaussian apparatus.
 *
 * The pointer amplitude for a branch centred at c is
 *
 *     G(x; c) = (2 pi delta^2)^(-1/4) exp(-(x - c)^2 / (4 delta^2)),
 *
 * so |G|^2 is a unit Gaussian density with standard deviation delta. The
 * coupling entangles each spectral component P_k|pre> with a pointer
 * shifted to x0 + coupling * lambda_k. Nothing collapses at that stage;
 * post-selection projects the system onto <post| and leaves the apparatus
 * in the superposition sum_k <post|P_k|pre> G(x; c_k), whose position
 * density is what the Monte Carlo sampler draws from.
 *
 * Large delta (weak regime) pushes the mean position toward
 * x0 + coupling * Re<O>_w. Small delta (sharp regime) separates the branches
 * and their masses become ABL probabilities.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "weakhist/quantum.hpp"

namespace weakhist {

struct PointerGrid {
    double x_min;
    double x_max;
    std::size_t n_points;
};

inline constexpr std::size_t kDefaultGridPoints = std::size_t{1} << 14;

struct PointerConfig {
    double delta = 1.0;    ///< pointer spread
    double x0 = 0.0;       ///< ready position
    double coupling = 1.0; ///< pointer shift per unit eigenvalue
    /// Explicit density grid; when empty a grid spanning every branch
    /// centre plus 8 delta + 2 on each side is used.
    std::optional<PointerGrid> grid;

    /// Throws InvalidArgument on delta <= 0, n_points < 2 or x_min >= x_max.
    void validate() const;
};

struct Branch {
    double eigenvalue;
    double center;
    CVec component; ///< P_k |pre>, unnormalized
};

struct BranchState {
    double delta;
    std::vector<Branch> branches;
};

struct ApparatusAmplitude {
    double center;
    Complex amplitude;
};

struct PostSelection {
    std::vector<ApparatusAmplitude> amplitudes;
    /// Probability of passing the post-selection, including the finite-delta
    /// overlaps exp(-(c_i - c_j)^2 / (8 delta^2)) between pointer branches.
    double rate;
    double delta;
};

/// Closed-form moments of the post-selected pointer density.
struct PointerMoments {
    double weight; ///< unnormalized integral of |sum_k a_k G_k|^2
    double mean;
    double variance;
};

struct PointerDensity {
    std::vector<double> x;
    std::vector<double> p; ///< normalized so the trapezoid integral is 1
    double dx;
    double postselect_rate;
    PointerMoments exact;
    double grid_mean;
    double grid_variance;
};

struct PointerEnsemble {
    std::vector<double> samples;
    double mean;
    double variance;
    PointerDensity density;
    double postselect_rate;
};

/// One branch per distinct eigenvalue of `obs`.
[[nodiscard]] BranchState entangle(const Observable &obs, const State &pre,
                                   const PointerConfig &cfg);

/// Throws PostSelectionImpossible when every branch amplitude vanishes.
[[nodiscard]] PostSelection postselect(const BranchState &bs, const State &post);

[[nodiscard]] PointerMoments exact_moments(const PostSelection &ps);

/// Exact probability that the post-selected pointer reads x in [lo, hi].
[[nodiscard]] double exact_mass(const PostSelection &ps, double lo, double hi);

[[nodiscard]] PointerGrid effective_grid(const PostSelection &ps, const PointerConfig &cfg);

[[nodiscard]] PointerDensity pointer_density(const PostSelection &ps, const PointerConfig &cfg);

/// Integral of the tabulated (piecewise-linear) density over [lo, hi].
[[nodiscard]] double grid_mass(const PointerDensity &density, double lo, double hi);

/// Draws from the tabulated density by inverse CDF.
///
/// Samples are generated in fixed blocks of kSampleBlock draws, each from its
/// own engine seeded by (seed, block index), so the output is identical for
/// any `workers` value. workers == 0 picks the hardware concurrency.
inline constexpr std::size_t kSampleBlock = std::size_t{1} << 16;
[[nodiscard]] PointerEnsemble sample(const PointerDensity &density, std::size_t n,
                                     std::uint64_t seed, unsigned workers = 0);

/// (mean - x0) / coupling.
[[nodiscard]] double weak_value_estimate(const PointerEnsemble &ens, const PointerConfig &cfg);

struct SimulationResult {
    PostSelection postselection;
    PointerEnsemble ensemble;
    double estimate;
};

/// entangle -> postselect -> pointer_density -> sample.
[[nodiscard]] SimulationResult simulate(const Observable &obs, const State &pre,
                                        const State &post, const PointerConfig &cfg,
                                        std::size_t n, std::uint64_t seed,
                                        unsigned workers = 0);

/// CSV with header "x,p_x".
void write_density_csv(std::ostream &out, const PointerDensity &density);
/// CSV with header "index,x".
void write_samples_csv(std::ostream &out, const PointerEnsemble &ensemble);

} // namespace weakhist
