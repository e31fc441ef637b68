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
 * Two-branch history families D -> {E, 1-E} -> F with zero Hamiltonian
 * between events. Covers the trace consistency functional with its weak-value
 * factorization. ABL probabilities and Lueders weights live here too.
 */
#pragma once

#include <optional>
#include <string_view>

#include "weakhist/quantum.hpp"

namespace weakhist {

/// Events at t0 < t1 < t2, in that order.
struct History {
    History(Projector d, Projector e, Projector f);

    Projector d;
    Projector e;
    Projector f;
};

/// {D -> E -> F, D -> (1-E) -> F} with rank-1 D and F.
class Family {
public:
    Family(Projector d, Projector e, Projector f);
    Family(const State &pre, Projector e, const State &post);

    [[nodiscard]] const History &base() const noexcept { return base_; }
    [[nodiscard]] const History &complement() const noexcept { return complement_; }

    /// Unit kets spanning D and F.
    [[nodiscard]] const State &pre() const noexcept { return pre_; }
    [[nodiscard]] const State &post() const noexcept { return post_; }

private:
    History base_;
    History complement_;
    State pre_;
    State post_;
};

enum class FailureMode { None, Unsharp, Strange };

[[nodiscard]] std::string_view failure_mode_name(FailureMode mode) noexcept;

/// The factored right-hand side |<F|D>|^2 <E>_w <E'>_w^*.
struct ConsistencyFactors {
    double overlap_sq;
    Complex wv;      ///< <E>_w
    Complex wv_conj; ///< conj(<1-E>_w)
};

struct ConsistencyReport {
    Complex functional; ///< Tr[F E D E']
    bool consistent;
    FailureMode failure_mode;
    /// Empty when <F|D> vanishes and the weak values are undefined.
    std::optional<ConsistencyFactors> factors;
};

/// Tr[F E D E'] with both factorizations cross-checked to 1e-10.
/// Consistent iff |functional| <= 1e-10; otherwise Unsharp when the
/// functional is real and in (0, 1), Strange in every other case.
[[nodiscard]] ConsistencyReport consistency(const Family &family);

/// Degenerate ABL rule: |<post|P_outcome|pre>|^2 / sum_k |<post|P_k|pre>|^2.
[[nodiscard]] double abl_probability(const Observable &obs, const State &pre,
                                     const State &post, double outcome);

/// ABL probability of the eigenvalue-1 outcome of a projector, written in
/// terms of its weak value w: |w|^2 / (|w|^2 + |1-w|^2).
[[nodiscard]] double abl_from_weak_values(Complex wv);

/// Tr[D E F E].
[[nodiscard]] double history_weight(const History &history);

/// Tr[D E F E] / Tr[D F]. Not clamped to [0, 1].
[[nodiscard]] double conditional_weight(const Projector &e, const Projector &d,
                                        const Projector &f);

/// True iff the ABL probability and the conditional weight of the family's
/// base history agree to 1e-10.
[[nodiscard]] bool abl_weight_agreement(const Family &family);

} // namespace weakhist
