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
 * States and projectors, plus observables with their weak values.
 */
#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "weakhist/linalg.hpp"

namespace weakhist {

/// Eigenvalues closer than this are merged into one spectral projector.
inline constexpr double kDegeneracyTolerance = 1e-8;

/// Pre/post overlaps at or below this modulus make a weak value undefined.
inline constexpr double kOverlapFloor = 1e-12;

/// Unit-norm ket with a display name.
class State {
public:
    /// Throws Normalization unless |norm - 1| <= 1e-10.
    State(CVec vec, std::string label);

    /// Rescales `vec` to unit norm first.
    static State normalized(const CVec &vec, std::string label);

    [[nodiscard]] const CVec &vec() const noexcept { return vec_; }
    [[nodiscard]] const std::string &label() const noexcept { return label_; }
    [[nodiscard]] const Basis &basis() const noexcept { return vec_.basis(); }
    [[nodiscard]] std::size_t dim() const noexcept { return vec_.dim(); }

private:
    CVec vec_;
    std::string label_;
};

/// Hermitian idempotent matrix.
class Projector {
public:
    /// Validates P^2 == P and P == P^dagger to 1e-10.
    explicit Projector(CMat mat);

    /// |v><v| / <v|v>.
    static Projector onto(const CVec &v);
    static Projector onto(const State &s) { return onto(s.vec()); }
    /// Projector onto the span of `vectors` (Gram-Schmidt; dependent vectors are dropped).
    static Projector span(std::span<const CVec> vectors);
    static Projector identity(const Basis &basis);

    [[nodiscard]] const CMat &mat() const noexcept { return mat_; }
    [[nodiscard]] int rank() const noexcept { return rank_; }
    [[nodiscard]] const Basis &basis() const noexcept { return mat_.basis(); }
    [[nodiscard]] std::size_t dim() const noexcept { return mat_.dim(); }

    /// 1 - P.
    [[nodiscard]] Projector complement() const;

    /// Unit vector in the range of a rank-1 projector (phase fixed by the
    /// largest column). Throws InvalidArgument for other ranks.
    [[nodiscard]] CVec ket() const;

private:
    CMat mat_;
    int rank_;
};

struct SpectralTerm {
    double eigenvalue;
    Projector projector;
};

/// Hermitian operator together with its spectral resolution.
class Observable {
public:
    [[nodiscard]] const CMat &mat() const noexcept { return mat_; }
    [[nodiscard]] const Basis &basis() const noexcept { return mat_.basis(); }
    [[nodiscard]] std::size_t dim() const noexcept { return mat_.dim(); }

    /// Ascending; one entry per distinct eigenvalue.
    [[nodiscard]] const std::vector<SpectralTerm> &spectrum() const noexcept { return terms_; }
    [[nodiscard]] std::vector<double> eigenvalues() const;

    /// Spectral projector for `eigenvalue` (within kDegeneracyTolerance);
    /// throws UnknownEigenvalue.
    [[nodiscard]] const Projector &projector_for(double eigenvalue) const;

    /// Eigenvalue-1 projector of an observable whose spectrum lies in {0, 1};
    /// throws NotProjector otherwise.
    [[nodiscard]] Projector as_projector() const;

    /// Observable whose spectral projectors are P (eigenvalue 1) and 1 - P.
    static Observable from_projector(const Projector &p);

private:
    friend Observable spectral_decompose(const CMat &mat);
    Observable(CMat mat, std::vector<SpectralTerm> terms)
        : mat_(std::move(mat)), terms_(std::move(terms)) {}

    CMat mat_;
    std::vector<SpectralTerm> terms_;
};

/// Eigen-decomposition of a Hermitian matrix with degenerate eigenvalues
/// merged; throws NotHermitian.
[[nodiscard]] Observable spectral_decompose(const CMat &mat);

enum class WeakValueClass { Sharp, Unsharp, Strange };

/// "SWV", "UWV" or "STWV".
[[nodiscard]] std::string_view class_name(WeakValueClass cls) noexcept;

/// Sharp if within 1e-10 of an eigenvalue, Unsharp if real and inside the
/// eigenvalue range, Strange otherwise (including every non-real value).
[[nodiscard]] WeakValueClass classify(Complex value, std::span<const double> eigenvalues);

struct WeakValueReport {
    Complex value;
    WeakValueClass cls;
    Complex overlap; ///< <post|pre>
};

/// <post|O|pre> / <post|pre>. Throws UndefinedWeakValue when the overlap
/// modulus is at most kOverlapFloor.
[[nodiscard]] WeakValueReport weak_value(const Observable &obs, const State &pre,
                                         const State &post);
[[nodiscard]] WeakValueReport weak_value(const Projector &proj, const State &pre,
                                         const State &post);

/// Raw weak value of an arbitrary operator matrix, no classification.
[[nodiscard]] Complex weak_value_of(const CMat &op, const State &pre, const State &post);

/// Weak value of A + B, computed from the summed operator.
[[nodiscard]] Complex weak_value_sum(const Observable &a, const Observable &b,
                                     const State &pre, const State &post);

} // namespace weakhist
