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
 * Dense complex vectors and matrices over a labelled finite basis.
 *
 * Every binary operation checks that both operands carry the same basis
 * labels, so amplitudes written in different bases cannot be mixed by
 * accident. Values are immutable once constructed.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace weakhist {

using Complex = std::complex<double>;

/// Default absolute tolerance for equality of computed quantities.
inline constexpr double kTolerance = 1e-10;

class Basis {
public:
    /// Labels must be non-empty and unique.
    explicit Basis(std::vector<std::string> labels);

    /// Labels "0", "1", ..., "dim-1".
    static Basis indexed(std::size_t dim);

    [[nodiscard]] std::size_t dim() const noexcept { return labels_->size(); }
    [[nodiscard]] const std::vector<std::string> &labels() const noexcept { return *labels_; }
    [[nodiscard]] const std::string &label(std::size_t i) const { return labels_->at(i); }
    [[nodiscard]] std::optional<std::size_t> find(std::string_view label) const;

    /// Product basis in row-major order; labels joined with '_'.
    [[nodiscard]] Basis tensor(const Basis &other) const;

    friend bool operator==(const Basis &lhs, const Basis &rhs);

private:
    std::shared_ptr<const std::vector<std::string>> labels_;
};

class CVec {
public:
    CVec(Basis basis, Eigen::VectorXcd amplitudes);
    CVec(Basis basis, std::span<const Complex> amplitudes);

    static CVec zero(const Basis &basis);
    static CVec basis_vector(const Basis &basis, std::size_t index);
    static CVec basis_vector(const Basis &basis, std::string_view label);

    [[nodiscard]] std::size_t dim() const noexcept { return basis_.dim(); }
    [[nodiscard]] const Basis &basis() const noexcept { return basis_; }
    [[nodiscard]] const Eigen::VectorXcd &amplitudes() const noexcept { return amps_; }
    [[nodiscard]] Complex operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

    [[nodiscard]] double norm() const { return amps_.norm(); }
    /// Scaled to unit norm; throws Normalization for the zero vector.
    [[nodiscard]] CVec normalized() const;

    friend CVec operator+(const CVec &lhs, const CVec &rhs);
    friend CVec operator-(const CVec &lhs, const CVec &rhs);
    friend CVec operator*(Complex scale, const CVec &v);

private:
    Basis basis_;
    Eigen::VectorXcd amps_;
};

class CMat {
public:
    CMat(Basis basis, Eigen::MatrixXcd entries);

    static CMat zero(const Basis &basis);
    static CMat identity(const Basis &basis);

    [[nodiscard]] std::size_t dim() const noexcept { return basis_.dim(); }
    [[nodiscard]] const Basis &basis() const noexcept { return basis_; }
    [[nodiscard]] const Eigen::MatrixXcd &entries() const noexcept { return m_; }
    [[nodiscard]] Complex operator()(std::size_t i, std::size_t j) const {
        return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }

    friend CMat operator+(const CMat &lhs, const CMat &rhs);
    friend CMat operator-(const CMat &lhs, const CMat &rhs);
    friend CMat operator*(Complex scale, const CMat &m);

private:
    Basis basis_;
    Eigen::MatrixXcd m_;
};

/// Sum of conj(u_i) v_i.
[[nodiscard]] Complex inner(const CVec &u, const CVec &v);
/// |u><v|, entries u_i conj(v_j).
[[nodiscard]] CMat outer(const CVec &u, const CVec &v);
[[nodiscard]] CMat matmul(const CMat &a, const CMat &b);
[[nodiscard]] CVec apply(const CMat &a, const CVec &v);
[[nodiscard]] CMat adjoint(const CMat &a);
[[nodiscard]] Complex trace(const CMat &a);
[[nodiscard]] CMat tensor(const CMat &a, const CMat &b);
[[nodiscard]] CVec tensor(const CVec &u, const CVec &v);

/// Re-express in `target`, which must be a permutation of the current labels.
[[nodiscard]] CVec reorder(const CVec &v, const Basis &target);
[[nodiscard]] CMat reorder(const CMat &a, const Basis &target);

/// Largest entrywise modulus of a - b.
[[nodiscard]] double max_abs_diff(const CMat &a, const CMat &b);
[[nodiscard]] double max_abs_diff(const CVec &a, const CVec &b);

[[nodiscard]] bool is_hermitian(const CMat &a, double tol = kTolerance);

} // namespace weakhist
