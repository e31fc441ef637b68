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
#include "weakhist/linalg.hpp"

#include <algorithm>
#include <unordered_set>

#include "weakhist/errors.hpp"

namespace weakhist {

namespace {

void require_same_basis(const Basis &a, const Basis &b, const char *op) {
    if (a.dim() != b.dim()) {
        throw Error(ErrorKind::Dimension, std::string(op) + ": dimension mismatch (" +
                                              std::to_string(a.dim()) + " vs " +
                                              std::to_string(b.dim()) + ")");
    }
    if (!(a == b)) {
        throw Error(ErrorKind::BasisMismatch, std::string(op) + ": basis labels differ");
    }
}

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

std::vector<std::size_t> permutation_to(const Basis &from, const Basis &target) {
    if (from.dim() != target.dim()) {
        throw Error(ErrorKind::Dimension, "reorder: dimension mismatch");
    }
    std::vector<std::size_t> perm(target.dim());
    for (std::size_t i = 0; i < target.dim(); ++i) {
        auto j = from.find(target.label(i));
        if (!j) {
            throw Error(ErrorKind::BasisMismatch,
                        "reorder: label '" + target.label(i) + "' not in source basis");
        }
        perm[i] = *j;
    }
    return perm;
}

} // namespace

Basis::Basis(std::vector<std::string> labels) {
    if (labels.empty()) {
        throw Error(ErrorKind::Dimension, "basis must have at least one label");
    }
    std::unordered_set<std::string_view> seen;
    for (const auto &l : labels) {
        if (l.empty()) {
            throw Error(ErrorKind::InvalidArgument, "basis labels must be non-empty");
        }
        if (!seen.insert(l).second) {
            throw Error(ErrorKind::InvalidArgument, "duplicate basis label '" + l + "'");
        }
    }
    labels_ = std::make_shared<const std::vector<std::string>>(std::move(labels));
}

Basis Basis::indexed(std::size_t dim) {
    std::vector<std::string> labels;
    labels.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        labels.push_back(std::to_string(i));
    }
    return Basis(std::move(labels));
}

std::optional<std::size_t> Basis::find(std::string_view label) const {
    const auto &ls = *labels_;
    auto it = std::find(ls.begin(), ls.end(), label);
    if (it == ls.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - ls.begin());
}

Basis Basis::tensor(const Basis &other) const {
    std::vector<std::string> labels;
    labels.reserve(dim() * other.dim());
    for (const auto &l : *labels_) {
        for (const auto &r : other.labels()) {
            labels.push_back(l + "_" + r);
        }
    }
    return Basis(std::move(labels));
}

bool operator==(const Basis &lhs, const Basis &rhs) {
    return lhs.labels_ == rhs.labels_ || *lhs.labels_ == *rhs.labels_;
}

// ---------------------------------------------------------------------------

CVec::CVec(Basis basis, Eigen::VectorXcd amplitudes)
    : basis_(std::move(basis)), amps_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amps_.size()) != basis_.dim()) {
        throw Error(ErrorKind::Dimension, "vector length does not match basis dimension");
    }
}

CVec::CVec(Basis basis, std::span<const Complex> amplitudes)
    : CVec(std::move(basis),
           Eigen::Map<const Eigen::VectorXcd>(amplitudes.data(), idx(amplitudes.size()))) {}

CVec CVec::zero(const Basis &basis) {
    return CVec(basis, Eigen::VectorXcd::Zero(idx(basis.dim())));
}

CVec CVec::basis_vector(const Basis &basis, std::size_t index) {
    if (index >= basis.dim()) {
        throw Error(ErrorKind::Dimension, "basis index out of range");
    }
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(idx(basis.dim()));
    v(idx(index)) = 1.0;
    return CVec(basis, std::move(v));
}

CVec CVec::basis_vector(const Basis &basis, std::string_view label) {
    auto i = basis.find(label);
    if (!i) {
        throw Error(ErrorKind::UnknownName, "unknown basis label '" + std::string(label) + "'");
    }
    return basis_vector(basis, *i);
}

CVec CVec::normalized() const {
    const double n = norm();
    if (n == 0.0) {
        throw Error(ErrorKind::Normalization, "cannot normalize the zero vector");
    }
    return CVec(basis_, amps_ / n);
}

CVec operator+(const CVec &lhs, const CVec &rhs) {
    require_same_basis(lhs.basis_, rhs.basis_, "vector add");
    return CVec(lhs.basis_, lhs.amps_ + rhs.amps_);
}

CVec operator-(const CVec &lhs, const CVec &rhs) {
    require_same_basis(lhs.basis_, rhs.basis_, "vector subtract");
    return CVec(lhs.basis_, lhs.amps_ - rhs.amps_);
}

CVec operator*(Complex scale, const CVec &v) { return CVec(v.basis_, scale * v.amps_); }

// ---------------------------------------------------------------------------

CMat::CMat(Basis basis, Eigen::MatrixXcd entries)
    : basis_(std::move(basis)), m_(std::move(entries)) {
    if (m_.rows() != m_.cols()) {
        throw Error(ErrorKind::Dimension, "matrix must be square");
    }
    if (static_cast<std::size_t>(m_.rows()) != basis_.dim()) {
        throw Error(ErrorKind::Dimension, "matrix size does not match basis dimension");
    }
}

CMat CMat::zero(const Basis &basis) {
    return CMat(basis, Eigen::MatrixXcd::Zero(idx(basis.dim()), idx(basis.dim())));
}

CMat CMat::identity(const Basis &basis) {
    return CMat(basis, Eigen::MatrixXcd::Identity(idx(basis.dim()), idx(basis.dim())));
}

CMat operator+(const CMat &lhs, const CMat &rhs) {
    require_same_basis(lhs.basis_, rhs.basis_, "matrix add");
    return CMat(lhs.basis_, lhs.m_ + rhs.m_);
}

CMat operator-(const CMat &lhs, const CMat &rhs) {
    require_same_basis(lhs.basis_, rhs.basis_, "matrix subtract");
    return CMat(lhs.basis_, lhs.m_ - rhs.m_);
}

CMat operator*(Complex scale, const CMat &m) { return CMat(m.basis_, scale * m.m_); }

// ---------------------------------------------------------------------------

Complex inner(const CVec &u, const CVec &v) {
    require_same_basis(u.basis(), v.basis(), "inner");
    return u.amplitudes().dot(v.amplitudes()); // Eigen conjugates the left operand
}

CMat outer(const CVec &u, const CVec &v) {
    require_same_basis(u.basis(), v.basis(), "outer");
    return CMat(u.basis(), u.amplitudes() * v.amplitudes().adjoint());
}

CMat matmul(const CMat &a, const CMat &b) {
    require_same_basis(a.basis(), b.basis(), "matmul");
    return CMat(a.basis(), a.entries() * b.entries());
}

CVec apply(const CMat &a, const CVec &v) {
    require_same_basis(a.basis(), v.basis(), "apply");
    return CVec(a.basis(), Eigen::VectorXcd(a.entries() * v.amplitudes()));
}

CMat adjoint(const CMat &a) { return CMat(a.basis(), a.entries().adjoint()); }

Complex trace(const CMat &a) { return a.entries().trace(); }

CMat tensor(const CMat &a, const CMat &b) {
    const auto da = idx(a.dim());
    const auto db = idx(b.dim());
    Eigen::MatrixXcd out(da * db, da * db);
    for (Eigen::Index i = 0; i < da; ++i) {
        for (Eigen::Index j = 0; j < da; ++j) {
            out.block(i * db, j * db, db, db) = a.entries()(i, j) * b.entries();
        }
    }
    return CMat(a.basis().tensor(b.basis()), std::move(out));
}

CVec tensor(const CVec &u, const CVec &v) {
    const auto du = idx(u.dim());
    const auto dv = idx(v.dim());
    Eigen::VectorXcd out(du * dv);
    for (Eigen::Index i = 0; i < du; ++i) {
        out.segment(i * dv, dv) = u.amplitudes()(i) * v.amplitudes();
    }
    return CVec(u.basis().tensor(v.basis()), std::move(out));
}

CVec reorder(const CVec &v, const Basis &target) {
    const auto perm = permutation_to(v.basis(), target);
    Eigen::VectorXcd out(idx(target.dim()));
    for (std::size_t i = 0; i < perm.size(); ++i) {
        out(idx(i)) = v[perm[i]];
    }
    return CVec(target, std::move(out));
}

CMat reorder(const CMat &a, const Basis &target) {
    const auto perm = permutation_to(a.basis(), target);
    const auto n = idx(target.dim());
    Eigen::MatrixXcd out(n, n);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        for (std::size_t j = 0; j < perm.size(); ++j) {
            out(idx(i), idx(j)) = a(perm[i], perm[j]);
        }
    }
    return CMat(target, std::move(out));
}

double max_abs_diff(const CMat &a, const CMat &b) {
    require_same_basis(a.basis(), b.basis(), "max_abs_diff");
    return (a.entries() - b.entries()).cwiseAbs().maxCoeff();
}

double max_abs_diff(const CVec &a, const CVec &b) {
    require_same_basis(a.basis(), b.basis(), "max_abs_diff");
    return (a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const CMat &a, double tol) {
    return (a.entries() - a.entries().adjoint()).cwiseAbs().maxCoeff() <= tol;
}

} // namespace weakhist
