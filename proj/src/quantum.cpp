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
#include "weakhist/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "weakhist/errors.hpp"

namespace weakhist {

State::State(CVec vec, std::string label) : vec_(std::move(vec)), label_(std::move(label)) {
    const double n = vec_.norm();
    if (std::abs(n - 1.0) > kTolerance) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "state '" << label_ << "' has norm " << n << ", expected 1";
        throw Error(ErrorKind::Normalization, msg.str());
    }
}

State State::normalized(const CVec &vec, std::string label) {
    return State(vec.normalized(), std::move(label));
}

// ---------------------------------------------------------------------------

Projector::Projector(CMat mat) : mat_(std::move(mat)), rank_(0) {
    if (!is_hermitian(mat_)) {
        throw Error(ErrorKind::NotHermitian, "projector is not Hermitian");
    }
    if (max_abs_diff(matmul(mat_, mat_), mat_) > kTolerance) {
        throw Error(ErrorKind::NotProjector, "projector is not idempotent");
    }
    rank_ = static_cast<int>(std::lround(trace(mat_).real()));
}

Projector Projector::onto(const CVec &v) {
    const double n2 = v.amplitudes().squaredNorm();
    if (n2 == 0.0) {
        throw Error(ErrorKind::Normalization, "cannot project onto the zero vector");
    }
    return Projector((1.0 / n2) * outer(v, v));
}

Projector Projector::span(std::span<const CVec> vectors) {
    if (vectors.empty()) {
        throw Error(ErrorKind::InvalidArgument, "span of no vectors");
    }
    const Basis &basis = vectors.front().basis();
    std::vector<Eigen::VectorXcd> ortho;
    for (const auto &v : vectors) {
        if (!(v.basis() == basis)) {
            throw Error(ErrorKind::BasisMismatch, "span: vectors use different bases");
        }
        Eigen::VectorXcd w = v.amplitudes();
        const double scale = w.norm();
        // two passes of modified Gram-Schmidt
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto &q : ortho) {
                w -= q.dot(w) * q;
            }
        }
        const double n = w.norm();
        if (scale == 0.0 || n <= kTolerance * scale) {
            continue;
        }
        ortho.push_back(w / n);
    }
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(basis.dim()),
                                                static_cast<Eigen::Index>(basis.dim()));
    for (const auto &q : ortho) {
        m += q * q.adjoint();
    }
    return Projector(CMat(basis, std::move(m)));
}

Projector Projector::identity(const Basis &basis) { return Projector(CMat::identity(basis)); }

Projector Projector::complement() const { return Projector(CMat::identity(basis()) - mat_); }

CVec Projector::ket() const {
    if (rank_ != 1) {
        throw Error(ErrorKind::InvalidArgument,
                    "ket() needs a rank-1 projector, got rank " + std::to_string(rank_));
    }
    Eigen::Index col = 0;
    mat_.entries().colwise().norm().maxCoeff(&col);
    Eigen::VectorXcd v = mat_.entries().col(col);
    return CVec(basis(), v / v.norm());
}

// ---------------------------------------------------------------------------

std::vector<double> Observable::eigenvalues() const {
    std::vector<double> out;
    out.reserve(terms_.size());
    for (const auto &t : terms_) {
        out.push_back(t.eigenvalue);
    }
    return out;
}

const Projector &Observable::projector_for(double eigenvalue) const {
    for (const auto &t : terms_) {
        if (std::abs(t.eigenvalue - eigenvalue) <= kDegeneracyTolerance) {
            return t.projector;
        }
    }
    std::ostringstream msg;
    msg.precision(12);
    msg << "value " << eigenvalue << " is not an eigenvalue of the observable";
    throw Error(ErrorKind::UnknownEigenvalue, msg.str());
}

Projector Observable::as_projector() const {
    for (const auto &t : terms_) {
        if (std::abs(t.eigenvalue) > kDegeneracyTolerance &&
            std::abs(t.eigenvalue - 1.0) > kDegeneracyTolerance) {
            throw Error(ErrorKind::NotProjector,
                        "observable has eigenvalues outside {0, 1}; it is not a projector");
        }
    }
    for (const auto &t : terms_) {
        if (std::abs(t.eigenvalue - 1.0) <= kDegeneracyTolerance) {
            return t.projector;
        }
    }
    return Projector(CMat::zero(basis()));
}

Observable Observable::from_projector(const Projector &p) {
    std::vector<SpectralTerm> terms;
    if (p.rank() < static_cast<int>(p.dim())) {
        terms.push_back({0.0, p.complement()});
    }
    if (p.rank() > 0) {
        terms.push_back({1.0, p});
    }
    return Observable(p.mat(), std::move(terms));
}

Observable spectral_decompose(const CMat &mat) {
    if (!is_hermitian(mat)) {
        throw Error(ErrorKind::NotHermitian, "observable matrix is not Hermitian");
    }
    const Eigen::MatrixXcd herm = 0.5 * (mat.entries() + mat.entries().adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::NotHermitian, "eigendecomposition failed");
    }
    const auto &values = solver.eigenvalues();
    const auto &vectors = solver.eigenvectors();
    const Eigen::Index n = values.size();

    std::vector<SpectralTerm> terms;
    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index end = start + 1;
        while (end < n && values(end) - values(end - 1) <= kDegeneracyTolerance) {
            ++end;
        }
        const auto block = vectors.middleCols(start, end - start);
        const double lambda = values.segment(start, end - start).mean();
        terms.push_back({lambda, Projector(CMat(mat.basis(), block * block.adjoint()))});
        start = end;
    }
    return Observable(mat, std::move(terms));
}

// ---------------------------------------------------------------------------

std::string_view class_name(WeakValueClass cls) noexcept {
    switch (cls) {
    case WeakValueClass::Sharp: return "SWV";
    case WeakValueClass::Unsharp: return "UWV";
    case WeakValueClass::Strange: return "STWV";
    }
    return "?";
}

WeakValueClass classify(Complex value, std::span<const double> eigenvalues) {
    if (eigenvalues.empty()) {
        throw Error(ErrorKind::InvalidArgument, "classify: empty eigenvalue list");
    }
    for (double lambda : eigenvalues) {
        if (std::abs(value - Complex(lambda, 0.0)) <= kTolerance) {
            return WeakValueClass::Sharp;
        }
    }
    if (std::abs(value.imag()) > kTolerance) {
        return WeakValueClass::Strange;
    }
    const auto [lo, hi] = std::minmax_element(eigenvalues.begin(), eigenvalues.end());
    if (value.real() >= *lo && value.real() <= *hi) {
        return WeakValueClass::Unsharp;
    }
    return WeakValueClass::Strange;
}

namespace {

Complex checked_overlap(const State &pre, const State &post) {
    const Complex overlap = inner(post.vec(), pre.vec());
    if (std::abs(overlap) <= kOverlapFloor) {
        throw Error(ErrorKind::UndefinedWeakValue,
                    "weak value undefined: pre- and post-selected states are orthogonal");
    }
    return overlap;
}

} // namespace

Complex weak_value_of(const CMat &op, const State &pre, const State &post) {
    const Complex overlap = checked_overlap(pre, post);
    return inner(post.vec(), apply(op, pre.vec())) / overlap;
}

WeakValueReport weak_value(const Observable &obs, const State &pre, const State &post) {
    const Complex overlap = checked_overlap(pre, post);
    const Complex value = inner(post.vec(), apply(obs.mat(), pre.vec())) / overlap;
    const auto eig = obs.eigenvalues();
    return {value, classify(value, eig), overlap};
}

WeakValueReport weak_value(const Projector &proj, const State &pre, const State &post) {
    return weak_value(Observable::from_projector(proj), pre, post);
}

Complex weak_value_sum(const Observable &a, const Observable &b, const State &pre,
                       const State &post) {
    return weak_value_of(a.mat() + b.mat(), pre, post);
}

} // namespace weakhist
