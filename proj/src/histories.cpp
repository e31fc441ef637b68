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
#include "weakhist/histories.hpp"

#include <cmath>
#include <stdexcept>

#include "weakhist/errors.hpp"

namespace weakhist {

namespace {

void require_conformable(const Projector &a, const Projector &b, const char *what) {
    if (a.dim() != b.dim()) {
        throw Error(ErrorKind::Dimension, std::string(what) + ": projector dimensions differ");
    }
    if (!(a.basis() == b.basis())) {
        throw Error(ErrorKind::BasisMismatch, std::string(what) + ": projector bases differ");
    }
}

Projector require_rank1(Projector p, const char *which) {
    if (p.rank() != 1) {
        throw Error(ErrorKind::InvalidArgument,
                    std::string("family ") + which + " projector must be rank 1, got rank " +
                        std::to_string(p.rank()));
    }
    return p;
}

Complex trace_of_product(const CMat &a, const CMat &b, const CMat &c, const CMat &d) {
    return trace(matmul(matmul(a, b), matmul(c, d)));
}

} // namespace

History::History(Projector d_, Projector e_, Projector f_)
    : d(std::move(d_)), e(std::move(e_)), f(std::move(f_)) {
    require_conformable(d, e, "history");
    require_conformable(e, f, "history");
}

Family::Family(Projector d, Projector e, Projector f)
    : base_(require_rank1(d, "pre-selection"), e, require_rank1(f, "post-selection")),
      complement_(d, e.complement(), f), pre_(d.ket(), "pre"), post_(f.ket(), "post") {}

Family::Family(const State &pre, Projector e, const State &post)
    : base_(Projector::onto(pre), e, Projector::onto(post)),
      complement_(Projector::onto(pre), e.complement(), Projector::onto(post)), pre_(pre),
      post_(post) {}

std::string_view failure_mode_name(FailureMode mode) noexcept {
    switch (mode) {
    case FailureMode::None: return "None";
    case FailureMode::Unsharp: return "Unsharp";
    case FailureMode::Strange: return "Strange";
    }
    return "?";
}

ConsistencyReport consistency(const Family &family) {
    const auto &h = family.base();
    const auto &e_prime = family.complement().e;
    ConsistencyReport report{};
    report.functional = trace_of_product(h.f.mat(), h.e.mat(), h.d.mat(), e_prime.mat());
    report.consistent = std::abs(report.functional) <= kTolerance;

    if (report.consistent) {
        report.failure_mode = FailureMode::None;
    } else if (std::abs(report.functional.imag()) <= kTolerance &&
               report.functional.real() > 0.0 && report.functional.real() < 1.0) {
        report.failure_mode = FailureMode::Unsharp;
    } else {
        report.failure_mode = FailureMode::Strange;
    }

    const Complex overlap = inner(family.post().vec(), family.pre().vec());
    if (std::abs(overlap) > kOverlapFloor) {
        ConsistencyFactors factors{};
        factors.overlap_sq = std::norm(overlap);
        factors.wv = weak_value_of(h.e.mat(), family.pre(), family.post());
        factors.wv_conj = std::conj(weak_value_of(e_prime.mat(), family.pre(), family.post()));
        const Complex factored = factors.overlap_sq * factors.wv * factors.wv_conj;
        if (std::abs(factored - report.functional) > kTolerance) {
            throw std::logic_error("consistency: trace and weak-value forms disagree");
        }
        report.factors = factors;
    }
    return report;
}

double abl_probability(const Observable &obs, const State &pre, const State &post,
                       double outcome) {
    const Projector &target = obs.projector_for(outcome);
    double numerator = 0.0;
    double denominator = 0.0;
    for (const auto &term : obs.spectrum()) {
        const double w = std::norm(inner(post.vec(), apply(term.projector.mat(), pre.vec())));
        denominator += w;
        if (&term.projector == &target) {
            numerator = w;
        }
    }
    if (denominator <= kOverlapFloor) {
        throw Error(ErrorKind::UndefinedABL,
                    "ABL probability undefined: every outcome forbids the post-selection");
    }
    return numerator / denominator;
}

double abl_from_weak_values(Complex wv) {
    const double yes = std::norm(wv);
    const double no = std::norm(Complex(1.0, 0.0) - wv);
    if (yes < 1e-24 && no < 1e-24) {
        throw Error(ErrorKind::UndefinedABL, "ABL probability undefined for this weak value");
    }
    return yes / (yes + no);
}

double history_weight(const History &history) {
    const Complex w =
        trace_of_product(history.d.mat(), history.e.mat(), history.f.mat(), history.e.mat());
    if (std::abs(w.imag()) > kTolerance) {
        throw std::logic_error("history weight has a non-negligible imaginary part");
    }
    return w.real();
}

double conditional_weight(const Projector &e, const Projector &d, const Projector &f) {
    require_conformable(d, f, "conditional weight");
    const double norm = trace(matmul(d.mat(), f.mat())).real();
    if (norm <= kOverlapFloor) {
        throw Error(ErrorKind::UndefinedWeight,
                    "conditional weight undefined: Tr[DF] vanishes");
    }
    return history_weight(History(d, e, f)) / norm;
}

bool abl_weight_agreement(const Family &family) {
    const auto &h = family.base();
    const Complex wv = weak_value_of(h.e.mat(), family.pre(), family.post());
    return std::abs(abl_from_weak_values(wv) - conditional_weight(h.e, h.d, h.f)) <= kTolerance;
}

} // namespace weakhist
