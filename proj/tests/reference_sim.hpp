// Copyright 2026 The qst Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QST_TESTS_REFERENCE_SIM_HPP
#define QST_TESTS_REFERENCE_SIM_HPP

// Slow reference density-matrix simulator for cross-checking the engine:
// full 2^n operators built by Kronecker products, explicit branches kept
// separate (no merging), depolarizing written out Pauli by Pauli.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <variant>
#include <vector>

#include "qst/circuit.hpp"
#include "qst/engine.hpp"

namespace qst_ref {

using Mat = Eigen::MatrixXcd;
using C = std::complex<double>;

inline Mat pauli(int k) {
    Mat m(2, 2);
    switch (k) {
        case 0:
            m << 1, 0, 0, 1;
            break;
        case 1:
            m << 0, 1, 1, 0;
            break;
        case 2:
            m << 0, C(0, -1), C(0, 1), 0;
            break;
        default:
            m << 1, 0, 0, -1;
            break;
    }
    return m;
}

inline Mat kron(const Mat &a, const Mat &b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline Mat to_eigen(const qst::ComplexMatrix &m) {
    Mat out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
        }
    }
    return out;
}

/// Single-qubit operator on `site` of an n-qubit register (site 0 leftmost).
inline Mat embed1(const Mat &op, std::size_t site, std::size_t n) {
    Mat out = Mat::Identity(1, 1);
    for (std::size_t k = 0; k < n; ++k) {
        out = kron(out, k == site ? op : Mat::Identity(2, 2));
    }
    return out;
}

/// Two-qubit operator on ordered sites (a, b) by explicit permutation.
inline Mat embed2(const Mat &op, std::size_t a, std::size_t b, std::size_t n) {
    const std::size_t d = std::size_t{1} << n;
    Mat out = Mat::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    auto bit = [n](std::size_t x, std::size_t s) { return (x >> (n - 1 - s)) & 1U; };
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            bool rest_equal = true;
            for (std::size_t s = 0; s < n; ++s) {
                if (s != a && s != b && bit(i, s) != bit(j, s)) rest_equal = false;
            }
            if (!rest_equal) continue;
            const auto r = static_cast<Eigen::Index>(2 * bit(i, a) + bit(i, b));
            const auto c = static_cast<Eigen::Index>(2 * bit(j, a) + bit(j, b));
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = op(r, c);
        }
    }
    return out;
}

inline Mat embed(const Mat &op, const std::vector<std::size_t> &sites, std::size_t n) {
    return sites.size() == 1 ? embed1(op, sites[0], n) : embed2(op, sites[0], sites[1], n);
}

inline void depolarize(Mat &rho, double p, std::size_t site, std::size_t n) {
    Mat acc = (1.0 - p) * rho;
    for (int k = 1; k < 4; ++k) {
        const Mat P = embed1(pauli(k), site, n);
        acc += (p / 3.0) * P * rho * P.adjoint();
    }
    rho = acc;
}

struct RefBranch {
    Mat rho;
    std::vector<int> bits;
};

/// Success probability P(final qubit reads 0) before and after the final
/// readout for a success-mode wrapped circuit, with the semantics of the
/// oracle-matched noise specification (flip-channel readout surrogate,
/// conditional noise on every branch, noise after every gate).
struct RefResult {
    double m0_true = 0.0;
    double m0_recorded = 0.0;
};

inline RefResult simulate(const qst::Circuit &wrapped, double p, double q, double kappa) {
    const std::size_t n = wrapped.n_qubits();
    const std::size_t d = std::size_t{1} << n;
    Mat rho0 = Mat::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    rho0(0, 0) = 1.0;
    std::vector<RefBranch> branches{{rho0, std::vector<int>(wrapped.n_cbits(), 0)}};
    const auto &ops = wrapped.ops();
    const std::size_t stop = ops.size() - 1;  // final measurement handled below
    const double q0 = kappa * q;
    const double q1 = q;
    for (std::size_t i = 0; i < stop; ++i) {
        std::vector<RefBranch> next;
        for (auto &b : branches) {
            if (const auto *u = std::get_if<qst::UnitaryOp>(&ops[i])) {
                const std::vector<std::size_t> sites(u->sites.begin(), u->sites.end());
                const Mat U = embed(to_eigen(u->gate.matrix()), sites, n);
                b.rho = U * b.rho * U.adjoint();
                for (auto s : sites) depolarize(b.rho, p, s, n);
                next.push_back(std::move(b));
            } else if (const auto *m = std::get_if<qst::MeasureOp>(&ops[i])) {
                for (int t = 0; t < 2; ++t) {
                    Mat P = Mat::Zero(2, 2);
                    P(t, t) = 1.0;
                    const Mat E = embed1(P, m->site, n);
                    RefBranch nb{E * b.rho * E.adjoint(), b.bits};
                    nb.bits[m->cbit] = t;
                    next.push_back(std::move(nb));
                }
            } else {
                const auto &cd = std::get<qst::ConditionalOp>(ops[i]);
                const int bit = b.bits[cd.cbit];
                const Mat G = embed1(to_eigen(cd.gate.matrix()), cd.site, n);
                if (bit == cd.trigger) {
                    b.rho = G * b.rho * G.adjoint();
                }
                depolarize(b.rho, p, cd.site, n);
                const double f = bit == 1 ? q1 : q0;
                b.rho = (1.0 - f) * b.rho + f * G * b.rho * G.adjoint();
                next.push_back(std::move(b));
            }
        }
        branches = std::move(next);
    }
    const auto &final_m = std::get<qst::MeasureOp>(ops.back());
    Mat P0 = Mat::Zero(2, 2);
    P0(0, 0) = 1.0;
    const Mat E0 = embed1(P0, final_m.site, n);
    RefResult r;
    for (const auto &b : branches) {
        r.m0_true += (E0 * b.rho).trace().real();
    }
    r.m0_recorded = (1.0 - q0) * r.m0_true + q1 * (1.0 - r.m0_true);
    return r;
}

}  // namespace qst_ref

#endif
