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

#ifndef QST_TENSOR_HPP
#define QST_TENSOR_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qst/error.hpp"

namespace qst {

using cplx = std::complex<double>;

/// Largest register any state type accepts.
inline constexpr std::size_t kMaxQubits = 13;
/// Largest register held as a dense density matrix.
inline constexpr std::size_t kMaxDensityQubits = 8;

/// Dense row-major complex matrix.
class ComplexMatrix {
   public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
    }
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (data_.size() != rows_ * cols_) {
            throw ConfigError("ComplexMatrix: entry count does not match rows*cols");
        }
    }
    /// Square matrix from nested rows, e.g. {{1, 0}, {0, 1}}.
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto &r : rows) {
            if (r.size() != cols_) {
                throw ConfigError("ComplexMatrix: ragged initializer");
            }
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static ComplexMatrix identity(std::size_t dim) {
        ComplexMatrix m(dim, dim);
        for (std::size_t i = 0; i < dim; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    std::size_t rows() const noexcept {
        return rows_;
    }
    std::size_t cols() const noexcept {
        return cols_;
    }
    std::size_t size() const noexcept {
        return data_.size();
    }
    bool is_square() const noexcept {
        return rows_ == cols_;
    }

    cplx &operator()(std::size_t r, std::size_t c) {
        return data_[r * cols_ + c];
    }
    const cplx &operator()(std::size_t r, std::size_t c) const {
        return data_[r * cols_ + c];
    }
    std::span<cplx> entries() noexcept {
        return data_;
    }
    std::span<const cplx> entries() const noexcept {
        return data_;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) {
                out(c, r) = std::conj((*this)(r, c));
            }
        }
        return out;
    }

    cplx trace() const {
        cplx t = 0.0;
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) {
            t += (*this)(i, i);
        }
        return t;
    }

    ComplexMatrix &operator+=(const ComplexMatrix &other) {
        require_same_shape(other);
        for (std::size_t i = 0; i < data_.size(); ++i) {
            data_[i] += other.data_[i];
        }
        return *this;
    }
    ComplexMatrix &operator*=(cplx s) {
        for (auto &v : data_) {
            v *= s;
        }
        return *this;
    }
    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) {
        a += b;
        return a;
    }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) {
        a *= s;
        return a;
    }
    friend ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
        if (a.cols_ != b.rows_) {
            throw ConfigError("ComplexMatrix: inner dimensions differ");
        }
        ComplexMatrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx{}) {
                    continue;
                }
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    out(i, j) += aik * b(k, j);
                }
            }
        }
        return out;
    }
    friend std::vector<cplx> operator*(const ComplexMatrix &a, std::span<const cplx> v) {
        if (a.cols_ != v.size()) {
            throw ConfigError("ComplexMatrix: vector length mismatch");
        }
        std::vector<cplx> out(a.rows_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                out[i] += a(i, k) * v[k];
            }
        }
        return out;
    }

    /// Largest |a_ij - b_ij|. Shapes must agree.
    double max_abs_diff(const ComplexMatrix &other) const {
        require_same_shape(other);
        double m = 0.0;
        for (std::size_t i = 0; i < data_.size(); ++i) {
            m = std::max(m, std::abs(data_[i] - other.data_[i]));
        }
        return m;
    }

    bool is_hermitian(double tol = 1e-12) const {
        if (!is_square()) {
            return false;
        }
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = r; c < cols_; ++c) {
                if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) {
                    return false;
                }
            }
        }
        return true;
    }

    bool is_unitary(double tol = 1e-12) const {
        if (!is_square()) {
            return false;
        }
        return (adjoint() * (*this)).max_abs_diff(identity(rows_)) <= tol;
    }

   private:
    void require_same_shape(const ComplexMatrix &other) const {
        if (rows_ != other.rows_ || cols_ != other.cols_) {
            throw ConfigError("ComplexMatrix: shape mismatch");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

namespace gates {

inline const ComplexMatrix &I() {
    static const ComplexMatrix m{{1.0, 0.0}, {0.0, 1.0}};
    return m;
}
inline const ComplexMatrix &X() {
    static const ComplexMatrix m{{0.0, 1.0}, {1.0, 0.0}};
    return m;
}
inline const ComplexMatrix &Y() {
    static const ComplexMatrix m{{0.0, cplx(0.0, -1.0)}, {cplx(0.0, 1.0), 0.0}};
    return m;
}
inline const ComplexMatrix &Z() {
    static const ComplexMatrix m{{1.0, 0.0}, {0.0, -1.0}};
    return m;
}
inline const ComplexMatrix &H() {
    static const double s = 1.0 / std::sqrt(2.0);
    static const ComplexMatrix m{{s, s}, {s, -s}};
    return m;
}
/// Control is the first (more significant) site.
inline const ComplexMatrix &CNOT() {
    static const ComplexMatrix m{{1.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 1.0}, {0.0, 0.0, 1.0, 0.0}};
    return m;
}
inline const ComplexMatrix &CZ() {
    static const ComplexMatrix m{
        {1.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0}, {0.0, 0.0, 1.0, 0.0}, {0.0, 0.0, 0.0, -1.0}};
    return m;
}

}  // namespace gates

inline ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    const std::size_t rows = a.rows() * b.rows();
    const std::size_t cols = a.cols() * b.cols();
    constexpr std::size_t cap = std::size_t{1} << kMaxQubits;
    if (rows > cap || cols > cap) {
        throw ConfigError("kron: result exceeds the " + std::to_string(kMaxQubits) + "-qubit cap");
    }
    ComplexMatrix out(rows, cols);
    for (std::size_t ar = 0; ar < a.rows(); ++ar) {
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const cplx v = a(ar, ac);
            for (std::size_t br = 0; br < b.rows(); ++br) {
                for (std::size_t bc = 0; bc < b.cols(); ++bc) {
                    out(ar * b.rows() + br, ac * b.cols() + bc) = v * b(br, bc);
                }
            }
        }
    }
    return out;
}

/// Pure state of n qubits. Qubit 0 is the most significant bit of the index.
class StateVector {
   public:
    StateVector() = default;
    /// |0...0>
    explicit StateVector(std::size_t n_qubits) : n_(n_qubits) {
        if (n_qubits == 0 || n_qubits > kMaxQubits) {
            throw ConfigError("StateVector: qubit count must be in [1, " + std::to_string(kMaxQubits) + "]");
        }
        amps_.assign(std::size_t{1} << n_qubits, cplx{});
        amps_[0] = 1.0;
    }
    StateVector(std::size_t n_qubits, std::vector<cplx> amplitudes) : n_(n_qubits), amps_(std::move(amplitudes)) {
        if (n_qubits == 0 || n_qubits > kMaxQubits || amps_.size() != (std::size_t{1} << n_qubits)) {
            throw ConfigError("StateVector: amplitude count must be 2^n");
        }
    }

    std::size_t n_qubits() const noexcept {
        return n_;
    }
    std::size_t dim() const noexcept {
        return amps_.size();
    }
    std::span<cplx> amplitudes() noexcept {
        return amps_;
    }
    std::span<const cplx> amplitudes() const noexcept {
        return amps_;
    }
    cplx &operator[](std::size_t i) {
        return amps_[i];
    }
    const cplx &operator[](std::size_t i) const {
        return amps_[i];
    }

    double norm() const {
        double s = 0.0;
        for (const auto &a : amps_) {
            s += std::norm(a);
        }
        return std::sqrt(s);
    }
    void normalize() {
        const double n = norm();
        if (n == 0.0) {
            throw InvariantError("StateVector: cannot normalize the zero vector");
        }
        for (auto &a : amps_) {
            a /= n;
        }
    }

   private:
    std::size_t n_ = 0;
    std::vector<cplx> amps_;
};

/// Dense density matrix. A branch-tagged matrix is a legal sub-normalized
/// state whose trace carries the probability of a measurement branch.
class DensityMatrix {
   public:
    DensityMatrix() = default;
    /// |0...0><0...0|
    explicit DensityMatrix(std::size_t n_qubits) : n_(n_qubits) {
        check_size(n_qubits);
        const std::size_t d = std::size_t{1} << n_qubits;
        m_ = ComplexMatrix(d, d);
        m_(0, 0) = 1.0;
    }
    DensityMatrix(std::size_t n_qubits, ComplexMatrix m, bool branch = false)
        : n_(n_qubits), m_(std::move(m)), branch_(branch) {
        check_size(n_qubits);
        const std::size_t d = std::size_t{1} << n_qubits;
        if (m_.rows() != d || m_.cols() != d) {
            throw ConfigError("DensityMatrix: matrix must be 2^n x 2^n");
        }
    }
    static DensityMatrix from_pure(const StateVector &psi) {
        const std::size_t d = psi.dim();
        ComplexMatrix m(d, d);
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = 0; c < d; ++c) {
                m(r, c) = psi[r] * std::conj(psi[c]);
            }
        }
        return DensityMatrix(psi.n_qubits(), std::move(m));
    }

    std::size_t n_qubits() const noexcept {
        return n_;
    }
    std::size_t dim() const noexcept {
        return m_.rows();
    }
    const ComplexMatrix &matrix() const noexcept {
        return m_;
    }
    ComplexMatrix &matrix() noexcept {
        return m_;
    }
    cplx &operator()(std::size_t r, std::size_t c) {
        return m_(r, c);
    }
    const cplx &operator()(std::size_t r, std::size_t c) const {
        return m_(r, c);
    }

    bool is_branch() const noexcept {
        return branch_;
    }
    void set_branch(bool branch) noexcept {
        branch_ = branch;
    }
    double trace() const {
        return m_.trace().real();
    }

    /// Hermitian within 1e-12 and, unless branch-tagged, unit trace.
    void check_valid(double tol = 1e-12) const {
        if (!m_.is_hermitian(tol)) {
            throw InvariantError("DensityMatrix: not Hermitian");
        }
        if (!branch_ && std::abs(trace() - 1.0) > tol) {
            throw InvariantError("DensityMatrix: trace " + std::to_string(trace()) + " != 1");
        }
    }

   private:
    static void check_size(std::size_t n) {
        if (n == 0 || n > kMaxDensityQubits) {
            throw ConfigError("DensityMatrix: qubit count must be in [1, " + std::to_string(kMaxDensityQubits) + "]");
        }
    }

    std::size_t n_ = 0;
    ComplexMatrix m_;
    bool branch_ = false;
};

namespace detail {

inline std::size_t site_bit(std::size_t n, std::size_t site) {
    return std::size_t{1} << (n - 1 - site);
}

inline void check_sites(std::size_t n, std::span<const std::size_t> sites) {
    if (sites.empty()) {
        throw ConfigError("apply_local: no sites given");
    }
    for (std::size_t i = 0; i < sites.size(); ++i) {
        if (sites[i] >= n) {
            throw ConfigError("apply_local: site " + std::to_string(sites[i]) + " out of range for " +
                              std::to_string(n) + " qubits");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (sites[i] == sites[j]) {
                throw ConfigError("apply_local: duplicate site " + std::to_string(sites[i]));
            }
        }
    }
}

/// Index layout of a k-site operator embedded in an n-qubit register.
struct Embedding {
    std::size_t site_mask = 0;
    std::vector<std::size_t> offsets;  // offsets[a] for local basis index a

    Embedding(std::size_t n, std::span<const std::size_t> sites) {
        check_sites(n, sites);
        const std::size_t k = sites.size();
        offsets.assign(std::size_t{1} << k, 0);
        for (std::size_t a = 0; a < offsets.size(); ++a) {
            for (std::size_t j = 0; j < k; ++j) {
                if ((a >> (k - 1 - j)) & 1U) {
                    offsets[a] |= site_bit(n, sites[j]);
                }
            }
        }
        for (auto s : sites) {
            site_mask |= site_bit(n, s);
        }
    }
};

inline void check_op(const ComplexMatrix &op, std::size_t k) {
    const std::size_t d = std::size_t{1} << k;
    if (op.rows() != d || op.cols() != d) {
        throw ConfigError("apply_local: operator dimension " + std::to_string(op.rows()) + " does not match 2^" +
                          std::to_string(k));
    }
}

/// x <- (op (x) I) x over a strided vector of length dim.
inline void left_apply(const ComplexMatrix &op, const Embedding &e, cplx *x, std::size_t dim, std::size_t stride,
                       std::vector<cplx> &scratch) {
    const std::size_t local = e.offsets.size();
    scratch.resize(2 * local);
    cplx *in = scratch.data();
    cplx *out = scratch.data() + local;
    for (std::size_t base = 0; base < dim; ++base) {
        if (base & e.site_mask) {
            continue;
        }
        for (std::size_t a = 0; a < local; ++a) {
            in[a] = x[(base | e.offsets[a]) * stride];
        }
        for (std::size_t a = 0; a < local; ++a) {
            cplx acc = 0.0;
            for (std::size_t b = 0; b < local; ++b) {
                acc += op(a, b) * in[b];
            }
            out[a] = acc;
        }
        for (std::size_t a = 0; a < local; ++a) {
            x[(base | e.offsets[a]) * stride] = out[a];
        }
    }
}

/// x <- x (op (x) I)^dagger for a row vector x.
inline void right_apply_adjoint(const ComplexMatrix &op, const Embedding &e, cplx *x, std::size_t dim,
                                std::vector<cplx> &scratch) {
    const std::size_t local = e.offsets.size();
    scratch.resize(2 * local);
    cplx *in = scratch.data();
    cplx *out = scratch.data() + local;
    for (std::size_t base = 0; base < dim; ++base) {
        if (base & e.site_mask) {
            continue;
        }
        for (std::size_t a = 0; a < local; ++a) {
            in[a] = x[base | e.offsets[a]];
        }
        for (std::size_t a = 0; a < local; ++a) {
            cplx acc = 0.0;
            for (std::size_t b = 0; b < local; ++b) {
                acc += in[b] * std::conj(op(a, b));
            }
            out[a] = acc;
        }
        for (std::size_t a = 0; a < local; ++a) {
            x[base | e.offsets[a]] = out[a];
        }
    }
}

}  // namespace detail

/// In-place rho -> U rho U^dagger with U acting on `sites` (sites[0] is the
/// most significant local index). Works for any square operator, not only
/// unitaries, which is what Kraus application needs.
inline void apply_local_inplace(DensityMatrix &rho, const ComplexMatrix &op, std::span<const std::size_t> sites) {
    const std::size_t n = rho.n_qubits();
    detail::Embedding e(n, sites);
    detail::check_op(op, sites.size());
    const std::size_t d = rho.dim();
    std::vector<cplx> scratch;
    cplx *m = rho.matrix().entries().data();
    for (std::size_t c = 0; c < d; ++c) {
        detail::left_apply(op, e, m + c, d, d, scratch);
    }
    for (std::size_t r = 0; r < d; ++r) {
        detail::right_apply_adjoint(op, e, m + r * d, d, scratch);
    }
}

inline void apply_local_inplace(StateVector &psi, const ComplexMatrix &op, std::span<const std::size_t> sites) {
    detail::Embedding e(psi.n_qubits(), sites);
    detail::check_op(op, sites.size());
    std::vector<cplx> scratch;
    detail::left_apply(op, e, psi.amplitudes().data(), psi.dim(), 1, scratch);
}

inline DensityMatrix apply_local(DensityMatrix rho, const ComplexMatrix &op, std::span<const std::size_t> sites) {
    apply_local_inplace(rho, op, sites);
    return rho;
}
inline DensityMatrix apply_local(DensityMatrix rho, const ComplexMatrix &op, std::initializer_list<std::size_t> sites) {
    apply_local_inplace(rho, op, std::span<const std::size_t>(sites.begin(), sites.size()));
    return rho;
}
inline StateVector apply_local(StateVector psi, const ComplexMatrix &op, std::span<const std::size_t> sites) {
    apply_local_inplace(psi, op, sites);
    return psi;
}
inline StateVector apply_local(StateVector psi, const ComplexMatrix &op, std::initializer_list<std::size_t> sites) {
    apply_local_inplace(psi, op, std::span<const std::size_t>(sites.begin(), sites.size()));
    return psi;
}

/// Reduced state on `keep`, ordered as given. Keeping every qubit in
/// ascending order returns the input unchanged.
inline DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const std::size_t> keep) {
    if (keep.empty()) {
        throw ConfigError("partial_trace: keep set is empty");
    }
    const std::size_t n = rho.n_qubits();
    detail::Embedding e(n, keep);
    const std::size_t k = keep.size();
    const std::size_t dk = std::size_t{1} << k;
    const std::size_t d = rho.dim();
    ComplexMatrix out(dk, dk);
    for (std::size_t env = 0; env < d; ++env) {
        if (env & e.site_mask) {
            continue;
        }
        for (std::size_t a = 0; a < dk; ++a) {
            const std::size_t r = env | e.offsets[a];
            for (std::size_t b = 0; b < dk; ++b) {
                out(a, b) += rho(r, env | e.offsets[b]);
            }
        }
    }
    return DensityMatrix(k, std::move(out), rho.is_branch());
}
inline DensityMatrix partial_trace(const DensityMatrix &rho, std::initializer_list<std::size_t> keep) {
    return partial_trace(rho, std::span<const std::size_t>(keep.begin(), keep.size()));
}

/// Smallest eigenvalue of a Hermitian matrix (direct solver).
inline double min_eigenvalue(const ComplexMatrix &m) {
    if (!m.is_hermitian(1e-10)) {
        throw ConfigError("min_eigenvalue: input is not Hermitian within 1e-10");
    }
    const auto d = static_cast<Eigen::Index>(m.rows());
    Eigen::MatrixXcd a(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) {
            a(r, c) = m(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}
inline double min_eigenvalue(const DensityMatrix &rho) {
    return min_eigenvalue(rho.matrix());
}

}  // namespace qst

#endif
