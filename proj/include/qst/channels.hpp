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

#ifndef QST_CHANNELS_HPP
#define QST_CHANNELS_HPP

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qst/error.hpp"
#include "qst/tensor.hpp"

namespace qst {

/// U(theta, phi, lambda). With lambda = 0 this is the initializer used for
/// every transfer; its adjoint is the disentangler.
inline ComplexMatrix u_gate(double theta, double phi, double lam) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    const cplx ephi = std::polar(1.0, phi);
    const cplx elam = std::polar(1.0, lam);
    return ComplexMatrix{{c, -elam * s}, {ephi * s, ephi * elam * c}};
}

namespace detail {

inline void check_probability(double p, const char *what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ConfigError(std::string(what) + ": probability " + std::to_string(p) + " outside [0, 1]");
    }
}

}  // namespace detail

/// Operator-sum channel. Construction rejects operator sets that are not
/// trace preserving (sum E^dagger E = I within 1e-12).
class KrausChannel {
   public:
    /// Weights for I, X, Y, Z when the channel is a single-qubit Pauli mixture.
    using PauliWeights = std::array<double, 4>;

    explicit KrausChannel(std::vector<ComplexMatrix> operators) : ops_(std::move(operators)) {
        validate();
    }

    static KrausChannel pauli(const PauliWeights &w) {
        static const std::array<const ComplexMatrix *, 4> paulis{&gates::I(), &gates::X(), &gates::Y(), &gates::Z()};
        std::vector<ComplexMatrix> ops;
        for (std::size_t i = 0; i < 4; ++i) {
            if (w[i] < 0.0) {
                throw ConfigError("KrausChannel::pauli: negative weight");
            }
            if (w[i] > 0.0 || i == 0) {
                ops.push_back(cplx(std::sqrt(w[i])) * *paulis[i]);
            }
        }
        KrausChannel ch(std::move(ops));
        ch.pauli_ = w;
        return ch;
    }

    const std::vector<ComplexMatrix> &operators() const noexcept {
        return ops_;
    }
    std::size_t arity() const noexcept {
        return arity_;
    }
    const std::optional<PauliWeights> &pauli_weights() const noexcept {
        return pauli_;
    }

    /// max |sum E^dagger E - I|
    double completeness_error() const {
        ComplexMatrix acc(ops_.front().cols(), ops_.front().cols());
        for (const auto &e : ops_) {
            acc += e.adjoint() * e;
        }
        return acc.max_abs_diff(ComplexMatrix::identity(acc.rows()));
    }

   private:
    void validate() {
        if (ops_.empty()) {
            throw ConfigError("KrausChannel: no operators");
        }
        const std::size_t d = ops_.front().rows();
        if (d < 2 || (d & (d - 1)) != 0) {
            throw ConfigError("KrausChannel: operator dimension must be a power of two");
        }
        for (const auto &e : ops_) {
            if (e.rows() != d || e.cols() != d) {
                throw ConfigError("KrausChannel: operators differ in dimension");
            }
        }
        arity_ = 0;
        for (std::size_t v = d; v > 1; v >>= 1) {
            ++arity_;
        }
        const double err = completeness_error();
        if (err > 1e-12) {
            throw ConfigError("KrausChannel: completeness violated by " + std::to_string(err));
        }
    }

    std::vector<ComplexMatrix> ops_;
    std::size_t arity_ = 0;
    std::optional<PauliWeights> pauli_;
};

/// E0 = sqrt(1-p) I, E1..3 = sqrt(p/3) X, Y, Z.
inline KrausChannel depolarizing_1q(double p) {
    detail::check_probability(p, "depolarizing_1q");
    return KrausChannel::pauli({1.0 - p, p / 3.0, p / 3.0, p / 3.0});
}

/// Tensor product of two single-qubit depolarizers (16 operators).
inline KrausChannel depolarizing_2q(double p) {
    detail::check_probability(p, "depolarizing_2q");
    const auto one = depolarizing_1q(p);
    std::vector<ComplexMatrix> ops;
    for (const auto &a : one.operators()) {
        for (const auto &b : one.operators()) {
            ops.push_back(kron(a, b));
        }
    }
    return KrausChannel(std::move(ops));
}

// The flip constructors take the probability of the flip event. The
// published Kraus form writes the no-flip probability instead.

inline KrausChannel bit_flip(double flip_prob) {
    detail::check_probability(flip_prob, "bit_flip");
    return KrausChannel::pauli({1.0 - flip_prob, flip_prob, 0.0, 0.0});
}

inline KrausChannel phase_flip(double flip_prob) {
    detail::check_probability(flip_prob, "phase_flip");
    return KrausChannel::pauli({1.0 - flip_prob, 0.0, 0.0, flip_prob});
}

namespace detail {

/// rho <- w_I rho + w_X X rho X + w_Y Y rho Y + w_Z Z rho Z on one site,
/// done by index permutation.
inline void apply_pauli_mixture(DensityMatrix &rho, const KrausChannel::PauliWeights &w, std::size_t site) {
    const std::size_t n = rho.n_qubits();
    if (site >= n) {
        throw ConfigError("apply_channel: site out of range");
    }
    const std::size_t d = rho.dim();
    const std::size_t m = site_bit(n, site);
    const ComplexMatrix src = rho.matrix();
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const double sgn = ((i & m) != 0) == ((j & m) != 0) ? 1.0 : -1.0;
            rho(i, j) = (w[0] + w[3] * sgn) * src(i, j) + (w[1] + w[2] * sgn) * src(i ^ m, j ^ m);
        }
    }
}

}  // namespace detail

/// In-place sum_i E_i rho E_i^dagger on `sites`.
inline void apply_channel_inplace(DensityMatrix &rho, const KrausChannel &ch, std::span<const std::size_t> sites) {
    if (ch.arity() != sites.size()) {
        throw ConfigError("apply_channel: channel arity " + std::to_string(ch.arity()) + " but " +
                          std::to_string(sites.size()) + " sites");
    }
    if (ch.pauli_weights()) {
        detail::apply_pauli_mixture(rho, *ch.pauli_weights(), sites[0]);
        return;
    }
    DensityMatrix acc(rho.n_qubits(), ComplexMatrix(rho.dim(), rho.dim()), rho.is_branch());
    for (const auto &e : ch.operators()) {
        acc.matrix() += apply_local(rho, e, sites).matrix();
    }
    rho = std::move(acc);
}

inline DensityMatrix apply_channel(DensityMatrix rho, const KrausChannel &ch, std::span<const std::size_t> sites) {
    apply_channel_inplace(rho, ch, sites);
    return rho;
}
inline DensityMatrix apply_channel(DensityMatrix rho, const KrausChannel &ch, std::initializer_list<std::size_t> sites) {
    apply_channel_inplace(rho, ch, std::span<const std::size_t>(sites.begin(), sites.size()));
    return rho;
}

/// Classical readout response: q0 = P(1|0), q1 = P(0|1).
struct ReadoutModel {
    double q0 = 0.0;
    double q1 = 0.0;

    /// q0 = kappa q, q1 = q.
    static ReadoutModel from_q(double q, double kappa = 0.5) {
        ReadoutModel m{kappa * q, q};
        m.validate();
        return m;
    }

    void validate() const {
        detail::check_probability(q0, "ReadoutModel q0");
        detail::check_probability(q1, "ReadoutModel q1");
    }

    /// Column-stochastic response matrix, columns indexed by the true outcome.
    std::array<std::array<double, 2>, 2> response() const {
        return {{{1.0 - q0, q1}, {q0, 1.0 - q1}}};
    }

    /// Probability of misrecording a true outcome.
    double flip_probability(int true_outcome) const {
        return true_outcome == 0 ? q0 : q1;
    }
};

using Distribution2 = std::array<double, 2>;

inline Distribution2 apply_readout(const Distribution2 &m, const ReadoutModel &model) {
    model.validate();
    if (m[0] < 0.0 || m[1] < 0.0 || std::abs(m[0] + m[1] - 1.0) > 1e-9) {
        throw ConfigError("apply_readout: not a probability vector");
    }
    return {(1.0 - model.q0) * m[0] + model.q1 * m[1], model.q0 * m[0] + (1.0 - model.q1) * m[1]};
}

}  // namespace qst

#endif
