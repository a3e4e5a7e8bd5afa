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

#ifndef QST_SAMPLER_HPP
#define QST_SAMPLER_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include "qst/channels.hpp"
#include "qst/circuit.hpp"
#include "qst/engine.hpp"
#include "qst/error.hpp"
#include "qst/tensor.hpp"

namespace qst {

/// splitmix64 finalizer; used to derive independent per-task seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return mix_seed(master ^ mix_seed(index + 0x5851f42d4c957f2dULL));
}

/// mt19937_64 is fully specified by the standard, and uniform() avoids the
/// implementation-defined std distributions, so streams are portable.
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {
    }
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }
    bool bernoulli(double p) {
        return uniform() < p;
    }
    std::mt19937_64 &engine() {
        return engine_;
    }

   private:
    std::mt19937_64 engine_;
};

namespace detail {

inline void apply_pauli_sv(StateVector &psi, int pauli, std::size_t site) {
    if (pauli == 0) {
        return;
    }
    static const std::array<const ComplexMatrix *, 4> paulis{&gates::I(), &gates::X(), &gates::Y(), &gates::Z()};
    const std::size_t s[1] = {site};
    apply_local_inplace(psi, *paulis[static_cast<std::size_t>(pauli)], s);
}

/// One trajectory step of a Kraus channel: pick E_i with probability
/// ||E_i psi||^2 and renormalize.
inline void sample_kraus(StateVector &psi, const KrausChannel &ch, std::span<const std::size_t> sites, Rng &rng) {
    if (const auto &w = ch.pauli_weights()) {
        double u = rng.uniform();
        int pick = 3;
        for (int i = 0; i < 4; ++i) {
            if (u < (*w)[static_cast<std::size_t>(i)]) {
                pick = i;
                break;
            }
            u -= (*w)[static_cast<std::size_t>(i)];
        }
        while ((*w)[static_cast<std::size_t>(pick)] == 0.0) {
            --pick;
        }
        apply_pauli_sv(psi, pick, sites[0]);
        return;
    }
    const double u = rng.uniform();
    double acc = 0.0;
    const auto &ops = ch.operators();
    for (std::size_t i = 0; i < ops.size(); ++i) {
        StateVector cand = apply_local(psi, ops[i], sites);
        const double nrm = cand.norm();
        acc += nrm * nrm;
        if (u < acc || i + 1 == ops.size()) {
            if (nrm == 0.0) {
                continue;
            }
            cand.normalize();
            psi = std::move(cand);
            return;
        }
    }
}

inline int measure_sv(StateVector &psi, std::size_t site, Rng &rng) {
    const std::size_t m = site_bit(psi.n_qubits(), site);
    double p1 = 0.0;
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        if (i & m) {
            p1 += std::norm(psi[i]);
        }
    }
    const int outcome = rng.uniform() < p1 ? 1 : 0;
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        if (((i & m) != 0) != (outcome == 1)) {
            psi[i] = 0.0;
        }
    }
    psi.normalize();
    return outcome;
}

}  // namespace detail

/// Shot-by-shot trajectory estimate of the recorded success probability.
/// Every measurement result is misrecorded with probability q0 (true 0) or
/// q1 (true 1) and conditionals act on the recorded bit, whatever
/// spec.readout_mode says: this is the physical process the flip-channel
/// surrogate approximates.
inline EvalResult sample_shots(const Circuit &transfer, const NoiseSpec &spec, double theta, double phi,
                               std::size_t shots, std::uint64_t seed) {
    if (shots == 0) {
        throw ConfigError("sample_shots: shots must be positive");
    }
    spec.validate();
    const Circuit wrapped = wrap_protocol(transfer, theta, phi, WrapMode::Success);
    wrapped.validate();
    const auto readout = spec.readout();
    const auto depol = depolarizing_1q(spec.p);
    const auto &ops = wrapped.ops();

    std::vector<ComplexMatrix> unitary_cache(ops.size());
    for (std::size_t i = 0; i < ops.size(); ++i) {
        if (const auto *u = std::get_if<UnitaryOp>(&ops[i])) {
            unitary_cache[i] = u->gate.matrix();
        } else if (const auto *c = std::get_if<ConditionalOp>(&ops[i])) {
            unitary_cache[i] = c->gate.matrix();
        }
    }

    Rng rng(seed);
    std::size_t recorded_zero = 0;
    std::size_t true_zero = 0;
    std::vector<int> bits(wrapped.n_cbits(), 0);
    for (std::size_t shot = 0; shot < shots; ++shot) {
        StateVector psi(wrapped.n_qubits());
        int last_true = 0;
        int last_recorded = 0;
        for (std::size_t i = 0; i < ops.size(); ++i) {
            const auto &op = ops[i];
            if (const auto *u = std::get_if<UnitaryOp>(&op)) {
                apply_local_inplace(psi, unitary_cache[i], u->sites);
                if (spec.p > 0.0 && spec.placement.applies_to(u->cls)) {
                    for (auto s : u->sites) {
                        const std::size_t site[1] = {s};
                        detail::sample_kraus(psi, depol, site, rng);
                    }
                }
            } else if (const auto *m = std::get_if<MeasureOp>(&op)) {
                const int t = detail::measure_sv(psi, m->site, rng);
                const int r = rng.bernoulli(readout.flip_probability(t)) ? 1 - t : t;
                bits[m->cbit] = r;
                last_true = t;
                last_recorded = r;
            } else {
                const auto &cd = std::get<ConditionalOp>(op);
                const bool fires = bits[cd.cbit] == cd.trigger;
                const std::size_t site[1] = {cd.site};
                if (fires) {
                    apply_local_inplace(psi, unitary_cache[i], site);
                }
                if (spec.p > 0.0 && spec.placement.applies_to(OpClass::Conditional) &&
                    (fires || spec.conditional_noise == ConditionalNoise::Always)) {
                    detail::sample_kraus(psi, depol, site, rng);
                }
            }
        }
        recorded_zero += last_recorded == 0 ? 1 : 0;
        true_zero += last_true == 0 ? 1 : 0;
    }

    EvalResult r;
    const double n = static_cast<double>(shots);
    r.m0_recorded = static_cast<double>(recorded_zero) / n;
    r.m0_true = static_cast<double>(true_zero) / n;
    r.stderr_ = std::sqrt(r.m0_recorded * (1.0 - r.m0_recorded) / n);
    r.shots = shots;
    r.branch_count = 1;
    r.branch_weight = 1.0;
    return r;
}

}  // namespace qst

#endif
