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

#ifndef QST_CHECKS_HPP
#define QST_CHECKS_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qst/channels.hpp"
#include "qst/circuit.hpp"
#include "qst/engine.hpp"
#include "qst/mitigation.hpp"
#include "qst/oracle.hpp"
#include "qst/quadrature.hpp"
#include "qst/sweep.hpp"

namespace qst {

struct CheckResult {
    std::string name;
    double error = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

namespace detail {

inline CheckResult make_check(std::string name, double error, double tol) {
    return {std::move(name), error, tol, error <= tol};
}

inline DensityMatrix probe_state(std::size_t n) {
    StateVector psi(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t s[1] = {k};
        apply_local_inplace(psi, u_gate(0.3 + 0.7 * static_cast<double>(k), 1.1 * static_cast<double>(k), 0.2), s);
    }
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const std::size_t s[2] = {k, k + 1};
        apply_local_inplace(psi, gates::CNOT(), s);
    }
    return DensityMatrix::from_pure(psi);
}

}  // namespace detail

/// Fast numerical invariants: channel validity, zero-noise transfer, oracle
/// agreement on a coarse grid, GHZ/teleport agreement, quadrature exactness,
/// Hellinger identities and folding at zero noise.
inline std::vector<CheckResult> run_invariant_checks() {
    std::vector<CheckResult> out;
    const SphereQuadrature quad{4, 4};

    {
        double err = 0.0;
        const auto rho = detail::probe_state(3);
        for (double p : {0.0, 0.1, 0.5, 0.75, 1.0}) {
            const auto a = apply_channel(rho, depolarizing_1q(p), {1});
            const auto b = apply_channel(rho, depolarizing_2q(p), {0, 1});
            for (const auto &r : {a, b}) {
                err = std::max(err, std::abs(r.trace() - 1.0));
                err = std::max(err, std::max(0.0, -min_eigenvalue(r)));
            }
        }
        out.push_back(detail::make_check("channels preserve trace and positivity", err, 1e-12));
    }

    {
        double err = 0.0;
        for (auto s : kTransferSchemes) {
            for (std::size_t n : {3, 5, 7}) {
                if (s == Scheme::Teleport && n % 2 == 0) continue;
                const auto r = bloch_averaged_eval(build_scheme(s, n), NoiseSpec::oracle_matched(0.0, 0.0), quad);
                err = std::max(err, std::abs(r.m0_recorded - 1.0));
            }
        }
        out.push_back(detail::make_check("zero-noise transfer succeeds", err, 1e-12));
    }

    {
        double err = 0.0;
        for (auto s : {Scheme::Swap, Scheme::Teleport, Scheme::Cluster}) {
            const auto c = build_scheme(s, 3);
            for (double p : {0.0, 0.3, 0.8}) {
                for (double q : {0.0, 0.4, 1.0}) {
                    const auto r = bloch_averaged_eval(c, NoiseSpec::oracle_matched(p, q), quad, true);
                    err = std::max(err, std::abs(r.m0_recorded - m_tilde(s, q, p)));
                    err = std::max(err, std::abs(*r.fidelity - fidelity(s, q, p)));
                }
            }
        }
        out.push_back(detail::make_check("engine matches closed-form series at n=3", err, 1e-10));
    }

    {
        double err = 0.0;
        const auto ghz = build_scheme(Scheme::Ghz, 3);
        const auto tel = build_scheme(Scheme::Teleport, 3);
        for (double p : {0.0, 0.2, 0.7}) {
            for (double q : {0.0, 0.3, 0.9}) {
                const auto spec = NoiseSpec::oracle_matched(p, q);
                err = std::max(err, std::abs(bloch_averaged_eval(ghz, spec, quad).m0_recorded -
                                             bloch_averaged_eval(tel, spec, quad).m0_recorded));
            }
        }
        out.push_back(detail::make_check("ghz and teleport agree at n=3", err, 1e-12));
    }

    {
        double err = 0.0;
        for (auto s : kTransferSchemes) {
            const auto c = build_scheme(s, 3);
            const auto spec = NoiseSpec::oracle_matched(0.37, 0.21);
            const auto a = bloch_averaged_eval(c, spec, quad, true);
            const auto b = bloch_averaged_eval(c, spec, quad.doubled(), true);
            err = std::max({err, std::abs(a.m0_recorded - b.m0_recorded), std::abs(*a.fidelity - *b.fidelity)});
        }
        out.push_back(detail::make_check("quadrature doubling is stable", err, 1e-12));
    }

    {
        double err = std::abs(hellinger_fidelity({0.3, 0.7}, {0.3, 0.7}) - 1.0);
        err = std::max(err, std::abs(hellinger_fidelity({1.0, 0.0}, {0.0, 1.0})));
        err = std::max(err, std::abs(hellinger_fidelity({1.0, 0.0}, {0.5, 0.5}) - 0.5));
        out.push_back(detail::make_check("hellinger identities", err, 1e-15));
    }

    {
        double err = 0.0;
        for (auto s : kTransferSchemes) {
            const auto folded = fold_circuit(build_scheme(s, 3), FoldSpec{{Gate::CNOT, Gate::H}, 3.0});
            const auto r = bloch_averaged_eval(folded, NoiseSpec::oracle_matched(0.0, 0.0), quad);
            err = std::max(err, std::abs(r.m0_recorded - 1.0));
        }
        out.push_back(detail::make_check("folded circuits transfer at zero noise", err, 1e-12));
    }
    return out;
}

}  // namespace qst

#endif
