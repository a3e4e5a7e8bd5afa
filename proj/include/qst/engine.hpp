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

#ifndef QST_ENGINE_HPP
#define QST_ENGINE_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qst/channels.hpp"
#include "qst/circuit.hpp"
#include "qst/error.hpp"
#include "qst/quadrature.hpp"
#include "qst/tensor.hpp"

namespace qst {

/// How a misrecorded mid-circuit measurement is modelled.
enum class ReadoutMode {
    /// Conditionals follow the true outcome; a bit/phase flip channel with the
    /// misread probability of that outcome stands in for misfires.
    FlipChannelApprox,
    /// Branch on the recorded bit as well; conditionals follow the record.
    ExactRecord,
};

enum class ConditionalNoise {
    WhenApplied,  // depolarize only on branches where the gate fires
    Always,       // depolarize on every branch, fired or not
};

enum class BranchWeighting { Probability, Uniform };

inline std::string_view to_string(ReadoutMode m) {
    return m == ReadoutMode::FlipChannelApprox ? "flip-channel-approx" : "exact-record";
}
inline ReadoutMode parse_readout_mode(std::string_view s) {
    if (s == "flip-channel-approx") return ReadoutMode::FlipChannelApprox;
    if (s == "exact-record") return ReadoutMode::ExactRecord;
    throw ConfigError("unknown readout mode '" + std::string(s) + "'");
}
inline std::string_view to_string(ConditionalNoise c) {
    return c == ConditionalNoise::WhenApplied ? "when-applied" : "always";
}
inline ConditionalNoise parse_conditional_noise(std::string_view s) {
    if (s == "when-applied") return ConditionalNoise::WhenApplied;
    if (s == "always") return ConditionalNoise::Always;
    throw ConfigError("unknown conditional-noise setting '" + std::string(s) + "'");
}

/// Full error configuration of one evaluation.
struct NoiseSpec {
    double p = 0.0;      // depolarizing probability per qubit per noisy gate
    double q = 0.0;      // readout parameter, P(0|1) = q
    double kappa = 0.5;  // P(1|0) = kappa q
    NoisePlacementPolicy placement = NoisePlacementPolicy::all_gates_including_boundary();
    ReadoutMode readout_mode = ReadoutMode::FlipChannelApprox;
    ConditionalNoise conditional_noise = ConditionalNoise::WhenApplied;
    BranchWeighting weighting = BranchWeighting::Probability;

    /// The configuration whose 3-qubit Bloch averages reproduce the closed
    /// form series for every scheme: noise after every gate including the
    /// initializer and disentangler, conditionals noisy on every branch.
    static NoiseSpec oracle_matched(double p, double q, double kappa = 0.5) {
        NoiseSpec s;
        s.p = p;
        s.q = q;
        s.kappa = kappa;
        s.placement = NoisePlacementPolicy::all_gates_including_boundary();
        s.readout_mode = ReadoutMode::FlipChannelApprox;
        s.conditional_noise = ConditionalNoise::Always;
        return s;
    }

    ReadoutModel readout() const {
        return ReadoutModel{kappa * q, q};
    }

    void validate() const {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ConfigError("NoiseSpec: p must lie in [0, 1]");
        }
        if (!(q >= 0.0 && q <= 1.0)) {
            throw ConfigError("NoiseSpec: q must lie in [0, 1]");
        }
        if (!(kappa >= 0.0) || kappa * q > 1.0) {
            throw ConfigError("NoiseSpec: kappa must be >= 0 with kappa*q <= 1");
        }
    }
};

struct EvalResult {
    double m0_true = 0.0;      // before the final readout response
    double m0_recorded = 0.0;  // after the final readout response
    std::optional<double> fidelity;
    std::optional<double> stderr_;
    std::optional<std::size_t> shots;
    std::size_t branch_count = 0;
    double branch_weight = 0.0;  // sum of branch probabilities
};

namespace detail {

struct Branch {
    DensityMatrix rho;
    std::uint64_t record = 0;
};

inline void project_site(DensityMatrix &rho, std::size_t site, int outcome) {
    const std::size_t m = site_bit(rho.n_qubits(), site);
    const std::size_t d = rho.dim();
    for (std::size_t i = 0; i < d; ++i) {
        const bool ri = ((i & m) != 0) == (outcome == 1);
        for (std::size_t j = 0; j < d; ++j) {
            const bool rj = ((j & m) != 0) == (outcome == 1);
            if (!(ri && rj)) {
                rho(i, j) = 0.0;
            }
        }
    }
    rho.set_branch(true);
}

inline double prob_zero(const DensityMatrix &rho, std::size_t site) {
    const std::size_t m = site_bit(rho.n_qubits(), site);
    double s = 0.0;
    for (std::size_t i = 0; i < rho.dim(); ++i) {
        if ((i & m) == 0) {
            s += rho(i, i).real();
        }
    }
    return s;
}

inline KrausChannel flip_for(const GateSpec &g, double prob) {
    switch (g.gate) {
        case Gate::X:
            return bit_flip(prob);
        case Gate::Z:
            return phase_flip(prob);
        case Gate::Y:
            return KrausChannel::pauli({1.0 - prob, 0.0, prob, 0.0});
        case Gate::I:
            return KrausChannel::pauli({1.0, 0.0, 0.0, 0.0});
        default:
            break;
    }
    throw ConfigError("flip-channel-approx: conditional gate must be a Pauli");
}

/// live[i]: classical bits read by some op after index i.
inline std::vector<std::uint64_t> live_bits_after(const Circuit &c) {
    const auto &ops = c.ops();
    std::vector<std::uint64_t> live(ops.size(), 0);
    std::uint64_t acc = 0;
    for (std::size_t i = ops.size(); i-- > 0;) {
        live[i] = acc;
        if (const auto *cd = std::get_if<ConditionalOp>(&ops[i])) {
            acc |= std::uint64_t{1} << cd->cbit;
        }
    }
    return live;
}

class BranchEvolver {
   public:
    BranchEvolver(const Circuit &c, const NoiseSpec &spec) : circuit_(c), spec_(spec) {
        spec_.validate();
        if (c.n_qubits() > kMaxDensityQubits) {
            throw ConfigError("exact evaluation supports at most " + std::to_string(kMaxDensityQubits) +
                              " qubits; use sampling for larger chains");
        }
        if (c.n_cbits() > 63) {
            throw ConfigError("exact evaluation supports at most 63 classical bits");
        }
        c.validate();
        depol_ = depolarizing_1q(spec.p);
    }

    /// Runs ops [0, stop) and returns the branches.
    std::vector<Branch> run(std::size_t stop) {
        const auto live = spec_.weighting == BranchWeighting::Uniform ? std::vector<std::uint64_t>(stop, ~std::uint64_t{0})
                                                                      : live_bits_after(circuit_);
        std::vector<Branch> branches;
        branches.push_back({DensityMatrix(circuit_.n_qubits()), 0});
        const auto &ops = circuit_.ops();
        for (std::size_t i = 0; i < stop; ++i) {
            std::vector<Branch> next;
            for (auto &b : branches) {
                step(ops[i], std::move(b), next);
            }
            branches = merge(std::move(next), live[i]);
        }
        return branches;
    }

   private:
    void noise(DensityMatrix &rho, std::size_t site) const {
        if (spec_.p == 0.0) {
            return;
        }
        const std::size_t s[1] = {site};
        apply_channel_inplace(rho, depol_, s);
    }

    void step(const CircuitOp &op, Branch b, std::vector<Branch> &out) const {
        if (const auto *u = std::get_if<UnitaryOp>(&op)) {
            apply_local_inplace(b.rho, u->gate.matrix(), u->sites);
            if (spec_.placement.applies_to(u->cls)) {
                for (auto s : u->sites) {
                    noise(b.rho, s);
                }
            }
            out.push_back(std::move(b));
        } else if (const auto *m = std::get_if<MeasureOp>(&op)) {
            const auto readout = spec_.readout();
            const auto lambda = readout.response();
            for (int t = 0; t < 2; ++t) {
                DensityMatrix proj = b.rho;
                project_site(proj, m->site, t);
                if (proj.trace() == 0.0) {
                    continue;
                }
                if (spec_.readout_mode == ReadoutMode::FlipChannelApprox) {
                    out.push_back({std::move(proj), with_bit(b.record, m->cbit, t)});
                    continue;
                }
                for (int r = 0; r < 2; ++r) {
                    const double w = lambda[static_cast<std::size_t>(r)][static_cast<std::size_t>(t)];
                    if (w == 0.0) {
                        continue;
                    }
                    DensityMatrix rec = proj;
                    rec.matrix() *= w;
                    out.push_back({std::move(rec), with_bit(b.record, m->cbit, r)});
                }
            }
        } else {
            const auto &cd = std::get<ConditionalOp>(op);
            const int bit = static_cast<int>((b.record >> cd.cbit) & 1U);
            const bool fires = bit == cd.trigger;
            const std::size_t sites[1] = {cd.site};
            if (fires) {
                apply_local_inplace(b.rho, cd.gate.matrix(), sites);
            }
            if (spec_.placement.applies_to(OpClass::Conditional) &&
                (fires || spec_.conditional_noise == ConditionalNoise::Always)) {
                noise(b.rho, cd.site);
            }
            if (spec_.readout_mode == ReadoutMode::FlipChannelApprox) {
                const double f = spec_.readout().flip_probability(bit);
                if (f > 0.0) {
                    apply_channel_inplace(b.rho, flip_for(cd.gate, f), sites);
                }
            }
            out.push_back(std::move(b));
        }
    }

    static std::uint64_t with_bit(std::uint64_t record, std::size_t cbit, int v) {
        const std::uint64_t m = std::uint64_t{1} << cbit;
        return v != 0 ? (record | m) : (record & ~m);
    }

    static std::vector<Branch> merge(std::vector<Branch> in, std::uint64_t live) {
        std::vector<Branch> out;
        std::map<std::uint64_t, std::size_t> index;
        for (auto &b : in) {
            b.record &= live;
            auto [it, inserted] = index.emplace(b.record, out.size());
            if (inserted) {
                out.push_back(std::move(b));
            } else {
                out[it->second].rho.matrix() += b.rho.matrix();
            }
        }
        return out;
    }

    const Circuit &circuit_;
    NoiseSpec spec_;
    KrausChannel depol_ = depolarizing_1q(0.0);
};

inline void check_weight(double w) {
    if (std::abs(w - 1.0) > 1e-12) {
        throw InvariantError("branch probabilities sum to " + std::to_string(w) + ", expected 1");
    }
}

}  // namespace detail

/// Exact expectation of a success-mode wrapped circuit by branch enumeration.
inline EvalResult evaluate_wrapped(const Circuit &wrapped, const NoiseSpec &spec) {
    if (wrapped.wrap_mode() != WrapMode::Success || wrapped.ops().empty() ||
        !std::holds_alternative<MeasureOp>(wrapped.ops().back())) {
        throw ConfigError("evaluate_wrapped: expects a success-mode wrapped circuit ending in the final measurement");
    }
    const auto &final_measure = std::get<MeasureOp>(wrapped.ops().back());
    detail::BranchEvolver evolver(wrapped, spec);
    const auto branches = evolver.run(wrapped.ops().size() - 1);

    EvalResult r;
    r.branch_count = branches.size();
    double uniform_acc = 0.0;
    std::size_t uniform_n = 0;
    for (const auto &b : branches) {
        const double w = b.rho.trace();
        const double p0 = detail::prob_zero(b.rho, final_measure.site);
        r.branch_weight += w;
        r.m0_true += p0;
        if (w > 1e-14) {
            uniform_acc += p0 / w;
            ++uniform_n;
        }
    }
    detail::check_weight(r.branch_weight);
    if (spec.weighting == BranchWeighting::Uniform) {
        r.m0_true = uniform_acc / static_cast<double>(uniform_n);
    }
    r.m0_true = std::clamp(r.m0_true, 0.0, 1.0);
    r.m0_recorded = apply_readout({r.m0_true, 1.0 - r.m0_true}, spec.readout())[0];
    return r;
}

/// <tau| rho_last |tau> for a fidelity-mode wrapped circuit.
inline double fidelity_wrapped(const Circuit &wrapped, const NoiseSpec &spec) {
    if (wrapped.wrap_mode() != WrapMode::Fidelity) {
        throw ConfigError("fidelity_wrapped: expects a fidelity-mode wrapped circuit");
    }
    detail::BranchEvolver evolver(wrapped, spec);
    const auto branches = evolver.run(wrapped.ops().size());
    const auto angles = *wrapped.initial_state();
    const auto u = u_gate(angles.theta, angles.phi, 0.0);
    const cplx tau[2] = {u(0, 0), u(1, 0)};
    const std::size_t last[1] = {wrapped.n_qubits() - 1};
    double weight = 0.0;
    double fid = 0.0;
    double uniform_acc = 0.0;
    std::size_t uniform_n = 0;
    for (const auto &b : branches) {
        const auto red = partial_trace(b.rho, last);
        cplx v = 0.0;
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                v += std::conj(tau[i]) * red(i, j) * tau[j];
            }
        }
        const double w = b.rho.trace();
        weight += w;
        fid += v.real();
        if (w > 1e-14) {
            uniform_acc += v.real() / w;
            ++uniform_n;
        }
    }
    detail::check_weight(weight);
    if (spec.weighting == BranchWeighting::Uniform) {
        return uniform_acc / static_cast<double>(uniform_n);
    }
    return fid;
}

/// Wraps a transfer circuit for the state (theta, phi) and evaluates it exactly.
inline EvalResult exact_eval(const Circuit &transfer, const NoiseSpec &spec, double theta, double phi) {
    return evaluate_wrapped(wrap_protocol(transfer, theta, phi, WrapMode::Success), spec);
}

inline double exact_fidelity(const Circuit &transfer, const NoiseSpec &spec, double theta, double phi) {
    return fidelity_wrapped(wrap_protocol(transfer, theta, phi, WrapMode::Fidelity), spec);
}

struct AveragedResult {
    double m0_true = 0.0;
    double m0_recorded = 0.0;
    std::optional<double> fidelity;
};

/// Bloch-sphere averages of the exact success (and optionally fidelity).
inline AveragedResult bloch_averaged_eval(const Circuit &transfer, const NoiseSpec &spec,
                                          const SphereQuadrature &quad = {}, bool with_fidelity = false) {
    AveragedResult out;
    double fid = 0.0;
    for (const auto &node : quad.nodes()) {
        const auto r = exact_eval(transfer, spec, node.theta, node.phi);
        out.m0_true += node.weight * r.m0_true;
        out.m0_recorded += node.weight * r.m0_recorded;
        if (with_fidelity) {
            fid += node.weight * exact_fidelity(transfer, spec, node.theta, node.phi);
        }
    }
    if (with_fidelity) {
        out.fidelity = fid;
    }
    return out;
}

}  // namespace qst

#endif
