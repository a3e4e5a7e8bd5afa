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

#ifndef QST_MITIGATION_HPP
#define QST_MITIGATION_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "qst/channels.hpp"
#include "qst/circuit.hpp"
#include "qst/engine.hpp"
#include "qst/error.hpp"
#include "qst/fit.hpp"
#include "qst/oracle.hpp"
#include "qst/quadrature.hpp"

namespace qst {

/// Gate folding G -> G (G^dagger G)^k over a subset of gate kinds.
struct FoldSpec {
    std::set<Gate> foldable{Gate::CNOT, Gate::H};
    double alpha = 1.0;
};

/// Number of extra (G^dagger G) pairs per foldable gate, in program order.
/// Odd integer alpha folds every gate (alpha-1)/2 times; otherwise the
/// remaining folds go to the earliest gates until the foldable-gate count
/// reaches round(alpha * count).
inline std::vector<std::size_t> fold_counts(std::size_t n_foldable, double alpha) {
    if (!(alpha >= 1.0)) {
        throw ConfigError("fold_circuit: alpha must be >= 1");
    }
    const auto base = static_cast<std::size_t>(std::floor((alpha - 1.0) / 2.0));
    std::vector<std::size_t> k(n_foldable, base);
    const auto target = static_cast<std::size_t>(std::llround(alpha * static_cast<double>(n_foldable)));
    const std::size_t have = n_foldable * (1 + 2 * base);
    const std::size_t extra = target > have ? (target - have) / 2 : 0;
    for (std::size_t i = 0; i < std::min(extra, n_foldable); ++i) {
        ++k[i];
    }
    return k;
}

inline Circuit fold_circuit(const Circuit &c, const FoldSpec &spec) {
    if (c.initial_state()) {
        throw ConfigError("fold_circuit: fold the transfer circuit before wrapping");
    }
    auto is_foldable = [&](const CircuitOp &op) {
        const auto *u = std::get_if<UnitaryOp>(&op);
        return u != nullptr && u->cls != OpClass::Init && u->cls != OpClass::Disentangler &&
               spec.foldable.contains(u->gate.gate);
    };
    const auto n_foldable =
        static_cast<std::size_t>(std::count_if(c.ops().begin(), c.ops().end(), is_foldable));
    const auto k = fold_counts(n_foldable, spec.alpha);
    Circuit out(c.n_qubits(), c.n_cbits(), c.scheme());
    std::size_t idx = 0;
    for (const auto &op : c.ops()) {
        out.append(op);
        if (!is_foldable(op)) {
            continue;
        }
        const auto &u = std::get<UnitaryOp>(op);
        UnitaryOp inv = u;
        inv.gate = u.gate.inverse();
        for (std::size_t f = 0; f < k[idx]; ++f) {
            out.append(inv);
            out.append(u);
        }
        ++idx;
    }
    return out;
}

struct ReadoutInversion {
    Distribution2 values{};
    bool overshoot = false;  // raw inverse left [0, 1] and was clipped
};

/// Applies the inverse response matrix; clips and renormalizes on overshoot.
inline ReadoutInversion invert_readout(const Distribution2 &recorded, double q0, double q1) {
    const double det = 1.0 - q0 - q1;
    if (!(det >= 0.1)) {
        throw ConfigError("invert_readout: response matrix near singular (1 - q0 - q1 = " + std::to_string(det) + ")");
    }
    ReadoutInversion out;
    double m0 = ((1.0 - q1) * recorded[0] - q1 * recorded[1]) / det;
    double m1 = (-q0 * recorded[0] + (1.0 - q0) * recorded[1]) / det;
    if (m0 < 0.0 || m0 > 1.0 || m1 < 0.0 || m1 > 1.0) {
        out.overshoot = true;
        m0 = std::clamp(m0, 0.0, 1.0);
        m1 = 1.0 - m0;
    }
    out.values = {m0, m1};
    return out;
}

/// Shape-preserving (Fritsch-Carlson) cubic interpolant through (x_i, y_i),
/// x strictly increasing.
class MonotoneCubic {
   public:
    MonotoneCubic(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n) {
            throw ConfigError("MonotoneCubic: need >= 2 matching points");
        }
        std::vector<double> delta(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (!(x_[i + 1] > x_[i])) {
                throw ConfigError("MonotoneCubic: x must increase strictly");
            }
            delta[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
        }
        m_.assign(n, 0.0);
        m_[0] = delta[0];
        m_[n - 1] = delta[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            m_[i] = delta[i - 1] * delta[i] <= 0.0 ? 0.0 : 0.5 * (delta[i - 1] + delta[i]);
        }
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (delta[i] == 0.0) {
                m_[i] = m_[i + 1] = 0.0;
                continue;
            }
            const double a = m_[i] / delta[i];
            const double b = m_[i + 1] / delta[i];
            const double s = a * a + b * b;
            if (s > 9.0) {
                const double t = 3.0 / std::sqrt(s);
                m_[i] = t * a * delta[i];
                m_[i + 1] = t * b * delta[i];
            }
        }
    }

    double operator()(double x) const {
        const std::size_t n = x_.size();
        std::size_t i = 0;
        if (x >= x_[n - 1]) {
            i = n - 2;
        } else if (x > x_[0]) {
            i = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin()) - 1;
        }
        const double h = x_[i + 1] - x_[i];
        const double t = (x - x_[i]) / h;
        const double t2 = t * t;
        const double t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * m_[i] + (-2 * t3 + 3 * t2) * y_[i + 1] +
               (t3 - t2) * h * m_[i + 1];
    }

    const std::vector<double> &x() const noexcept {
        return x_;
    }
    const std::vector<double> &y() const noexcept {
        return y_;
    }

   private:
    std::vector<double> x_, y_, m_;
};

/// Engine-generated p = 0 contour of the recorded success as a function of q,
/// for chains without a closed form.
class PZeroContour {
   public:
    PZeroContour(Scheme scheme, std::size_t n, double kappa = 0.5, int q_points = 41,
                 const SphereQuadrature &quad = {4, 4})
        : PZeroContour(sample(scheme, n, kappa, q_points, quad)) {
    }
    explicit PZeroContour(MonotoneCubic curve) : curve_(std::move(curve)) {
        // Keep the decreasing branch that starts at q = 0.
        const auto &y = curve_.y();
        q_max_ = curve_.x().back();
        for (std::size_t i = 1; i < y.size(); ++i) {
            if (y[i] > y[i - 1]) {
                q_max_ = curve_.x()[i - 1];
                break;
            }
        }
    }

    double success(double q) const {
        return curve_(q);
    }

    double solve_q(double target) const {
        const double lo_val = curve_(q_max_);
        if (target > curve_(0.0) + 1e-12 || target < lo_val - 1e-12) {
            throw ConfigError("solve_q: target " + std::to_string(target) + " outside attainable range [" +
                              std::to_string(lo_val) + ", " + std::to_string(curve_(0.0)) + "]");
        }
        double lo = 0.0;
        double hi = q_max_;
        for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (curve_(mid) > target) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    }

   private:
    static MonotoneCubic sample(Scheme scheme, std::size_t n, double kappa, int q_points,
                                const SphereQuadrature &quad) {
        const Circuit transfer = build_scheme(scheme, n);
        std::vector<double> qs, ys;
        for (int i = 0; i < q_points; ++i) {
            const double q = static_cast<double>(i) / (q_points - 1);
            if (kappa * q > 1.0) {
                break;
            }
            qs.push_back(q);
            ys.push_back(bloch_averaged_eval(transfer, NoiseSpec::oracle_matched(0.0, q, kappa), quad).m0_recorded);
        }
        return MonotoneCubic(std::move(qs), std::move(ys));
    }

    MonotoneCubic curve_;
    double q_max_ = 1.0;
};

struct MitigationReport {
    Scheme scheme = Scheme::Swap;
    std::size_t n = 3;
    double unmitigated = 0.0;
    double q_hat = 0.0;
    ExpFit fit;
    Estimate zne;
    Estimate final_value;
    bool overshoot = false;
};

/// ZNE, then q-extrapolation from the unmitigated value on the p = 0
/// contour, then the inverse response matrix with q0 = kappa q_hat, q1 = q_hat.
/// The closed form is used at n = 3; other lengths use `contour` (built from
/// the engine when absent).
inline MitigationReport mitigate_pipeline(Scheme scheme, std::size_t n, double unmitigated,
                                          std::span<const FitPoint> zne_points, double kappa = 0.5,
                                          const PZeroContour *contour = nullptr) {
    MitigationReport rep;
    rep.scheme = scheme;
    rep.n = n;
    rep.unmitigated = unmitigated;
    if (n == 3) {
        rep.q_hat = solve_q(scheme, unmitigated, kappa);
    } else if (contour != nullptr) {
        rep.q_hat = contour->solve_q(unmitigated);
    } else {
        rep.q_hat = PZeroContour(scheme, n, kappa).solve_q(unmitigated);
    }
    rep.fit = exp_fit(zne_points);
    rep.zne = zne_extrapolate(rep.fit);
    const double q0 = kappa * rep.q_hat;
    const double q1 = rep.q_hat;
    const double e = std::clamp(rep.zne.value, 0.0, 1.0);
    const auto inv = invert_readout({e, 1.0 - e}, q0, q1);
    rep.final_value = {inv.values[0], rep.zne.stderr_ / (1.0 - q0 - q1)};
    rep.overshoot = inv.overshoot;
    return rep;
}

/// Bloch-averaged recorded success of the folded circuit at each alpha.
inline std::vector<FitPoint> zne_points_from_engine(const Circuit &transfer, const NoiseSpec &spec,
                                                    std::span<const double> alphas,
                                                    const SphereQuadrature &quad = {4, 4}) {
    std::vector<FitPoint> pts;
    for (double a : alphas) {
        const Circuit folded = fold_circuit(transfer, FoldSpec{{Gate::CNOT, Gate::H}, a});
        pts.push_back({a, bloch_averaged_eval(folded, spec, quad).m0_recorded, 1.0});
    }
    return pts;
}

}  // namespace qst

#endif
