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

#ifndef QST_ORACLE_HPP
#define QST_ORACLE_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include "qst/circuit.hpp"
#include "qst/error.hpp"

// Closed-form 3-qubit success and fidelity series. Coefficients are kept as
// integers; signs and the 2^a / 3^b factors are applied at evaluation time.
//
//   swap success:  1 + sum_{j=1..12} (-1)^j A_j 2^(2j-1) 3^-(j+1) p^j
//   swap fidelity: same form, B_j, j=1..11
//   teleport/cluster:
//     inner(q,p) = sum_{n,k} M[n][k] (-1)^(n+k) 2^(2n-k-1) 3^-(n-k+1) q^k p^n
//   success is then q + inner * (1 - (kappa+1) q); fidelity is inner itself.
//
// The q dependence of the inner series was derived at kappa = 1/2.

namespace qst {

using SeriesRow = std::array<std::int64_t, 3>;

struct CoefficientTable {
    static constexpr std::array<std::int64_t, 12> A_swap{32, 156, 460, 915, 1296, 1344, 1032, 585, 240, 68, 12, 1};
    static constexpr std::array<std::int64_t, 11> B_swap{29, 127, 333, 582, 714, 630, 402, 183, 57, 11, 1};

    static constexpr std::array<SeriesRow, 11> A_teleport{{{6, 4, 1},
                                                          {26, 36, 10},
                                                          {102, 147, 45},
                                                          {239, 359, 120},
                                                          {371, 581, 210},
                                                          {399, 651, 252},
                                                          {301, 511, 210},
                                                          {157, 277, 120},
                                                          {54, 99, 45},
                                                          {11, 21, 10},
                                                          {1, 2, 1}}};
    static constexpr std::array<SeriesRow, 11> A_cluster{{{6, 4, 2},
                                                         {26, 40, 20},
                                                         {105, 180, 90},
                                                         {260, 480, 240},
                                                         {435, 840, 420},
                                                         {510, 1008, 504},
                                                         {421, 840, 420},
                                                         {240, 480, 240},
                                                         {90, 180, 90},
                                                         {20, 40, 20},
                                                         {2, 4, 2}}};
    static constexpr std::array<SeriesRow, 10> B_teleport{{{6, 4, 1},
                                                          {23, 32, 9},
                                                          {79, 115, 36},
                                                          {160, 244, 84},
                                                          {211, 337, 126},
                                                          {188, 314, 126},
                                                          {113, 197, 84},
                                                          {44, 80, 36},
                                                          {10, 19, 9},
                                                          {1, 2, 1}}};
    static constexpr std::array<SeriesRow, 10> B_cluster{{{6, 4, 2},
                                                         {23, 36, 18},
                                                         {82, 144, 72},
                                                         {178, 336, 168},
                                                         {257, 504, 252},
                                                         {253, 504, 252},
                                                         {168, 336, 168},
                                                         {72, 144, 72},
                                                         {18, 36, 18},
                                                         {2, 4, 2}}};
    /// kappa the inner q series was derived for.
    static constexpr double kappa = 0.5;
};

namespace detail {

/// base^e for any integer e; negative powers divide.
template <typename T>
T ipow(T base, int e) {
    T r(1);
    for (int i = 0; i < (e < 0 ? -e : e); ++i) {
        r *= base;
    }
    return e < 0 ? T(1) / r : r;
}

/// 2^a 3^-b, either exponent may be negative.
template <typename T>
T scale_factor(int two_exp, int three_exp) {
    return ipow(T(2), two_exp) / ipow(T(3), three_exp);
}

template <typename T, std::size_t N>
T swap_series(const std::array<std::int64_t, N> &coef, const T &p) {
    T acc(1);
    T pj(1);
    for (std::size_t i = 0; i < N; ++i) {
        const int j = static_cast<int>(i) + 1;
        pj *= p;
        T term = T(coef[i]) * scale_factor<T>(2 * j - 1, j + 1) * pj;
        if (j % 2 == 1) {
            acc -= term;
        } else {
            acc += term;
        }
    }
    return acc;
}

template <typename T, std::size_t N>
T grid_series(const std::array<SeriesRow, N> &coef, const T &q, const T &p) {
    T acc(0);
    for (std::size_t n = 0; n < N; ++n) {
        for (std::size_t k = 0; k < 3; ++k) {
            const int ni = static_cast<int>(n);
            const int ki = static_cast<int>(k);
            T term = T(coef[n][k]) * scale_factor<T>(2 * ni - ki - 1, ni - ki + 1) * ipow(q, ki) * ipow(p, ni);
            if ((ni + ki) % 2 == 1) {
                acc -= term;
            } else {
                acc += term;
            }
        }
    }
    return acc;
}

// Terms reach ~1e3 and cancel down to O(1); extended precision keeps the
// double result within a few ulps of the rational value.
template <std::size_t N>
double swap_series_double(const std::array<std::int64_t, N> &coef, double p) {
    return static_cast<double>(swap_series<long double>(coef, p));
}

template <std::size_t N>
double grid_series_double(const std::array<SeriesRow, N> &coef, double q, double p) {
    return static_cast<double>(grid_series<long double>(coef, q, p));
}

inline Scheme oracle_scheme(Scheme s) {
    // GHZ and teleport coincide at three qubits.
    if (s == Scheme::Ghz) {
        return Scheme::Teleport;
    }
    if (s == Scheme::Custom) {
        throw ConfigError("oracle: no closed form for custom circuits");
    }
    return s;
}

}  // namespace detail

/// Bloch-averaged probability of a true 0 on the last qubit, 3-qubit SWAP.
inline double m0_swap(double p) {
    return detail::swap_series_double(CoefficientTable::A_swap, p);
}

/// q + m0bar (1 - (kappa+1) q): the final readout response applied to m0bar.
inline double nominal_success(double m0bar, double q, double kappa = 0.5) {
    return q + m0bar * (1.0 - (kappa + 1.0) * q);
}

/// Bloch-averaged true success including the intermediary-readout surrogate.
inline double m0_bar(Scheme scheme, double q, double p) {
    switch (detail::oracle_scheme(scheme)) {
        case Scheme::Swap:
            return m0_swap(p);
        case Scheme::Teleport:
            return detail::grid_series_double(CoefficientTable::A_teleport, q, p);
        case Scheme::Cluster:
            return detail::grid_series_double(CoefficientTable::A_cluster, q, p);
        default:
            break;
    }
    throw ConfigError("oracle: unknown scheme");
}

/// Recorded (nominal) success probability of the 3-qubit scheme.
inline double m_tilde(Scheme scheme, double q, double p, double kappa = 0.5) {
    return nominal_success(m0_bar(scheme, q, p), q, kappa);
}

/// Bloch-averaged state fidelity of the transferred qubit (q ignored for swap).
inline double fidelity(Scheme scheme, double q, double p) {
    switch (detail::oracle_scheme(scheme)) {
        case Scheme::Swap:
            return detail::swap_series_double(CoefficientTable::B_swap, p);
        case Scheme::Teleport:
            return detail::grid_series_double(CoefficientTable::B_teleport, q, p);
        case Scheme::Cluster:
            return detail::grid_series_double(CoefficientTable::B_cluster, q, p);
        default:
            break;
    }
    throw ConfigError("oracle: unknown scheme");
}

/// Same series evaluated in an arbitrary exact field (e.g. rationals).
template <typename T>
T m0_bar_exact(Scheme scheme, const T &q, const T &p) {
    switch (detail::oracle_scheme(scheme)) {
        case Scheme::Swap:
            return detail::swap_series(CoefficientTable::A_swap, p);
        case Scheme::Teleport:
            return detail::grid_series(CoefficientTable::A_teleport, q, p);
        case Scheme::Cluster:
            return detail::grid_series(CoefficientTable::A_cluster, q, p);
        default:
            break;
    }
    throw ConfigError("oracle: unknown scheme");
}

template <typename T>
T fidelity_exact(Scheme scheme, const T &q, const T &p) {
    switch (detail::oracle_scheme(scheme)) {
        case Scheme::Swap:
            return detail::swap_series(CoefficientTable::B_swap, p);
        case Scheme::Teleport:
            return detail::grid_series(CoefficientTable::B_teleport, q, p);
        case Scheme::Cluster:
            return detail::grid_series(CoefficientTable::B_cluster, q, p);
        default:
            break;
    }
    throw ConfigError("oracle: unknown scheme");
}

/// d m_tilde / dq. Its sign for swap is sign(1 - (kappa+1) m0_swap(p)).
inline double dm_tilde_dq(Scheme scheme, double q, double p, double kappa = 0.5) {
    const double m = m0_bar(scheme, q, p);
    double dm = 0.0;
    if (detail::oracle_scheme(scheme) != Scheme::Swap) {
        const double h = 1e-6;
        const double lo = std::max(0.0, q - h);
        const double hi = std::min(1.0, q + h);
        dm = (m0_bar(scheme, hi, p) - m0_bar(scheme, lo, p)) / (hi - lo);
    }
    return 1.0 - (kappa + 1.0) * m + dm * (1.0 - (kappa + 1.0) * q);
}

/// Range of m_tilde(q, p=0) over the decreasing branch starting at q=0.
struct QRange {
    double q_max = 1.0;      // end of the decreasing branch
    double target_min = 0.0;  // m_tilde at q_max
};

inline QRange solve_q_range(Scheme scheme, double kappa = 0.5) {
    auto f = [&](double q) { return m_tilde(scheme, q, 0.0, kappa); };
    // Coarse scan for the first local minimum, then golden-section refine.
    constexpr int steps = 1000;
    double prev = f(0.0);
    int idx = steps;
    for (int i = 1; i <= steps; ++i) {
        const double v = f(static_cast<double>(i) / steps);
        if (v > prev) {
            idx = i - 1;
            break;
        }
        prev = v;
    }
    if (idx == steps) {
        return {1.0, f(1.0)};
    }
    double a = std::max(0.0, (idx - 1.0) / steps);
    double b = std::min(1.0, (idx + 1.0) / steps);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
        const double c = b - g * (b - a);
        const double d = a + g * (b - a);
        if (f(c) < f(d)) {
            b = d;
        } else {
            a = c;
        }
    }
    const double qm = 0.5 * (a + b);
    return {qm, f(qm)};
}

/// Effective readout parameter q whose p = 0 success equals `target`.
inline double solve_q(Scheme scheme, double target, double kappa = 0.5) {
    const Scheme s = detail::oracle_scheme(scheme);
    if (target > 1.0 + 1e-12) {
        throw ConfigError("solve_q: target above 1");
    }
    if (s == Scheme::Swap) {
        // m_tilde(q, 0) = 1 - kappa q
        const double q = (1.0 - target) / kappa;
        if (q < -1e-12 || q > 1.0 + 1e-12) {
            throw ConfigError("solve_q: target " + std::to_string(target) + " outside attainable range [" +
                              std::to_string(1.0 - kappa) + ", 1]");
        }
        return std::clamp(q, 0.0, 1.0);
    }
    const auto range = solve_q_range(s, kappa);
    if (target < range.target_min - 1e-12) {
        throw ConfigError("solve_q: target " + std::to_string(target) + " outside attainable range [" +
                          std::to_string(range.target_min) + ", 1]");
    }
    double lo = 0.0;
    double hi = range.q_max;
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (m_tilde(s, mid, 0.0, kappa) > target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace qst

#endif
