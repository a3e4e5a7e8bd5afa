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

#ifndef QST_FIT_HPP
#define QST_FIT_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>
#include <span>
#include <vector>

#include "qst/error.hpp"

namespace qst {

struct FitPoint {
    double alpha = 0.0;
    double value = 0.0;
    double weight = 1.0;
};

/// E(alpha) = a exp(-b alpha) + c.
struct ExpFit {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double residual = 0.0;  // weighted sum of squared errors
    std::array<std::array<double, 3>, 3> covariance{};  // order (a, b, c)
    bool degenerate = false;  // flat data; only c is meaningful

    double operator()(double alpha) const {
        return a * std::exp(-b * alpha) + c;
    }
    double sigma_a() const {
        return std::sqrt(std::max(0.0, covariance[0][0]));
    }
    double sigma_b() const {
        return std::sqrt(std::max(0.0, covariance[1][1]));
    }
    double sigma_c() const {
        return std::sqrt(std::max(0.0, covariance[2][2]));
    }
};

struct ExpFitOptions {
    double b_max = 10.0;
    int grid = 2000;
};

namespace detail {

struct LinearSolve {
    double a = 0.0;
    double c = 0.0;
    double residual = std::numeric_limits<double>::infinity();
};

/// Weighted least squares for (a, c) with b fixed.
inline LinearSolve solve_linear(std::span<const FitPoint> pts, double b) {
    double s11 = 0.0, s12 = 0.0, s22 = 0.0, t1 = 0.0, t2 = 0.0;
    for (const auto &pt : pts) {
        const double e = std::exp(-b * pt.alpha);
        s11 += pt.weight * e * e;
        s12 += pt.weight * e;
        s22 += pt.weight;
        t1 += pt.weight * e * pt.value;
        t2 += pt.weight * pt.value;
    }
    const double det = s11 * s22 - s12 * s12;
    LinearSolve out;
    if (!(std::abs(det) > 1e-14 * std::max(1.0, s11 * s22))) {
        return out;
    }
    out.a = (t1 * s22 - t2 * s12) / det;
    out.c = (s11 * t2 - s12 * t1) / det;
    double r = 0.0;
    for (const auto &pt : pts) {
        const double d = out.a * std::exp(-b * pt.alpha) + out.c - pt.value;
        r += pt.weight * d * d;
    }
    out.residual = r;
    return out;
}

}  // namespace detail

/// Variable-projection fit: the model is linear in (a, c) for fixed b, so the
/// residual is minimized over b alone (grid scan, then golden-section refine).
inline ExpFit exp_fit(std::span<const FitPoint> pts, const ExpFitOptions &opt = {}) {
    std::set<double> alphas;
    for (const auto &pt : pts) {
        if (!(pt.weight > 0.0)) {
            throw ConfigError("exp_fit: weights must be positive");
        }
        alphas.insert(pt.alpha);
    }
    if (alphas.size() < 3) {
        throw ConfigError("exp_fit: need at least 3 distinct alpha values");
    }

    double wsum = 0.0, mean = 0.0;
    for (const auto &pt : pts) {
        wsum += pt.weight;
        mean += pt.weight * pt.value;
    }
    mean /= wsum;
    double spread = 0.0;
    for (const auto &pt : pts) {
        spread = std::max(spread, std::abs(pt.value - mean));
    }
    ExpFit fit;
    if (spread <= 1e-14 * std::max(1.0, std::abs(mean))) {
        fit.c = mean;
        fit.degenerate = true;
        return fit;
    }

    const double b_lo = opt.b_max * 1e-9;
    double best_b = b_lo;
    double best_r = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= opt.grid; ++i) {
        const double b = b_lo + (opt.b_max - b_lo) * i / opt.grid;
        const double r = detail::solve_linear(pts, b).residual;
        if (r < best_r) {
            best_r = r;
            best_b = b;
        }
    }
    const double step = (opt.b_max - b_lo) / opt.grid;
    double lo = std::max(b_lo, best_b - step);
    double hi = std::min(opt.b_max, best_b + step);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        const double x1 = hi - g * (hi - lo);
        const double x2 = lo + g * (hi - lo);
        if (detail::solve_linear(pts, x1).residual < detail::solve_linear(pts, x2).residual) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    const double b = 0.5 * (lo + hi);
    const auto lin = detail::solve_linear(pts, b);
    fit.a = lin.a;
    fit.b = b;
    fit.c = lin.c;
    fit.residual = lin.residual;

    // Covariance from the Gauss-Newton approximation at the optimum.
    const auto m = static_cast<Eigen::Index>(pts.size());
    Eigen::MatrixXd J(m, 3);
    Eigen::VectorXd w(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto &pt = pts[static_cast<std::size_t>(i)];
        const double e = std::exp(-b * pt.alpha);
        J(i, 0) = e;
        J(i, 1) = -fit.a * pt.alpha * e;
        J(i, 2) = 1.0;
        w(i) = pt.weight;
    }
    const double dof = static_cast<double>(m) - 3.0;
    const double s2 = dof > 0.0 ? fit.residual / dof : 0.0;
    const Eigen::Matrix3d normal = J.transpose() * w.asDiagonal() * J;
    const Eigen::Matrix3d cov = s2 * normal.completeOrthogonalDecomposition().pseudoInverse();
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            fit.covariance[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = cov(r, c);
        }
    }
    return fit;
}

inline ExpFit exp_fit(const std::vector<FitPoint> &pts, const ExpFitOptions &opt = {}) {
    return exp_fit(std::span<const FitPoint>(pts), opt);
}

struct Estimate {
    double value = 0.0;
    double stderr_ = 0.0;
};

/// E(0) = a + c with the fit's propagated uncertainty.
inline Estimate zne_extrapolate(const ExpFit &fit) {
    if (fit.degenerate) {
        return {fit.c, fit.sigma_c()};
    }
    const auto &cv = fit.covariance;
    const double var = cv[0][0] + cv[2][2] + 2.0 * cv[0][2];
    return {fit.a + fit.c, std::sqrt(std::max(0.0, var))};
}

}  // namespace qst

#endif
