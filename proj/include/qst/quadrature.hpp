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

#ifndef QST_QUADRATURE_HPP
#define QST_QUADRATURE_HPP

#include <cmath>
#include <numbers>
#include <vector>

#include "qst/error.hpp"

namespace qst {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1]; Newton iteration on P_n from the
/// Chebyshev-like initial guesses.
inline QuadratureRule gauss_legendre(int n) {
    if (n < 1) {
        throw ConfigError("gauss_legendre: need at least one node");
    }
    QuadratureRule rule;
    rule.nodes.assign(static_cast<std::size_t>(n), 0.0);
    rule.weights.assign(static_cast<std::size_t>(n), 0.0);
    const int m = (n + 1) / 2;
    for (int i = 1; i <= m; ++i) {
        double z = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0;
            double p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15) {
                break;
            }
        }
        const auto lo = static_cast<std::size_t>(i - 1);
        const auto hi = static_cast<std::size_t>(n - i);
        rule.nodes[lo] = -z;
        rule.nodes[hi] = z;
        rule.weights[lo] = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.weights[hi] = rule.weights[lo];
    }
    return rule;
}

struct SphereNode {
    double theta;
    double phi;
    double weight;
};

/// Product rule for the normalized sphere measure (1/4pi) sin(theta) dtheta dphi:
/// Gauss-Legendre in cos(theta), equally spaced (trapezoid) in phi. Exact for
/// trigonometric polynomials up to degree 2*n_cos-1 in cos(theta) and
/// n_phi-1 in phi.
struct SphereQuadrature {
    int n_cos = 16;
    int n_phi = 16;

    std::vector<SphereNode> nodes() const {
        if (n_phi < 1) {
            throw ConfigError("SphereQuadrature: need at least one phi node");
        }
        const auto gl = gauss_legendre(n_cos);
        std::vector<SphereNode> out;
        out.reserve(static_cast<std::size_t>(n_cos * n_phi));
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            const double theta = std::acos(gl.nodes[i]);
            for (int k = 0; k < n_phi; ++k) {
                out.push_back({theta, 2.0 * std::numbers::pi * k / n_phi, gl.weights[i] / (2.0 * n_phi)});
            }
        }
        return out;
    }

    SphereQuadrature doubled() const {
        return {2 * n_cos, 2 * n_phi};
    }
};

template <typename F>
double bloch_average(F &&f, const SphereQuadrature &quad = {}) {
    double acc = 0.0;
    for (const auto &node : quad.nodes()) {
        acc += node.weight * f(node.theta, node.phi);
    }
    return acc;
}

}  // namespace qst

#endif
