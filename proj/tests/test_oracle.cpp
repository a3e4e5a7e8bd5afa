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

#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qst/mitigation.hpp"
#include "qst/oracle.hpp"

using namespace qst;
using Rational = boost::multiprecision::cpp_rational;

namespace {

// name -> rows (one per q power; swap tables have a single row over p powers 1..)
std::map<std::string, std::vector<std::vector<long long>>> load_golden() {
    std::ifstream in(std::string(QST_GOLDEN_DIR) + "/coefficients.txt");
    std::map<std::string, std::vector<std::vector<long long>>> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string name;
        ls >> name;
        std::string tok;
        std::vector<long long> row;
        while (ls >> tok) {
            if (tok.starts_with("k=")) continue;
            row.push_back(std::stoll(tok));
        }
        out[name].push_back(row);
    }
    return out;
}

const auto &golden() {
    static const auto g = load_golden();
    return g;
}

Rational pow_r(const Rational &x, int k) {
    Rational r = 1;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

Rational pow_z(int base, int e) {
    return e >= 0 ? pow_r(base, e) : Rational(1) / pow_r(base, -e);
}

Rational pow2(int e) { return pow_z(2, e); }

Rational swap_ref(const std::vector<long long> &c, const Rational &p) {
    Rational s = 1;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const int j = static_cast<int>(i) + 1;
        const Rational term = Rational(c[i]) * pow2(2 * j - 1) / pow_r(3, j + 1) * pow_r(p, j);
        s += (j % 2 == 0) ? term : Rational(-term);
    }
    return s;
}

Rational grid_ref(const std::vector<std::vector<long long>> &rows, const Rational &q, const Rational &p) {
    Rational s = 0;
    for (int k = 0; k < static_cast<int>(rows.size()); ++k) {
        for (int n = 0; n < static_cast<int>(rows[static_cast<std::size_t>(k)].size()); ++n) {
            const Rational term = Rational(rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(n)]) *
                                  pow2(2 * n - k - 1) / pow_z(3, n - k + 1) * pow_r(q, k) * pow_r(p, n);
            s += ((n + k) % 2 == 0) ? term : Rational(-term);
        }
    }
    return s;
}

Rational inner_ref(Scheme s, const Rational &q, const Rational &p, bool fid) {
    const std::string prefix = fid ? "B_" : "A_";
    switch (s) {
        case Scheme::Swap:
            return swap_ref(golden().at(prefix + "swap").front(), p);
        case Scheme::Teleport:
        case Scheme::Ghz:
            return grid_ref(golden().at(prefix + "teleport"), q, p);
        default:
            return grid_ref(golden().at(prefix + "cluster"), q, p);
    }
}

Rational tilde_ref(Scheme s, const Rational &q, const Rational &p) {
    const Rational kappa(1, 2);
    return q + (1 - (kappa + 1) * q) * inner_ref(s, q, p, false);
}

}  // namespace

TEST(Oracle, TablesMatchGoldenFile) {
    const auto &g = golden();
    ASSERT_EQ(g.at("A_swap").front().size(), CoefficientTable::A_swap.size());
    for (std::size_t j = 0; j < CoefficientTable::A_swap.size(); ++j) {
        EXPECT_EQ(g.at("A_swap").front()[j], CoefficientTable::A_swap[j]);
    }
    ASSERT_EQ(g.at("B_swap").front().size(), CoefficientTable::B_swap.size());
    for (std::size_t j = 0; j < CoefficientTable::B_swap.size(); ++j) {
        EXPECT_EQ(g.at("B_swap").front()[j], CoefficientTable::B_swap[j]);
    }
    auto check_grid = [&](const std::string &name, const auto &table) {
        const auto &rows = g.at(name);
        ASSERT_EQ(rows.size(), 3u);
        for (std::size_t k = 0; k < 3; ++k) {
            ASSERT_EQ(rows[k].size(), table.size()) << name;
            for (std::size_t n = 0; n < table.size(); ++n) {
                EXPECT_EQ(rows[k][n], table[n][k]) << name << " n=" << n << " k=" << k;
            }
        }
    };
    check_grid("A_teleport", CoefficientTable::A_teleport);
    check_grid("A_cluster", CoefficientTable::A_cluster);
    check_grid("B_teleport", CoefficientTable::B_teleport);
    check_grid("B_cluster", CoefficientTable::B_cluster);
}

TEST(Oracle, DoubleMatchesRationalReference) {
    for (auto s : {Scheme::Swap, Scheme::Teleport, Scheme::Cluster}) {
        for (int i = 0; i <= 10; ++i) {
            for (int j = 0; j <= 10; ++j) {
                const Rational p(i, 10), q(j, 10);
                const double pd = i / 10.0, qd = j / 10.0;
                EXPECT_NEAR(m_tilde(s, qd, pd), tilde_ref(s, q, p).convert_to<double>(), 1e-13);
                EXPECT_NEAR(fidelity(s, qd, pd), inner_ref(s, q, p, true).convert_to<double>(), 1e-13);
                EXPECT_EQ(m0_bar_exact<Rational>(s, q, p), inner_ref(s, q, p, false));
                EXPECT_EQ(fidelity_exact<Rational>(s, q, p), inner_ref(s, q, p, true));
            }
        }
    }
}

TEST(Oracle, CompletelyDepolarizingLimitIsOneHalf) {
    const Rational p(3, 4);
    for (auto s : {Scheme::Swap, Scheme::Teleport, Scheme::Ghz, Scheme::Cluster}) {
        EXPECT_EQ(m0_bar_exact<Rational>(s, Rational(0), p), Rational(1, 2));
        for (const Rational q : {Rational(0), Rational(1, 3), Rational(1)}) {
            EXPECT_EQ(fidelity_exact<Rational>(s, q, p), Rational(1, 2)) << to_string(s);
        }
    }
    EXPECT_NEAR(m_tilde(Scheme::Teleport, 0.0, 0.75), 0.5, 1e-15);
    EXPECT_NEAR(fidelity(Scheme::Swap, 0.0, 0.75), 0.5, 1e-15);
}

TEST(Oracle, NoiselessLimit) {
    for (auto s : {Scheme::Swap, Scheme::Teleport, Scheme::Ghz, Scheme::Cluster}) {
        EXPECT_EQ(m0_bar_exact<Rational>(s, Rational(0), Rational(0)), Rational(1));
        EXPECT_EQ(fidelity_exact<Rational>(s, Rational(0), Rational(0)), Rational(1));
        EXPECT_DOUBLE_EQ(m_tilde(s, 0.0, 0.0), 1.0);
    }
}

TEST(Oracle, GhzSharesTeleportSeries) {
    for (double p : {0.0, 0.3, 0.9}) {
        for (double q : {0.0, 0.5, 1.0}) {
            EXPECT_EQ(m_tilde(Scheme::Ghz, q, p), m_tilde(Scheme::Teleport, q, p));
            EXPECT_EQ(fidelity(Scheme::Ghz, q, p), fidelity(Scheme::Teleport, q, p));
        }
    }
}

TEST(Oracle, SwapDerivativeSignChangesAtTwoThirds) {
    for (int i = 0; i <= 20; ++i) {
        const double p = i / 20.0;
        const double m = m0_swap(p);
        if (std::abs(m - 2.0 / 3.0) < 1e-3) continue;
        for (double q : {0.1, 0.5, 0.9}) {
            const double h = 1e-4;
            const double d = (m_tilde(Scheme::Swap, q + h, p) - m_tilde(Scheme::Swap, q - h, p)) / (2 * h);
            EXPECT_EQ(d > 0.0, m < 2.0 / 3.0) << "p=" << p << " q=" << q;
            EXPECT_NEAR(d, dm_tilde_dq(Scheme::Swap, q, p), 1e-8);
        }
    }
    EXPECT_GT(m_tilde(Scheme::Swap, 0.4, 0.6), m_tilde(Scheme::Swap, 0.02, 0.6));
}

TEST(Oracle, SolveQ) {
    EXPECT_NEAR(solve_q(Scheme::Swap, 0.95583), 0.08834, 5e-6);
    for (auto s : {Scheme::Swap, Scheme::Teleport, Scheme::Ghz, Scheme::Cluster}) {
        EXPECT_NEAR(solve_q(s, 1.0), 0.0, 1e-12);
        const double q = 0.07;
        EXPECT_NEAR(solve_q(s, m_tilde(s, q, 0.0)), q, 1e-10) << to_string(s);
    }
    EXPECT_THROW(solve_q(Scheme::Swap, 0.4), ConfigError);
    EXPECT_THROW(solve_q(Scheme::Teleport, 0.1), ConfigError);
    EXPECT_THROW(solve_q(Scheme::Swap, 1.5), ConfigError);
}

TEST(Oracle, TeleportRangeIsDecreasingBranch) {
    const auto r = solve_q_range(Scheme::Teleport);
    EXPECT_NEAR(r.q_max, 0.523, 5e-3);
    EXPECT_LT(r.target_min, m_tilde(Scheme::Teleport, 0.0, 0.0));
    EXPECT_NEAR(solve_q(Scheme::Teleport, r.target_min + 1e-9), r.q_max, 1e-3);
}

TEST(Oracle, ReadoutInversionOfTableValue) {
    const double q = solve_q(Scheme::Swap, 0.95583);
    const auto inv = invert_readout({0.99952, 1.0 - 0.99952}, 0.5 * q, q);
    EXPECT_NEAR(inv.values[0], 1.0, 5e-6);
    EXPECT_TRUE(inv.overshoot);
}
