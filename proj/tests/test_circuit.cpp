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

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qst/circuit.hpp"
#include "qst/engine.hpp"
#include "qst/mitigation.hpp"

using namespace qst;

namespace {

std::string read_file(const std::string &path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_conditionals(const Circuit &c) {
    std::size_t k = 0;
    for (const auto &op : c.ops()) {
        k += std::holds_alternative<ConditionalOp>(op) ? 1 : 0;
    }
    return k;
}

std::size_t count_measurements(const Circuit &c) {
    std::size_t k = 0;
    for (const auto &op : c.ops()) {
        k += std::holds_alternative<MeasureOp>(op) ? 1 : 0;
    }
    return k;
}

}  // namespace

TEST(Circuits, GateCounts) {
    for (std::size_t n = 2; n <= 7; ++n) {
        const auto swap = build_swap(n);
        EXPECT_EQ(swap.count_unitaries(Gate::CNOT), 3 * (n - 1));
        EXPECT_EQ(count_measurements(swap), 0u);

        const auto cluster = build_cluster(n);
        EXPECT_EQ(cluster.count_unitaries(Gate::CNOT), n - 1);
        EXPECT_EQ(cluster.count_unitaries(Gate::H), n - 1);
        EXPECT_EQ(count_measurements(cluster), n - 1);
        EXPECT_EQ(count_conditionals(cluster), n - 1);
    }
    for (std::size_t n : {3, 5, 7}) {
        const auto tel = build_teleport(n);
        const std::size_t hops = (n - 1) / 2;
        EXPECT_EQ(tel.count_unitaries(Gate::CNOT), 2 * hops);
        EXPECT_EQ(tel.count_unitaries(Gate::H), 2 * hops);
        EXPECT_EQ(count_measurements(tel), 2 * hops);
        EXPECT_EQ(count_conditionals(tel), 2 * hops);
    }
    for (std::size_t n = 3; n <= 7; ++n) {
        const auto ghz = build_ghz(n);
        EXPECT_EQ(ghz.count_unitaries(Gate::CNOT), n - 1);
        EXPECT_EQ(count_measurements(ghz), n - 1);
    }
}

TEST(Circuits, GhzMatchesTeleportAtThreeQubits) {
    const auto g = build_ghz(3);
    const auto t = build_teleport(3);
    EXPECT_EQ(g.count_unitaries(Gate::CNOT), t.count_unitaries(Gate::CNOT));
    EXPECT_EQ(g.count_unitaries(Gate::H), t.count_unitaries(Gate::H));
    EXPECT_EQ(count_conditionals(g), count_conditionals(t));
}

TEST(Circuits, InvalidLengthsRejected) {
    EXPECT_THROW(build_teleport(4), ConfigError);
    EXPECT_THROW(build_teleport(2), ConfigError);
    EXPECT_THROW(build_ghz(2), ConfigError);
    EXPECT_THROW(build_swap(1), ConfigError);
    EXPECT_THROW(build_swap(kMaxQubits + 1), ConfigError);
}

TEST(Circuits, NearestNeighbourEnforced) {
    Circuit c(4, 0);
    EXPECT_THROW(c.cnot(0, 2), ConfigError);
    EXPECT_THROW(c.cnot(1, 1), ConfigError);
    EXPECT_THROW(c.h(4), ConfigError);
    EXPECT_NO_THROW(c.cnot(2, 1));
}

TEST(Circuits, ReadBeforeWriteRejected) {
    Circuit c(3, 1);
    c.conditional({Gate::X}, 2, 0);
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Circuits, TextRoundTrip) {
    for (auto s : kTransferSchemes) {
        for (std::size_t n : {3, 5}) {
            const auto c = build_scheme(s, n);
            const auto text = circuit_to_text(c);
            const auto back = circuit_from_text(text);
            EXPECT_EQ(back.ops(), c.ops());
            EXPECT_EQ(circuit_to_text(back), text);
            const auto w = wrap_protocol(c, 0.3, 1.2);
            const auto wback = circuit_from_text(circuit_to_text(w));
            EXPECT_EQ(wback.ops(), w.ops());
            EXPECT_EQ(wback.wrap_mode(), w.wrap_mode());
        }
    }
}

TEST(Circuits, GoldenText) {
    const std::string dir = QST_GOLDEN_DIR;
    EXPECT_EQ(circuit_to_text(build_teleport(3)), read_file(dir + "/teleport_3.txt"));
    EXPECT_EQ(circuit_to_text(build_ghz(5)), read_file(dir + "/ghz_5.txt"));
    EXPECT_EQ(circuit_to_text(build_cluster(3)), read_file(dir + "/cluster_3.txt"));
}

TEST(Circuits, MalformedTextRejected) {
    EXPECT_THROW(circuit_from_text("qst-circuit 1\nscheme swap\nqubits 3\ncbits 0\nCX 0 2\n"), ConfigError);
    EXPECT_THROW(circuit_from_text("qst-circuit 1\nscheme swap\nqubits 3\ncbits 0\nFOO 1\n"), ConfigError);
    EXPECT_THROW(circuit_from_text("not a circuit\n"), ConfigError);
}

TEST(Circuits, WrapAddsBoundaryOps) {
    const auto w = wrap_protocol(build_swap(3), 0.5, 0.25);
    const auto &first = std::get<UnitaryOp>(w.ops().front());
    EXPECT_EQ(first.cls, OpClass::Init);
    const auto &dis = std::get<UnitaryOp>(w.ops()[w.ops().size() - 2]);
    EXPECT_EQ(dis.cls, OpClass::Disentangler);
    EXPECT_EQ(dis.sites, std::vector<std::size_t>{2});
    EXPECT_TRUE(std::holds_alternative<MeasureOp>(w.ops().back()));
    EXPECT_THROW(wrap_protocol(w, 0.1, 0.1), ConfigError);
}

TEST(Circuits, ZeroNoiseTransferOnBlochGrid) {
    const auto spec = NoiseSpec::oracle_matched(0.0, 0.0);
    for (auto s : kTransferSchemes) {
        for (std::size_t n = 2; n <= 7; ++n) {
            if ((s == Scheme::Teleport && (n % 2 == 0 || n < 3)) || (s == Scheme::Ghz && n < 3)) continue;
            const auto c = build_scheme(s, n);
            for (int i = 0; i < 5; ++i) {
                for (int j = 0; j < 5; ++j) {
                    const double theta = std::numbers::pi * i / 4.0;
                    const double phi = 2.0 * std::numbers::pi * j / 5.0;
                    EXPECT_NEAR(exact_eval(c, spec, theta, phi).m0_true, 1.0, 1e-12)
                        << to_string(s) << " n=" << n << " theta=" << theta << " phi=" << phi;
                }
            }
        }
    }
}

TEST(Circuits, PlacementPolicies) {
    const auto cnot = NoisePlacementPolicy::cnot_only();
    EXPECT_TRUE(cnot.applies_to(OpClass::Cnot));
    EXPECT_FALSE(cnot.applies_to(OpClass::SingleQubit));
    const auto all = NoisePlacementPolicy::all_gates();
    EXPECT_TRUE(all.applies_to(OpClass::Conditional));
    EXPECT_FALSE(all.applies_to(OpClass::Init));
    const auto boundary = NoisePlacementPolicy::all_gates_including_boundary();
    EXPECT_TRUE(boundary.applies_to(OpClass::Init));
    EXPECT_TRUE(boundary.applies_to(OpClass::Disentangler));
    const auto custom = NoisePlacementPolicy::parse("custom:cnot,conditional");
    EXPECT_TRUE(custom.applies_to(OpClass::Conditional));
    EXPECT_FALSE(custom.applies_to(OpClass::SingleQubit));
    EXPECT_THROW(NoisePlacementPolicy::parse("everywhere"), ConfigError);
}

TEST(Folding, CountsAndIdentity) {
    EXPECT_EQ(fold_counts(4, 1.0), (std::vector<std::size_t>{0, 0, 0, 0}));
    EXPECT_EQ(fold_counts(4, 3.0), (std::vector<std::size_t>{1, 1, 1, 1}));
    EXPECT_EQ(fold_counts(4, 2.0), (std::vector<std::size_t>{1, 1, 0, 0}));
    EXPECT_THROW(fold_counts(4, 0.5), ConfigError);

    const auto c = build_teleport(3);
    const auto same = fold_circuit(c, FoldSpec{{Gate::CNOT, Gate::H}, 1.0});
    EXPECT_EQ(same.ops(), c.ops());
    const auto tripled = fold_circuit(c, FoldSpec{{Gate::CNOT, Gate::H}, 3.0});
    EXPECT_EQ(tripled.count_unitaries(Gate::CNOT), 3 * c.count_unitaries(Gate::CNOT));
    EXPECT_EQ(tripled.count_unitaries(Gate::H), 3 * c.count_unitaries(Gate::H));
    EXPECT_THROW(fold_circuit(wrap_protocol(c, 0.1, 0.2), FoldSpec{}), ConfigError);
}

TEST(Folding, ZeroNoiseEquivalence) {
    const auto spec = NoiseSpec::oracle_matched(0.0, 0.0);
    for (auto s : kTransferSchemes) {
        for (double alpha : {1.5, 3.0, 5.0}) {
            const auto f = fold_circuit(build_scheme(s, 3), FoldSpec{{Gate::CNOT, Gate::H}, alpha});
            EXPECT_NEAR(exact_eval(f, spec, 1.1, 0.4).m0_true, 1.0, 1e-12);
        }
    }
}
