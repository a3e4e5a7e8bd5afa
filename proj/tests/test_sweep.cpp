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
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qst/sweep.hpp"

using namespace qst;

namespace {

std::string slurp(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path temp_dir(const std::string &name) {
    auto d = std::filesystem::temp_directory_path() / ("qst_test_" + name);
    std::filesystem::create_directories(d);
    return d;
}

SweepConfig small_config() {
    SweepConfig c;
    c.n_list = {3};
    c.p_grid = {0.0, 0.2};
    c.q_grid = {0.0, 0.3};
    c.quad = {4, 4};
    return c;
}

}  // namespace

TEST(Csv, HeaderIsFrozen) {
    EXPECT_EQ(kCsvHeader,
              "scheme,n,p,q,success_recorded,success_true,fidelity,hellinger,stderr,shots,seed,oracle_abs_diff");
    EXPECT_EQ(emit_csv({}), std::string(kCsvHeader) + "\n");
}

TEST(Csv, RoundTripIsFieldExact) {
    SurfaceRecord a;
    a.scheme = Scheme::Cluster;
    a.n = 5;
    a.p = 0.125;
    a.q = 0.3;
    a.success_recorded = 0.612345678901;
    a.success_true = 0.75;
    a.fidelity = 0.5;
    a.stderr_ = 0.0012;
    a.shots = 1024;
    a.seed = 18446744073709551615ULL;
    SurfaceRecord b;
    b.scheme = Scheme::Ghz;
    b.hellinger = 1.0;
    b.oracle_abs_diff = 1e-13;
    const std::vector<SurfaceRecord> recs{a, b};
    EXPECT_EQ(parse_csv(emit_csv(recs)), recs);
}

TEST(Csv, EmitParseEmitIsIdempotent) {
    const auto res = run_sweep(small_config());
    const auto text = emit_csv(res.records);
    EXPECT_EQ(emit_csv(parse_csv(text)), text);
}

TEST(Csv, MalformedInputRejected) {
    EXPECT_THROW(parse_csv("scheme,n\n"), ConfigError);
    EXPECT_THROW(parse_csv(std::string(kCsvHeader) + "\nswap,3,0,0\n"), ConfigError);
    EXPECT_THROW(parse_csv(std::string(kCsvHeader) + "\nswap,x,0,0,1,1,,,,,,\n"), ConfigError);
    EXPECT_THROW(parse_csv(std::string(kCsvHeader) + "\nfoo,3,0,0,1,1,,,,,,\n"), ConfigError);
}

TEST(Sweep, ZeroNoiseGridIsAllOnes) {
    SweepConfig c;
    c.n_list = {3};
    c.quad = {4, 4};
    const auto res = run_sweep(c);
    ASSERT_EQ(res.records.size(), 4u);
    for (const auto &r : res.records) {
        EXPECT_NEAR(r.success_recorded, 1.0, 1e-12);
        EXPECT_NEAR(r.success_true, 1.0, 1e-12);
    }
}

TEST(Sweep, TeleportSkipsEvenLengths) {
    SweepConfig c;
    c.schemes = {Scheme::Teleport, Scheme::Cluster};
    c.n_list = {3, 4};
    c.quad = {2, 3};
    std::size_t skipped = 0;
    const auto pts = enumerate_grid(c, &skipped);
    EXPECT_EQ(pts.size(), 3u);
    EXPECT_EQ(skipped, 1u);
    EXPECT_EQ(run_sweep(c).manifest.skipped_points, 1u);
}

TEST(Sweep, ValidationErrors) {
    SweepConfig c = small_config();
    c.p_grid = {};
    EXPECT_THROW(run_sweep(c), ConfigError);
    c = small_config();
    c.q_grid = {1.2};
    EXPECT_THROW(run_sweep(c), ConfigError);
    c = small_config();
    c.n_list = {9};
    EXPECT_THROW(run_sweep(c), ConfigError);
    c.mode = EvalMode::Shots;
    EXPECT_NO_THROW(c.validate());
    c = small_config();
    c.placement = "nowhere";
    EXPECT_THROW(run_sweep(c), ConfigError);
}

TEST(Sweep, OracleOverlayAtThreeQubits) {
    SweepConfig c = small_config();
    c.oracle_overlay = true;
    c.schemes = {Scheme::Swap, Scheme::Teleport, Scheme::Ghz, Scheme::Cluster};
    for (const auto &r : run_sweep(c).records) {
        ASSERT_TRUE(r.oracle_abs_diff.has_value());
        EXPECT_LT(*r.oracle_abs_diff, 1e-10);
    }
}

TEST(Sweep, WritesCsvAndManifest) {
    const auto dir = temp_dir("manifest");
    SweepConfig c = small_config();
    c.output = (dir / "out.csv").string();
    const auto res = run_sweep(c);
    const auto csv = slurp(dir / "out.csv");
    EXPECT_EQ(csv, emit_csv(res.records));
    const auto man = nlohmann::json::parse(slurp(dir / "out.json"));
    EXPECT_EQ(man["record_count"].get<std::size_t>(), res.records.size());
    EXPECT_EQ(man["version"].get<std::string>(), QST_VERSION);
    EXPECT_TRUE(man["calibrated_placement"].contains("swap"));
    EXPECT_EQ(man["config"]["placement"].get<std::string>(), "oracle-matched");
    EXPECT_EQ(manifest_path("a/b.csv"), "a/b.json");
    EXPECT_EQ(manifest_path("a/b"), "a/b.json");
}

TEST(Sweep, DeterministicAndParallelEqualsSerial) {
    const auto dir = temp_dir("determinism");
    SweepConfig c = small_config();
    c.mode = EvalMode::Shots;
    c.shots = 256;
    c.haar_count = 3;
    c.seed = 2024;
    c.output = (dir / "a.csv").string();
    run_sweep(c);
    c.output = (dir / "b.csv").string();
    run_sweep(c);
    c.output = (dir / "c.csv").string();
    c.threads = 4;
    run_sweep(c);
    const auto a = slurp(dir / "a.csv");
    EXPECT_EQ(a, slurp(dir / "b.csv"));
    EXPECT_EQ(a, slurp(dir / "c.csv"));
    c.seed = 2025;
    c.output.clear();
    EXPECT_NE(emit_csv(run_sweep(c).records), a);
}

TEST(Sweep, ShotsModeDefaultsToHaarAveraging) {
    SweepConfig c = small_config();
    c.mode = EvalMode::Shots;
    EXPECT_EQ(c.effective_averaging(), AveragingKind::Haar);
    c.mode = EvalMode::Exact;
    EXPECT_EQ(c.effective_averaging(), AveragingKind::Quadrature);
}

TEST(Sweep, FidelityColumn) {
    SweepConfig c = small_config();
    c.with_fidelity = true;
    c.schemes = {Scheme::Swap};
    for (const auto &r : run_sweep(c).records) {
        ASSERT_TRUE(r.fidelity.has_value());
        EXPECT_NEAR(*r.fidelity, fidelity(Scheme::Swap, r.q, r.p), 1e-10);
    }
}

TEST(Config, KeyValueAndJsonAgree) {
    const auto kv = sweep_config_from_settings(parse_settings(
        "# comment\nschemes = swap,cluster\nn = 3,5\np = linspace:0:0.5:3\nq=0,0.1\nseed=9\nmode=shots\nshots=100\n"));
    const auto js = sweep_config_from_settings(parse_settings(
        R"({"schemes": ["swap", "cluster"], "n": [3, 5], "p": "linspace:0:0.5:3", "q": [0, 0.1], "seed": 9,
            "mode": "shots", "shots": 100})"));
    EXPECT_EQ(config_to_json(kv), config_to_json(js));
    EXPECT_EQ(kv.p_grid, (std::vector<double>{0.0, 0.25, 0.5}));
    EXPECT_EQ(kv.n_list, (std::vector<std::size_t>{3, 5}));
    EXPECT_EQ(kv.shots, 100u);
}

TEST(Config, GridShorthand) {
    const auto c = sweep_config_from_settings({{"grid", "40"}});
    EXPECT_EQ(c.p_grid.size(), 40u);
    EXPECT_EQ(c.q_grid.front(), 0.0);
    EXPECT_EQ(c.q_grid.back(), 1.0);
}

TEST(Config, Errors) {
    EXPECT_THROW(sweep_config_from_settings({{"colour", "red"}}), ConfigError);
    EXPECT_THROW(sweep_config_from_settings({{"shots", "-3"}}), ConfigError);
    EXPECT_THROW(sweep_config_from_settings({{"mode", "fast"}}), ConfigError);
    EXPECT_THROW(sweep_config_from_settings({{"p", "0,abc"}}), ConfigError);
    EXPECT_THROW(parse_settings("just text\n"), ConfigError);
    EXPECT_THROW(parse_settings("{ bad json"), ConfigError);
}

TEST(Hellinger, Identities) {
    EXPECT_DOUBLE_EQ(hellinger_fidelity({0.2, 0.3, 0.5}, {0.2, 0.3, 0.5}), 1.0);
    EXPECT_DOUBLE_EQ(hellinger_fidelity({1.0, 0.0}, {0.0, 1.0}), 0.0);
    EXPECT_DOUBLE_EQ(hellinger_fidelity({1.0, 0.0}, {0.5, 0.5}), 0.5);
    EXPECT_DOUBLE_EQ(hellinger_fidelity({10.0, 0.0}, {3.0, 3.0}), 0.5);
}

TEST(Hellinger, EqualsClassicalFidelityOfDiagonalStates) {
    const double p[2] = {0.3, 0.7};
    const double q[2] = {0.6, 0.4};
    const double classical = std::pow(std::sqrt(p[0] * q[0]) + std::sqrt(p[1] * q[1]), 2);
    EXPECT_NEAR(hellinger_fidelity({0.3, 0.7}, {0.6, 0.4}), classical, 1e-15);
}

TEST(Hellinger, Errors) {
    EXPECT_THROW(hellinger_fidelity(std::vector<double>{}, std::vector<double>{}), ConfigError);
    EXPECT_THROW(hellinger_fidelity({1.0}, {0.5, 0.5}), ConfigError);
    EXPECT_THROW(hellinger_fidelity({0.0, 0.0}, {0.5, 0.5}), ConfigError);
}

TEST(Haar, UniformAndReproducible) {
    const auto a = haar_sample(3, 100000);
    double mean_cos = 0.0;
    for (const auto &s : a) {
        mean_cos += std::cos(s.theta);
        EXPECT_GE(s.phi, 0.0);
        EXPECT_LT(s.phi, 2.0 * std::numbers::pi);
    }
    EXPECT_NEAR(mean_cos / 100000.0, 0.0, 0.01);
    const auto b = haar_sample(3, 10);
    for (std::size_t i = 0; i < b.size(); ++i) {
        EXPECT_EQ(a[i].theta, b[i].theta);
        EXPECT_EQ(a[i].phi, b[i].phi);
    }
    EXPECT_THROW(haar_sample(1, 0), ConfigError);
}

TEST(Haar, AverageAgreesWithQuadrature) {
    const auto c = build_swap(3);
    const auto spec = NoiseSpec::oracle_matched(0.1, 0.0);
    const auto quad = bloch_averaged_eval(c, spec, {4, 4}).m0_recorded;
    double sum = 0.0, sum2 = 0.0;
    const auto states = haar_sample(17, 10000);
    for (const auto &s : states) {
        const double v = exact_eval(c, spec, s.theta, s.phi).m0_recorded;
        sum += v;
        sum2 += v * v;
    }
    const double n = static_cast<double>(states.size());
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / (n - 1));
    EXPECT_LT(std::abs(mean - quad), 3.0 * se);
}

TEST(Compare, OrderingsAndZeroNoise) {
    SweepConfig c;
    c.n_list = {3, 5};
    c.quad = {4, 4};
    for (const auto &r : compare_schemes(c)) {
        EXPECT_NEAR(r.mean, 1.0, 1e-12);
        EXPECT_EQ(r.stderr_, 0.0);
    }
    c.p_grid = {0.01};
    c.q_grid = {0.0};
    const auto gate = compare_schemes(c);
    c.p_grid = {0.0};
    c.q_grid = {0.05};
    const auto readout = compare_schemes(c);
    for (std::size_t n : {3, 5}) {
        double swap_g = 0, swap_r = 0, other_g_min = 2, other_r_max = -1;
        for (const auto &r : gate) {
            if (r.n != n) continue;
            if (r.scheme == Scheme::Swap) swap_g = r.mean;
            else other_g_min = std::min(other_g_min, r.mean);
        }
        for (const auto &r : readout) {
            if (r.n != n) continue;
            if (r.scheme == Scheme::Swap) swap_r = r.mean;
            else other_r_max = std::max(other_r_max, r.mean);
        }
        EXPECT_LT(swap_g, other_g_min) << "n=" << n;
        EXPECT_GT(swap_r, other_r_max) << "n=" << n;
    }
    EXPECT_NE(format_compare(gate).find("swap"), std::string::npos);
}
