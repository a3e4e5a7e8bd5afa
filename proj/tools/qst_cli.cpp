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

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "qst/checks.hpp"
#include "qst/circuit.hpp"
#include "qst/engine.hpp"
#include "qst/error.hpp"
#include "qst/fit.hpp"
#include "qst/mitigation.hpp"
#include "qst/oracle.hpp"
#include "qst/sweep.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

// Keys accepted both in --config files and as --<key> flags.
const std::vector<std::pair<std::string, std::string>> kSweepKeys = {
    {"schemes", "comma-separated subset of swap,teleport,ghz,cluster"},
    {"n", "comma-separated chain lengths"},
    {"p", "depolarizing grid: list or linspace:lo:hi:count"},
    {"q", "readout grid: list or linspace:lo:hi:count"},
    {"grid", "uniform count-point grid on [0,1] for both p and q"},
    {"kappa", "P(1|0) / P(0|1) ratio"},
    {"mode", "exact | shots"},
    {"shots", "shots per initial state in shots mode"},
    {"averaging", "quadrature | haar"},
    {"n_cos", "Gauss-Legendre nodes in cos(theta)"},
    {"n_phi", "trapezoid nodes in phi"},
    {"haar_samples", "initial states per point for haar averaging"},
    {"seed", "master seed"},
    {"placement", "oracle-matched | cnot-only | all-gates | all-gates-including-boundary | custom:<classes>"},
    {"readout_mode", "flip-channel-approx | exact-record"},
    {"conditional_noise", "when-applied | always"},
    {"fidelity", "also compute output-state fidelity (true/false)"},
    {"oracle_overlay", "add |engine - oracle| column at n=3 (true/false)"},
    {"threads", "worker threads"},
    {"output", "CSV path; the manifest is written next to it"},
};

struct SweepFlags {
    std::string config;
    std::map<std::string, std::string> values;
};

void add_sweep_flags(CLI::App *cmd, SweepFlags &flags) {
    cmd->add_option("--config", flags.config, "key=value or JSON config file");
    for (const auto &[key, help] : kSweepKeys) {
        std::string name = "--" + key;
        for (auto &ch : name) {
            if (ch == '_') ch = '-';
        }
        cmd->add_option_function<std::string>(
            name, [&flags, key = key](const std::string &v) { flags.values[key] = v; }, help);
    }
}

qst::SweepConfig resolve(const SweepFlags &flags) {
    qst::Settings st;
    if (!flags.config.empty()) {
        std::ifstream in(flags.config, std::ios::binary);
        if (!in) {
            throw qst::ConfigError("config: cannot read " + flags.config);
        }
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        st = qst::parse_settings(text);
    }
    for (const auto &[k, v] : flags.values) {
        st[k] = v;
    }
    return qst::sweep_config_from_settings(st);
}

std::vector<double> parse_list(const std::string &key, const std::string &v) {
    return qst::parse_grid(key, v);
}

void write_outputs(const std::string &path, const std::string &csv, const nlohmann::json &manifest) {
    if (path.empty()) {
        std::cout << csv;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw qst::ConfigError("cannot open " + path + " for writing");
    }
    out << csv;
    std::ofstream man(qst::manifest_path(path), std::ios::binary);
    if (!man) {
        throw qst::ConfigError("cannot write manifest next to " + path);
    }
    man << manifest.dump(2) << "\n";
}

int cmd_sweep(const SweepFlags &flags) {
    auto cfg = resolve(flags);
    const auto res = qst::run_sweep(cfg);
    if (cfg.output.empty()) {
        std::cout << qst::emit_csv(res.records);
    } else {
        std::fprintf(stderr, "wrote %zu records to %s\n", res.records.size(), cfg.output.c_str());
    }
    return 0;
}

int cmd_compare(const SweepFlags &flags) {
    auto cfg = resolve(flags);
    std::cout << qst::format_compare(qst::compare_schemes(cfg));
    return 0;
}

int cmd_oracle(const SweepFlags &flags) {
    const auto cfg = resolve(flags);
    cfg.validate();
    std::vector<qst::SurfaceRecord> records;
    for (auto s : cfg.schemes) {
        for (double p : cfg.p_grid) {
            for (double q : cfg.q_grid) {
                qst::SurfaceRecord r;
                r.scheme = s;
                r.n = 3;
                r.p = p;
                r.q = q;
                r.success_true = qst::m0_bar(s, q, p);
                r.success_recorded = qst::m_tilde(s, q, p, cfg.kappa);
                r.fidelity = qst::fidelity(s, q, p);
                const double s0 = std::clamp(r.success_recorded, 0.0, 1.0);
                r.hellinger = qst::hellinger_fidelity({s0, 1.0 - s0}, {1.0, 0.0});
                records.push_back(r);
            }
        }
    }
    nlohmann::json manifest;
    manifest["artifact"] = "qst";
    manifest["version"] = QST_VERSION;
    manifest["source"] = "closed-form series, n=3";
    manifest["config"] = qst::config_to_json(cfg);
    manifest["record_count"] = records.size();
    manifest["csv_schema"] = std::string(qst::kCsvHeader);
    write_outputs(cfg.output, qst::emit_csv(records), manifest);
    return 0;
}

struct MitigationFlags {
    std::string schemes = "swap,teleport,ghz,cluster";
    std::size_t n = 3;
    double p = 0.02;
    double q = 0.05;
    double kappa = 0.5;
    std::string alphas = "1,2,3,4,5";
    int nodes = 4;
    std::string json;
};

void add_mitigation_flags(CLI::App *cmd, MitigationFlags &f) {
    cmd->add_option("--schemes", f.schemes, "comma-separated schemes")->capture_default_str();
    cmd->add_option("--n", f.n, "chain length")->capture_default_str();
    cmd->add_option("--p", f.p, "depolarizing probability")->capture_default_str();
    cmd->add_option("--q", f.q, "readout parameter")->capture_default_str();
    cmd->add_option("--kappa", f.kappa, "P(1|0) / P(0|1) ratio")->capture_default_str();
    cmd->add_option("--alphas", f.alphas, "noise scale factors (>= 1)")->capture_default_str();
    cmd->add_option("--nodes", f.nodes, "quadrature nodes per axis")->capture_default_str();
    cmd->add_option("--json", f.json, "also write the report as JSON");
}

std::vector<qst::Scheme> parse_schemes(const std::string &v) {
    std::vector<qst::Scheme> out;
    for (const auto &t : qst::detail::split_list(v)) {
        if (!t.empty()) out.push_back(qst::parse_scheme(t));
    }
    if (out.empty()) throw qst::ConfigError("no schemes given");
    return out;
}

std::vector<qst::FitPoint> engine_points(qst::Scheme s, const MitigationFlags &f) {
    const auto alphas = parse_list("alphas", f.alphas);
    const auto spec = qst::NoiseSpec::oracle_matched(f.p, f.q, f.kappa);
    spec.validate();
    return qst::zne_points_from_engine(qst::build_scheme(s, f.n), spec, alphas, qst::SphereQuadrature{f.nodes, f.nodes});
}

int cmd_zne(const MitigationFlags &f) {
    nlohmann::json report = nlohmann::json::array();
    std::printf("%-9s %-8s %-14s\n", "scheme", "alpha", "success");
    for (auto s : parse_schemes(f.schemes)) {
        const auto pts = engine_points(s, f);
        for (const auto &pt : pts) {
            std::printf("%-9s %-8.4g %-14.10f\n", std::string(qst::to_string(s)).c_str(), pt.alpha, pt.value);
        }
        const auto fit = qst::exp_fit(pts);
        const auto est = qst::zne_extrapolate(fit);
        std::printf("%-9s fit a=%.8g b=%.8g c=%.8g  zne=%.8f +- %.3g\n", std::string(qst::to_string(s)).c_str(), fit.a,
                    fit.b, fit.c, est.value, est.stderr_);
        nlohmann::json row;
        row["scheme"] = qst::to_string(s);
        row["a"] = fit.a;
        row["b"] = fit.b;
        row["c"] = fit.c;
        row["zne"] = est.value;
        row["zne_stderr"] = est.stderr_;
        report.push_back(row);
    }
    if (!f.json.empty()) {
        std::ofstream(f.json) << report.dump(2) << "\n";
    }
    return 0;
}

int cmd_mitigate(const MitigationFlags &f) {
    nlohmann::json report = nlohmann::json::array();
    std::printf("%-9s %-14s %-26s %-26s\n", "scheme", "unmitigated", "zne", "readout-mitigated");
    for (auto s : parse_schemes(f.schemes)) {
        const auto pts = engine_points(s, f);
        double unmitigated = pts.front().value;
        for (const auto &pt : pts) {
            if (pt.alpha == 1.0) unmitigated = pt.value;
        }
        const auto rep = qst::mitigate_pipeline(s, f.n, unmitigated, pts, f.kappa);
        char zne[40], fin[40];
        std::snprintf(zne, sizeof(zne), "%.5f +- %.5f", rep.zne.value, rep.zne.stderr_);
        std::snprintf(fin, sizeof(fin), "%.5f +- %.5f%s", rep.final_value.value, rep.final_value.stderr_,
                      rep.overshoot ? " *" : "");
        std::printf("%-9s %-14.5f %-26s %-26s\n", std::string(qst::to_string(s)).c_str(), rep.unmitigated, zne, fin);
        nlohmann::json row;
        row["scheme"] = qst::to_string(s);
        row["n"] = f.n;
        row["unmitigated"] = rep.unmitigated;
        row["q_hat"] = rep.q_hat;
        row["zne"] = rep.zne.value;
        row["zne_stderr"] = rep.zne.stderr_;
        row["mitigated"] = rep.final_value.value;
        row["mitigated_stderr"] = rep.final_value.stderr_;
        row["overshoot"] = rep.overshoot;
        report.push_back(row);
    }
    if (!f.json.empty()) {
        std::ofstream(f.json) << report.dump(2) << "\n";
    }
    return 0;
}

int cmd_check() {
    bool ok = true;
    for (const auto &c : qst::run_invariant_checks()) {
        std::printf("%s  %-45s err=%.3g tol=%.3g\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.error, c.tolerance);
        ok = ok && c.passed;
    }
    if (!ok) {
        throw qst::InvariantError("invariant check failed");
    }
    return 0;
}

int dump_circuit(const std::string &spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) {
        throw qst::ConfigError("--dump-circuit expects SCHEME:N");
    }
    const auto scheme = qst::parse_scheme(spec.substr(0, colon));
    std::size_t n = 0;
    try {
        n = std::stoul(spec.substr(colon + 1));
    } catch (const std::exception &) {
        throw qst::ConfigError("--dump-circuit: bad chain length in '" + spec + "'");
    }
    std::cout << qst::circuit_to_text(qst::build_scheme(scheme, n));
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Noisy quantum state transfer on a qubit chain"};
    app.set_version_flag("--version", std::string(QST_VERSION));
    std::string dump;
    app.add_option("--dump-circuit", dump, "print the transfer circuit SCHEME:N in text form and exit");

    SweepFlags sweep_flags, compare_flags, oracle_flags;
    MitigationFlags zne_flags, mitigate_flags;
    auto *sweep = app.add_subcommand("sweep", "evaluate a (p, q) grid and write CSV + manifest");
    add_sweep_flags(sweep, sweep_flags);
    auto *compare = app.add_subcommand("compare", "mean success per chain length and scheme");
    add_sweep_flags(compare, compare_flags);
    auto *oracle = app.add_subcommand("oracle", "closed-form n=3 surfaces in the sweep CSV schema");
    add_sweep_flags(oracle, oracle_flags);
    auto *zne = app.add_subcommand("zne", "zero-noise extrapolation from folded circuits");
    add_mitigation_flags(zne, zne_flags);
    auto *mitigate = app.add_subcommand("mitigate", "ZNE followed by readout inversion");
    add_mitigation_flags(mitigate, mitigate_flags);
    auto *check = app.add_subcommand("check", "run the numerical invariant suite");
    app.require_subcommand(0, 1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (!dump.empty()) return dump_circuit(dump);
        if (*sweep) return cmd_sweep(sweep_flags);
        if (*compare) return cmd_compare(compare_flags);
        if (*oracle) return cmd_oracle(oracle_flags);
        if (*zne) return cmd_zne(zne_flags);
        if (*mitigate) return cmd_mitigate(mitigate_flags);
        if (*check) return cmd_check();
        std::cout << app.help();
        return 0;
    } catch (const qst::ConfigError &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const qst::InvariantError &e) {
        std::fprintf(stderr, "invariant violation: %s\n", e.what());
        return kExitInvariant;
    }
}
