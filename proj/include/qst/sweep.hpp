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

#ifndef QST_SWEEP_HPP
#define QST_SWEEP_HPP

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qst/circuit.hpp"
#include "qst/engine.hpp"
#include "qst/error.hpp"
#include "qst/oracle.hpp"
#include "qst/quadrature.hpp"
#include "qst/sampler.hpp"

#ifndef QST_VERSION
#define QST_VERSION "1.0.0"
#endif

namespace qst {

/// (Sum_i sqrt(p_i q_i))^2 over normalized count vectors, i.e. (1 - h^2)^2
/// with h the Hellinger distance.
inline double hellinger_fidelity(std::span<const double> P, std::span<const double> Q) {
    if (P.empty() || Q.empty()) {
        throw ConfigError("hellinger_fidelity: empty distribution");
    }
    if (P.size() != Q.size()) {
        throw ConfigError("hellinger_fidelity: distributions over different outcome sets");
    }
    double sp = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < P.size(); ++i) {
        if (P[i] < 0.0 || Q[i] < 0.0) {
            throw ConfigError("hellinger_fidelity: negative count");
        }
        sp += P[i];
        sq += Q[i];
    }
    if (sp <= 0.0 || sq <= 0.0) {
        throw ConfigError("hellinger_fidelity: empty distribution");
    }
    // Squared Bhattacharyya sum, expanded so the diagonal carries no sqrt
    // rounding: identical and disjoint inputs land exactly on 1 and 0.
    const auto n = P.size();
    std::vector<double> pq(n);
    for (std::size_t i = 0; i < n; ++i) {
        pq[i] = (P[i] / sp) * (Q[i] / sq);
    }
    double diag = 0.0, cross = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        diag += pq[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            cross += std::sqrt(pq[i] * pq[j]);
        }
    }
    return std::min(1.0, diag + 2.0 * cross);
}
inline double hellinger_fidelity(std::initializer_list<double> P, std::initializer_list<double> Q) {
    return hellinger_fidelity(std::span<const double>(P.begin(), P.size()), std::span<const double>(Q.begin(), Q.size()));
}

/// Uniformly distributed pure states: phi uniform on [0, 2pi), cos(theta)
/// uniform on [-1, 1].
inline std::vector<BlochAngles> haar_sample(std::uint64_t seed, std::size_t count) {
    if (count == 0) {
        throw ConfigError("haar_sample: count must be >= 1");
    }
    Rng rng(seed);
    std::vector<BlochAngles> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double phi = 2.0 * std::numbers::pi * rng.uniform();
        const double cos_theta = 2.0 * rng.uniform() - 1.0;
        out.push_back({std::acos(cos_theta), phi});
    }
    return out;
}

enum class EvalMode { Exact, Shots };
enum class AveragingKind { Quadrature, Haar };

struct SweepConfig {
    std::vector<Scheme> schemes{kTransferSchemes.begin(), kTransferSchemes.end()};
    std::vector<std::size_t> n_list{3};
    std::vector<double> p_grid{0.0};
    std::vector<double> q_grid{0.0};
    double kappa = 0.5;
    EvalMode mode = EvalMode::Exact;
    std::size_t shots = 1024;
    /// Unset: quadrature in exact mode, Haar sampling in shots mode.
    std::optional<AveragingKind> averaging;
    SphereQuadrature quad{16, 16};
    std::size_t haar_count = 5;
    std::uint64_t seed = 1;
    /// "oracle-matched" or a NoisePlacementPolicy name.
    std::string placement = "oracle-matched";
    ReadoutMode readout_mode = ReadoutMode::FlipChannelApprox;
    ConditionalNoise conditional_noise = ConditionalNoise::Always;
    bool with_fidelity = false;
    bool oracle_overlay = false;
    std::size_t threads = 1;
    std::string output;  // CSV path; manifest goes next to it

    AveragingKind effective_averaging() const {
        if (averaging) return *averaging;
        return mode == EvalMode::Exact ? AveragingKind::Quadrature : AveragingKind::Haar;
    }

    NoiseSpec noise(double p, double q) const {
        NoiseSpec s;
        if (placement == "oracle-matched") {
            s = NoiseSpec::oracle_matched(p, q, kappa);
            s.readout_mode = readout_mode;
        } else {
            s.p = p;
            s.q = q;
            s.kappa = kappa;
            s.placement = NoisePlacementPolicy::parse(placement);
            s.readout_mode = readout_mode;
            s.conditional_noise = conditional_noise;
        }
        return s;
    }

    void validate() const {
        if (schemes.empty() || n_list.empty() || p_grid.empty() || q_grid.empty()) {
            throw ConfigError("sweep: schemes, n, p grid and q grid must be non-empty");
        }
        for (double v : p_grid) {
            if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("sweep: p grid values must lie in [0, 1]");
        }
        for (double v : q_grid) {
            if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("sweep: q grid values must lie in [0, 1]");
            if (kappa * v > 1.0) throw ConfigError("sweep: kappa*q exceeds 1");
        }
        for (auto n : n_list) {
            if (n < 2 || n > kMaxQubits) throw ConfigError("sweep: chain length out of range");
            if (mode == EvalMode::Exact && n > kMaxDensityQubits) {
                throw ConfigError("sweep: exact mode supports n <= " + std::to_string(kMaxDensityQubits));
            }
        }
        if (mode == EvalMode::Shots && shots == 0) throw ConfigError("sweep: shots must be positive");
        if (effective_averaging() == AveragingKind::Haar && haar_count == 0) throw ConfigError("sweep: haar count must be >= 1");
        if (placement != "oracle-matched") {
            (void)NoisePlacementPolicy::parse(placement);
        }
    }
};

/// Uniform grid of `count` points on [lo, hi].
inline std::vector<double> linspace(double lo, double hi, std::size_t count) {
    if (count == 0) {
        throw ConfigError("linspace: count must be >= 1");
    }
    std::vector<double> v(count, lo);
    for (std::size_t i = 1; i < count; ++i) {
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return v;
}

/// One CSV row.
struct SurfaceRecord {
    Scheme scheme = Scheme::Swap;
    std::size_t n = 3;
    double p = 0.0;
    double q = 0.0;
    double success_recorded = 0.0;
    double success_true = 0.0;
    std::optional<double> fidelity;
    std::optional<double> hellinger;
    std::optional<double> stderr_;
    std::optional<std::size_t> shots;
    std::optional<std::uint64_t> seed;
    std::optional<double> oracle_abs_diff;
    bool operator==(const SurfaceRecord &) const = default;
};

// Frozen CSV contract: this header, this column order, %.12g numbers, empty
// fields for absent optionals, '\n' line endings.
inline constexpr std::string_view kCsvHeader =
    "scheme,n,p,q,success_recorded,success_true,fidelity,hellinger,stderr,shots,seed,oracle_abs_diff";

namespace detail {

inline std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::string opt12(const std::optional<double> &v) {
    return v ? fmt12(*v) : std::string();
}

inline std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

/// Comma-separated list with surrounding whitespace removed from each item.
inline std::vector<std::string> split_list(const std::string &s) {
    std::vector<std::string> out;
    for (auto item : split(s, ',')) {
        const auto b = item.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        const auto e = item.find_last_not_of(" \t");
        out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

}  // namespace detail

inline std::string csv_row(const SurfaceRecord &r) {
    std::string s;
    s += to_string(r.scheme);
    s += "," + std::to_string(r.n);
    s += "," + detail::fmt12(r.p);
    s += "," + detail::fmt12(r.q);
    s += "," + detail::fmt12(r.success_recorded);
    s += "," + detail::fmt12(r.success_true);
    s += "," + detail::opt12(r.fidelity);
    s += "," + detail::opt12(r.hellinger);
    s += "," + detail::opt12(r.stderr_);
    s += "," + (r.shots ? std::to_string(*r.shots) : std::string());
    s += "," + (r.seed ? std::to_string(*r.seed) : std::string());
    s += "," + detail::opt12(r.oracle_abs_diff);
    return s;
}

inline std::string emit_csv(const std::vector<SurfaceRecord> &records) {
    std::string out(kCsvHeader);
    out += "\n";
    for (const auto &r : records) {
        out += csv_row(r);
        out += "\n";
    }
    return out;
}

inline std::vector<SurfaceRecord> parse_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw ConfigError("parse_csv: header does not match the frozen schema");
    }
    std::vector<SurfaceRecord> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        const auto f = detail::split(line, ',');
        if (f.size() != 12) {
            throw ConfigError("parse_csv: line " + std::to_string(lineno) + " has " + std::to_string(f.size()) +
                              " fields, expected 12");
        }
        auto opt_d = [](const std::string &s) -> std::optional<double> {
            if (s.empty()) return std::nullopt;
            return std::stod(s);
        };
        try {
            SurfaceRecord r;
            r.scheme = parse_scheme(f[0]);
            r.n = std::stoul(f[1]);
            r.p = std::stod(f[2]);
            r.q = std::stod(f[3]);
            r.success_recorded = std::stod(f[4]);
            r.success_true = std::stod(f[5]);
            r.fidelity = opt_d(f[6]);
            r.hellinger = opt_d(f[7]);
            r.stderr_ = opt_d(f[8]);
            if (!f[9].empty()) r.shots = std::stoull(f[9]);
            if (!f[10].empty()) r.seed = std::stoull(f[10]);
            r.oracle_abs_diff = opt_d(f[11]);
            out.push_back(r);
        } catch (const ConfigError &) {
            throw;
        } catch (const std::exception &e) {
            throw ConfigError("parse_csv: line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

struct GridPoint {
    Scheme scheme;
    std::size_t n;
    double p;
    double q;
    std::uint64_t seed;
};

/// Points in deterministic order: scheme, n, p, q. Teleport skips even n.
inline std::vector<GridPoint> enumerate_grid(const SweepConfig &cfg, std::size_t *skipped = nullptr) {
    std::vector<GridPoint> pts;
    std::size_t skip = 0;
    std::uint64_t index = 0;
    for (auto s : cfg.schemes) {
        for (auto n : cfg.n_list) {
            const bool ok = !(s == Scheme::Teleport && n % 2 == 0) && !(s == Scheme::Ghz && n < 3) &&
                            !(s == Scheme::Teleport && n < 3);
            for (double p : cfg.p_grid) {
                for (double q : cfg.q_grid) {
                    if (ok) {
                        pts.push_back({s, n, p, q, derive_seed(cfg.seed, index)});
                    } else {
                        ++skip;
                    }
                    ++index;
                }
            }
        }
    }
    if (skipped != nullptr) {
        *skipped = skip;
    }
    return pts;
}

namespace detail {

struct Accumulator {
    double sum = 0.0, sum2 = 0.0;
    std::size_t n = 0;
    void add(double v) {
        sum += v;
        sum2 += v * v;
        ++n;
    }
    double mean() const {
        return sum / static_cast<double>(n);
    }
    /// Sample standard deviation over repetitions divided by sqrt(repetitions).
    double stderr_of_mean() const {
        if (n < 2) return 0.0;
        const double m = mean();
        const double var = std::max(0.0, (sum2 - static_cast<double>(n) * m * m) / static_cast<double>(n - 1));
        return std::sqrt(var / static_cast<double>(n));
    }
};

}  // namespace detail

inline SurfaceRecord evaluate_point(const SweepConfig &cfg, const GridPoint &pt) {
    const Circuit transfer = build_scheme(pt.scheme, pt.n);
    const NoiseSpec spec = cfg.noise(pt.p, pt.q);
    SurfaceRecord r;
    r.scheme = pt.scheme;
    r.n = pt.n;
    r.p = pt.p;
    r.q = pt.q;
    if (cfg.mode == EvalMode::Shots || cfg.effective_averaging() == AveragingKind::Haar) {
        r.seed = pt.seed;
    }
    const bool fidelity_ok = cfg.with_fidelity && pt.n <= kMaxDensityQubits;

    if (cfg.effective_averaging() == AveragingKind::Quadrature) {
        double rec = 0.0, tru = 0.0, fid = 0.0, var = 0.0;
        const auto nodes = cfg.quad.nodes();
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            const auto &node = nodes[k];
            if (cfg.mode == EvalMode::Exact) {
                const auto e = exact_eval(transfer, spec, node.theta, node.phi);
                rec += node.weight * e.m0_recorded;
                tru += node.weight * e.m0_true;
            } else {
                const auto e = sample_shots(transfer, spec, node.theta, node.phi, cfg.shots,
                                            derive_seed(pt.seed, k));
                rec += node.weight * e.m0_recorded;
                tru += node.weight * e.m0_true;
                var += node.weight * node.weight * (*e.stderr_) * (*e.stderr_);
            }
            if (fidelity_ok) {
                fid += node.weight * exact_fidelity(transfer, spec, node.theta, node.phi);
            }
        }
        r.success_recorded = rec;
        r.success_true = tru;
        if (cfg.mode == EvalMode::Shots) {
            r.stderr_ = std::sqrt(var);
        }
        if (fidelity_ok) {
            r.fidelity = fid;
        }
    } else {
        const auto states = haar_sample(derive_seed(pt.seed, 0), cfg.haar_count);
        detail::Accumulator rec, tru, fid;
        for (std::size_t k = 0; k < states.size(); ++k) {
            const auto &st = states[k];
            const auto e = cfg.mode == EvalMode::Exact
                               ? exact_eval(transfer, spec, st.theta, st.phi)
                               : sample_shots(transfer, spec, st.theta, st.phi, cfg.shots, derive_seed(pt.seed, k + 1));
            rec.add(e.m0_recorded);
            tru.add(e.m0_true);
            if (fidelity_ok) {
                fid.add(exact_fidelity(transfer, spec, st.theta, st.phi));
            }
        }
        r.success_recorded = rec.mean();
        r.success_true = tru.mean();
        r.stderr_ = rec.stderr_of_mean();
        if (fidelity_ok) {
            r.fidelity = fid.mean();
        }
    }
    if (cfg.mode == EvalMode::Shots) {
        r.shots = cfg.shots;
    }
    // Reference distribution of an ideal transfer is all-zeros.
    const double s0 = std::clamp(r.success_recorded, 0.0, 1.0);
    r.hellinger = hellinger_fidelity({s0, 1.0 - s0}, {1.0, 0.0});
    if (cfg.oracle_overlay && pt.n == 3) {
        r.oracle_abs_diff = std::abs(r.success_recorded - m_tilde(pt.scheme, pt.q, pt.p, cfg.kappa));
    }
    return r;
}

/// Evaluates f(i) for i in [0, count) on `threads` workers; results land at
/// their index so the output order never depends on scheduling.
template <typename T, typename F>
std::vector<T> parallel_map(std::size_t count, std::size_t threads, F &&f) {
    std::vector<T> out(count);
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            out[i] = f(i);
        }
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    const std::size_t workers = std::min(threads, count);
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    out[i] = f(i);
                } catch (...) {
                    std::lock_guard lock(error_mu);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
    return out;
}

/// "out.csv" -> "out.json"; other names get ".json" appended.
inline std::string manifest_path(const std::string &csv_path) {
    const std::string ext = ".csv";
    if (csv_path.size() >= ext.size() && csv_path.compare(csv_path.size() - ext.size(), ext.size(), ext) == 0) {
        return csv_path.substr(0, csv_path.size() - ext.size()) + ".json";
    }
    return csv_path + ".json";
}

struct RunManifest {
    nlohmann::json config;
    std::string version = QST_VERSION;
    std::map<std::string, std::string> calibrated_placement;
    double wall_time_s = 0.0;
    std::size_t record_count = 0;
    std::size_t skipped_points = 0;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["artifact"] = "qst";
        j["version"] = version;
        j["config"] = config;
        j["calibrated_placement"] = calibrated_placement;
        j["wall_time_s"] = wall_time_s;
        j["record_count"] = record_count;
        j["skipped_points"] = skipped_points;
        j["csv_schema"] = std::string(kCsvHeader);
        return j;
    }
};

inline nlohmann::json config_to_json(const SweepConfig &cfg) {
    nlohmann::json j;
    std::vector<std::string> schemes;
    for (auto s : cfg.schemes) schemes.emplace_back(to_string(s));
    j["schemes"] = schemes;
    j["n"] = cfg.n_list;
    j["p_grid"] = cfg.p_grid;
    j["q_grid"] = cfg.q_grid;
    j["kappa"] = cfg.kappa;
    j["mode"] = cfg.mode == EvalMode::Exact ? "exact" : "shots";
    j["shots"] = cfg.shots;
    j["averaging"] = cfg.effective_averaging() == AveragingKind::Quadrature ? "quadrature" : "haar";
    j["quad_nodes"] = {cfg.quad.n_cos, cfg.quad.n_phi};
    j["haar_samples"] = cfg.haar_count;
    j["seed"] = cfg.seed;
    j["placement"] = cfg.placement;
    j["readout_mode"] = std::string(to_string(cfg.readout_mode));
    j["conditional_noise"] = std::string(to_string(cfg.conditional_noise));
    j["fidelity"] = cfg.with_fidelity;
    j["oracle_overlay"] = cfg.oracle_overlay;
    j["threads"] = cfg.threads;
    j["output"] = cfg.output;
    return j;
}

struct SweepResult {
    std::vector<SurfaceRecord> records;
    RunManifest manifest;
};

/// Evaluates every grid point; writes CSV and manifest when cfg.output is set.
inline SweepResult run_sweep(const SweepConfig &cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    std::size_t skipped = 0;
    const auto pts = enumerate_grid(cfg, &skipped);
    SweepResult res;
    res.records = parallel_map<SurfaceRecord>(pts.size(), cfg.threads,
                                              [&](std::size_t i) { return evaluate_point(cfg, pts[i]); });
    res.manifest.config = config_to_json(cfg);
    for (auto s : cfg.schemes) {
        const auto spec = cfg.noise(0.0, 0.0);
        res.manifest.calibrated_placement[std::string(to_string(s))] =
            spec.placement.name() + "; conditional-noise=" + std::string(to_string(spec.conditional_noise)) +
            "; readout=" + std::string(to_string(spec.readout_mode));
    }
    res.manifest.record_count = res.records.size();
    res.manifest.skipped_points = skipped;
    res.manifest.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!cfg.output.empty()) {
        std::ofstream csv(cfg.output, std::ios::binary);
        if (!csv) {
            throw ConfigError("sweep: cannot open " + cfg.output + " for writing");
        }
        csv << emit_csv(res.records);
        std::ofstream man(manifest_path(cfg.output), std::ios::binary);
        if (!man) {
            throw ConfigError("sweep: cannot write manifest next to " + cfg.output);
        }
        man << res.manifest.to_json().dump(2) << "\n";
    }
    return res;
}

struct CompareRow {
    std::size_t n = 0;
    Scheme scheme = Scheme::Swap;
    double p = 0.0;
    double q = 0.0;
    double mean = 0.0;
    double stderr_ = 0.0;
};

/// Mean recorded success +- standard error per (n, scheme).
inline std::vector<CompareRow> compare_schemes(const SweepConfig &cfg) {
    auto res = run_sweep(cfg);
    std::vector<CompareRow> rows;
    for (const auto &r : res.records) {
        rows.push_back({r.n, r.scheme, r.p, r.q, r.success_recorded, r.stderr_.value_or(0.0)});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const CompareRow &a, const CompareRow &b) { return a.n < b.n; });
    return rows;
}

inline std::string format_compare(const std::vector<CompareRow> &rows) {
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-4s %-9s %-8s %-8s %-14s %-12s\n", "n", "scheme", "p", "q", "success", "stderr");
    out << buf;
    for (const auto &r : rows) {
        std::snprintf(buf, sizeof(buf), "%-4zu %-9s %-8.4g %-8.4g %-14.10f %-12.4g\n", r.n,
                      std::string(to_string(r.scheme)).c_str(), r.p, r.q, r.mean, r.stderr_);
        out << buf;
    }
    return out.str();
}

using Settings = std::map<std::string, std::string>;

/// Reads a JSON object or `key = value` lines ('#' starts a comment) into a
/// flat string map. JSON arrays become comma-separated lists.
inline Settings parse_settings(const std::string &text) {
    Settings out;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception &e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        auto scalar = [](const nlohmann::json &v) -> std::string {
            if (v.is_string()) return v.get<std::string>();
            if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
            if (v.is_number_integer()) return std::to_string(v.get<long long>());
            if (v.is_number()) return detail::fmt12(v.get<double>());
            throw ConfigError("config: unsupported value " + v.dump());
        };
        for (const auto &[k, v] : j.items()) {
            if (v.is_array()) {
                std::string joined;
                for (const auto &e : v) {
                    joined += (joined.empty() ? "" : ",") + scalar(e);
                }
                out[k] = joined;
            } else {
                out[k] = scalar(v);
            }
        }
        return out;
    }
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config: line " + std::to_string(lineno) + " is not key=value");
        }
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

namespace detail {

inline double to_double(const std::string &key, const std::string &v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception &) {
        throw ConfigError("config: " + key + " expects a number, got '" + v + "'");
    }
}

inline std::uint64_t to_uint(const std::string &key, const std::string &v) {
    try {
        std::size_t pos = 0;
        if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
        const auto u = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return u;
    } catch (const std::exception &) {
        throw ConfigError("config: " + key + " expects a non-negative integer, got '" + v + "'");
    }
}

inline bool to_bool(const std::string &key, const std::string &v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config: " + key + " expects a boolean, got '" + v + "'");
}

}  // namespace detail

/// "0,0.1,0.2" or "linspace:lo:hi:count".
inline std::vector<double> parse_grid(const std::string &key, const std::string &v) {
    if (v.rfind("linspace:", 0) == 0) {
        const auto f = detail::split(v.substr(9), ':');
        if (f.size() != 3) throw ConfigError("config: " + key + " linspace needs lo:hi:count");
        return linspace(detail::to_double(key, f[0]), detail::to_double(key, f[1]),
                        static_cast<std::size_t>(detail::to_uint(key, f[2])));
    }
    std::vector<double> out;
    for (const auto &t : detail::split_list(v)) {
        out.push_back(detail::to_double(key, t));
    }
    return out;
}

/// Builds a config from settings; unknown keys are rejected.
inline SweepConfig sweep_config_from_settings(const Settings &st) {
    SweepConfig c;
    for (const auto &[k, v] : st) {
        if (k == "schemes" || k == "scheme") {
            c.schemes.clear();
            for (const auto &t : detail::split_list(v)) {
                c.schemes.push_back(parse_scheme(t));
            }
        } else if (k == "n") {
            c.n_list.clear();
            for (const auto &t : detail::split_list(v)) {
                c.n_list.push_back(static_cast<std::size_t>(detail::to_uint(k, t)));
            }
        } else if (k == "p" || k == "p_grid") {
            c.p_grid = parse_grid(k, v);
        } else if (k == "q" || k == "q_grid") {
            c.q_grid = parse_grid(k, v);
        } else if (k == "grid") {
            const auto g = static_cast<std::size_t>(detail::to_uint(k, v));
            c.p_grid = linspace(0.0, 1.0, g);
            c.q_grid = linspace(0.0, 1.0, g);
        } else if (k == "kappa") {
            c.kappa = detail::to_double(k, v);
        } else if (k == "mode") {
            if (v == "exact") {
                c.mode = EvalMode::Exact;
            } else if (v == "shots") {
                c.mode = EvalMode::Shots;
            } else {
                throw ConfigError("config: mode must be exact or shots");
            }
        } else if (k == "shots") {
            c.shots = static_cast<std::size_t>(detail::to_uint(k, v));
        } else if (k == "averaging") {
            if (v == "quadrature") {
                c.averaging = AveragingKind::Quadrature;
            } else if (v == "haar") {
                c.averaging = AveragingKind::Haar;
            } else {
                throw ConfigError("config: averaging must be quadrature or haar");
            }
        } else if (k == "quad_cos" || k == "n_cos") {
            c.quad.n_cos = static_cast<int>(detail::to_uint(k, v));
        } else if (k == "quad_phi" || k == "n_phi") {
            c.quad.n_phi = static_cast<int>(detail::to_uint(k, v));
        } else if (k == "haar_samples") {
            c.haar_count = static_cast<std::size_t>(detail::to_uint(k, v));
        } else if (k == "seed") {
            c.seed = detail::to_uint(k, v);
        } else if (k == "placement") {
            c.placement = v;
        } else if (k == "readout_mode") {
            c.readout_mode = parse_readout_mode(v);
        } else if (k == "conditional_noise") {
            c.conditional_noise = parse_conditional_noise(v);
        } else if (k == "fidelity") {
            c.with_fidelity = detail::to_bool(k, v);
        } else if (k == "oracle_overlay") {
            c.oracle_overlay = detail::to_bool(k, v);
        } else if (k == "threads") {
            c.threads = static_cast<std::size_t>(detail::to_uint(k, v));
        } else if (k == "output") {
            c.output = v;
        } else {
            throw ConfigError("config: unknown key '" + k + "'");
        }
    }
    if (c.quad.n_cos < 1 || c.quad.n_phi < 1) {
        throw ConfigError("config: quadrature node counts must be >= 1");
    }
    return c;
}

inline SweepConfig load_sweep_config(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("config: cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return sweep_config_from_settings(parse_settings(ss.str()));
}

}  // namespace qst

#endif
