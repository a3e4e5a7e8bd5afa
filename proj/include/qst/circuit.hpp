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

#ifndef QST_CIRCUIT_HPP
#define QST_CIRCUIT_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qst/channels.hpp"
#include "qst/error.hpp"
#include "qst/tensor.hpp"

namespace qst {

enum class Gate { I, X, Y, Z, H, CNOT, CZ, U };

/// Gate classes that noise placement and folding select on.
enum class OpClass : std::uint8_t { Init, Disentangler, Cnot, SingleQubit, Conditional };

inline constexpr std::array<OpClass, 5> kAllOpClasses{OpClass::Init, OpClass::Disentangler, OpClass::Cnot,
                                                     OpClass::SingleQubit, OpClass::Conditional};

inline std::string_view to_string(OpClass c) {
    switch (c) {
        case OpClass::Init:
            return "init";
        case OpClass::Disentangler:
            return "disentangler";
        case OpClass::Cnot:
            return "cnot";
        case OpClass::SingleQubit:
            return "single-qubit";
        case OpClass::Conditional:
            return "conditional";
    }
    return "?";
}

inline OpClass parse_op_class(std::string_view s) {
    for (auto c : kAllOpClasses) {
        if (to_string(c) == s) {
            return c;
        }
    }
    if (s == "single") {
        return OpClass::SingleQubit;
    }
    throw ConfigError("unknown op class '" + std::string(s) + "'");
}

struct GateSpec {
    Gate gate = Gate::I;
    double theta = 0.0;
    double phi = 0.0;
    double lam = 0.0;
    bool adjoint = false;

    std::size_t arity() const noexcept {
        return gate == Gate::CNOT || gate == Gate::CZ ? 2 : 1;
    }

    bool is_pauli() const noexcept {
        return gate == Gate::I || gate == Gate::X || gate == Gate::Y || gate == Gate::Z;
    }

    ComplexMatrix matrix() const {
        switch (gate) {
            case Gate::I:
                return gates::I();
            case Gate::X:
                return gates::X();
            case Gate::Y:
                return gates::Y();
            case Gate::Z:
                return gates::Z();
            case Gate::H:
                return gates::H();
            case Gate::CNOT:
                return gates::CNOT();
            case Gate::CZ:
                return gates::CZ();
            case Gate::U: {
                auto u = u_gate(theta, phi, lam);
                return adjoint ? u.adjoint() : u;
            }
        }
        return gates::I();
    }

    GateSpec inverse() const {
        GateSpec g = *this;
        g.adjoint = !adjoint;
        return g;
    }

    bool operator==(const GateSpec &) const = default;
};

struct UnitaryOp {
    GateSpec gate;
    std::vector<std::size_t> sites;
    OpClass cls = OpClass::SingleQubit;
    bool operator==(const UnitaryOp &) const = default;
};

struct MeasureOp {
    std::size_t site = 0;
    std::size_t cbit = 0;
    bool operator==(const MeasureOp &) const = default;
};

/// Applies `gate` to `site` when classical bit `cbit` equals `trigger`.
struct ConditionalOp {
    GateSpec gate;
    std::size_t site = 0;
    std::size_t cbit = 0;
    int trigger = 1;
    bool operator==(const ConditionalOp &) const = default;
};

using CircuitOp = std::variant<UnitaryOp, MeasureOp, ConditionalOp>;

enum class Scheme { Swap, Teleport, Ghz, Cluster, Custom };

inline constexpr std::array<Scheme, 4> kTransferSchemes{Scheme::Swap, Scheme::Teleport, Scheme::Ghz, Scheme::Cluster};

inline std::string_view to_string(Scheme s) {
    switch (s) {
        case Scheme::Swap:
            return "swap";
        case Scheme::Teleport:
            return "teleport";
        case Scheme::Ghz:
            return "ghz";
        case Scheme::Cluster:
            return "cluster";
        case Scheme::Custom:
            return "custom";
    }
    return "?";
}

inline Scheme parse_scheme(std::string_view s) {
    for (auto v : {Scheme::Swap, Scheme::Teleport, Scheme::Ghz, Scheme::Cluster, Scheme::Custom}) {
        if (to_string(v) == s) {
            return v;
        }
    }
    throw ConfigError("unknown scheme '" + std::string(s) + "'");
}

/// Initial-state angles of the transferred qubit, |tau> = U(theta, phi, 0)|0>.
struct BlochAngles {
    double theta = 0.0;
    double phi = 0.0;
};

enum class WrapMode { Success, Fidelity };

/// Program on a linear chain. Two-qubit gates must act on neighbours.
class Circuit {
   public:
    Circuit() = default;
    Circuit(std::size_t n_qubits, std::size_t n_cbits, Scheme scheme = Scheme::Custom)
        : n_qubits_(n_qubits), n_cbits_(n_cbits), scheme_(scheme) {
        if (n_qubits == 0 || n_qubits > kMaxQubits) {
            throw ConfigError("Circuit: qubit count must be in [1, " + std::to_string(kMaxQubits) + "]");
        }
    }

    std::size_t n_qubits() const noexcept {
        return n_qubits_;
    }
    std::size_t n_cbits() const noexcept {
        return n_cbits_;
    }
    Scheme scheme() const noexcept {
        return scheme_;
    }
    const std::vector<CircuitOp> &ops() const noexcept {
        return ops_;
    }
    /// Set once wrap_protocol has attached initializer (and disentangler).
    const std::optional<BlochAngles> &initial_state() const noexcept {
        return initial_state_;
    }
    std::optional<WrapMode> wrap_mode() const noexcept {
        return wrap_mode_;
    }

    Circuit &unitary(GateSpec g, std::vector<std::size_t> sites, std::optional<OpClass> cls = std::nullopt) {
        const OpClass c = cls.value_or(g.arity() == 2 ? OpClass::Cnot : OpClass::SingleQubit);
        UnitaryOp op{g, std::move(sites), c};
        check_unitary(op);
        ops_.emplace_back(std::move(op));
        return *this;
    }
    Circuit &h(std::size_t q) {
        return unitary({Gate::H}, {q});
    }
    Circuit &x(std::size_t q) {
        return unitary({Gate::X}, {q});
    }
    Circuit &z(std::size_t q) {
        return unitary({Gate::Z}, {q});
    }
    Circuit &cnot(std::size_t control, std::size_t target) {
        return unitary({Gate::CNOT}, {control, target});
    }
    Circuit &measure(std::size_t q, std::size_t cbit) {
        check_site(q);
        check_cbit(cbit);
        ops_.emplace_back(MeasureOp{q, cbit});
        return *this;
    }
    Circuit &conditional(GateSpec g, std::size_t q, std::size_t cbit, int trigger = 1) {
        if (g.arity() != 1) {
            throw ConfigError("Circuit: conditional gates must be single-qubit");
        }
        check_site(q);
        check_cbit(cbit);
        if (trigger != 0 && trigger != 1) {
            throw ConfigError("Circuit: trigger value must be 0 or 1");
        }
        ops_.emplace_back(ConditionalOp{g, q, cbit, trigger});
        return *this;
    }
    Circuit &append(CircuitOp op) {
        std::visit(
            [this](auto &o) {
                using T = std::decay_t<decltype(o)>;
                if constexpr (std::is_same_v<T, UnitaryOp>) {
                    check_unitary(o);
                } else {
                    check_site(o.site);
                    check_cbit(o.cbit);
                }
            },
            op);
        ops_.push_back(std::move(op));
        return *this;
    }

    /// Full structural check, including classical-bit dataflow: every read
    /// follows a write, and no bit is overwritten before it is read.
    void validate() const {
        std::vector<int> state(n_cbits_, 0);  // 0 unwritten, 1 written-unread, 2 read
        for (const auto &op : ops_) {
            if (const auto *m = std::get_if<MeasureOp>(&op)) {
                if (state[m->cbit] == 1) {
                    throw ConfigError("Circuit: classical bit c" + std::to_string(m->cbit) +
                                      " written twice before a read");
                }
                state[m->cbit] = 1;
            } else if (const auto *c = std::get_if<ConditionalOp>(&op)) {
                if (state[c->cbit] == 0) {
                    throw ConfigError("Circuit: classical bit c" + std::to_string(c->cbit) + " read before written");
                }
                state[c->cbit] = 2;
            }
        }
    }

    std::size_t count_unitaries(Gate g) const {
        return static_cast<std::size_t>(std::count_if(ops_.begin(), ops_.end(), [g](const CircuitOp &op) {
            const auto *u = std::get_if<UnitaryOp>(&op);
            return u != nullptr && u->gate.gate == g;
        }));
    }
    std::size_t count_measurements() const {
        return static_cast<std::size_t>(
            std::count_if(ops_.begin(), ops_.end(), [](const CircuitOp &op) { return std::holds_alternative<MeasureOp>(op); }));
    }
    std::size_t count_conditionals(Gate g) const {
        return static_cast<std::size_t>(std::count_if(ops_.begin(), ops_.end(), [g](const CircuitOp &op) {
            const auto *c = std::get_if<ConditionalOp>(&op);
            return c != nullptr && c->gate.gate == g;
        }));
    }

    bool operator==(const Circuit &) const = default;

   private:
    friend Circuit wrap_protocol(const Circuit &, double, double, WrapMode);
    friend Circuit circuit_from_text(std::string_view);

    void check_site(std::size_t q) const {
        if (q >= n_qubits_) {
            throw ConfigError("Circuit: site " + std::to_string(q) + " out of range for " + std::to_string(n_qubits_) +
                              " qubits");
        }
    }
    void check_cbit(std::size_t c) const {
        if (c >= n_cbits_) {
            throw ConfigError("Circuit: classical bit c" + std::to_string(c) + " not declared");
        }
    }
    void check_unitary(const UnitaryOp &op) const {
        if (op.sites.size() != op.gate.arity()) {
            throw ConfigError("Circuit: gate arity does not match site count");
        }
        for (auto s : op.sites) {
            check_site(s);
        }
        if (op.sites.size() == 2) {
            const auto a = op.sites[0];
            const auto b = op.sites[1];
            if ((a > b ? a - b : b - a) != 1) {
                throw ConfigError("Circuit: two-qubit gate on non-neighbouring sites " + std::to_string(a) + "," +
                                  std::to_string(b));
            }
        }
    }

    std::size_t n_qubits_ = 0;
    std::size_t n_cbits_ = 0;
    Scheme scheme_ = Scheme::Custom;
    std::vector<CircuitOp> ops_;
    std::optional<BlochAngles> initial_state_;
    std::optional<WrapMode> wrap_mode_;
};

/// Successive SWAPs down the chain, each kept as three alternating CNOTs.
inline Circuit build_swap(std::size_t n) {
    if (n < 2) {
        throw ConfigError("build_swap: need at least 2 qubits");
    }
    Circuit c(n, 0, Scheme::Swap);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        c.cnot(k, k + 1).cnot(k + 1, k).cnot(k, k + 1);
    }
    return c;
}

/// Hop-by-hop teleportation; every hop consumes two qubits (Bell pair).
inline Circuit build_teleport(std::size_t n) {
    if (n < 3 || n % 2 == 0) {
        throw ConfigError("build_teleport: need an odd qubit count >= 3 (each hop consumes an ancilla and a target), got " +
                          std::to_string(n));
    }
    Circuit c(n, n - 1, Scheme::Teleport);
    std::size_t bit = 0;
    for (std::size_t s = 0; s + 2 < n; s += 2) {
        const std::size_t a = s + 1;
        const std::size_t t = s + 2;
        c.h(a).cnot(a, t).cnot(s, a).h(s);
        c.measure(s, bit).measure(a, bit + 1);
        c.conditional({Gate::X}, t, bit + 1).conditional({Gate::Z}, t, bit);
        bit += 2;
    }
    return c;
}

/// GHZ channel over qubits 1..n-1. X corrections fan out from qubit 1's bit,
/// Z corrections chain through H/measure on qubits 2..n-2.
inline Circuit build_ghz(std::size_t n) {
    if (n < 3) {
        throw ConfigError("build_ghz: need at least 3 qubits");
    }
    Circuit c(n, n - 1, Scheme::Ghz);
    c.h(1).cnot(1, 2).cnot(0, 1);
    for (std::size_t k = 2; k + 1 < n; ++k) {
        c.cnot(k, k + 1);
    }
    c.h(0).measure(0, 0).measure(1, 1);
    for (std::size_t t = 2; t < n; ++t) {
        c.conditional({Gate::X}, t, 1);
    }
    c.conditional({Gate::Z}, 2, 0);
    for (std::size_t k = 2; k + 1 < n; ++k) {
        c.h(k).measure(k, k).conditional({Gate::Z}, k + 1, k);
    }
    return c;
}

/// One-dimensional cluster (gate teleportation) in CNOT form.
inline Circuit build_cluster(std::size_t n) {
    if (n < 2) {
        throw ConfigError("build_cluster: need at least 2 qubits");
    }
    Circuit c(n, n - 1, Scheme::Cluster);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        c.cnot(k, k + 1).h(k).measure(k, k).conditional({Gate::Z}, k + 1, k);
    }
    return c;
}

inline Circuit build_scheme(Scheme s, std::size_t n) {
    switch (s) {
        case Scheme::Swap:
            return build_swap(n);
        case Scheme::Teleport:
            return build_teleport(n);
        case Scheme::Ghz:
            return build_ghz(n);
        case Scheme::Cluster:
            return build_cluster(n);
        case Scheme::Custom:
            break;
    }
    throw ConfigError("build_scheme: no builder for custom circuits");
}

/// Prepends the initializer U(theta, phi, 0) on qubit 0. In success mode also
/// appends the disentangler on the last qubit and the final measurement into
/// a fresh classical bit.
inline Circuit wrap_protocol(const Circuit &c, double theta, double phi, WrapMode mode = WrapMode::Success) {
    if (c.initial_state_) {
        throw ConfigError("wrap_protocol: circuit is already wrapped");
    }
    const std::size_t last = c.n_qubits() - 1;
    Circuit out(c.n_qubits(), c.n_cbits() + (mode == WrapMode::Success ? 1 : 0), c.scheme());
    const GateSpec init{Gate::U, theta, phi, 0.0, false};
    out.unitary(init, {0}, OpClass::Init);
    for (const auto &op : c.ops()) {
        out.append(op);
    }
    if (mode == WrapMode::Success) {
        out.unitary(init.inverse(), {last}, OpClass::Disentangler);
        out.measure(last, c.n_cbits());
    }
    out.initial_state_ = BlochAngles{theta, phi};
    out.wrap_mode_ = mode;
    return out;
}

// Line-oriented text form, one op per line:
//   H 1 | X 0 | Y 0 | Z 0 | I 0
//   CX 0 1 | CZ 0 1
//   U q theta phi lam | UDG q theta phi lam
//   INIT q theta phi lam | DISENTANGLE q theta phi lam
//   MEASURE q c<bit>
//   IF c<bit>==<v> <gate> q
// An optional trailing "@<class>" overrides the default op class.

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string_view gate_token(const GateSpec &g) {
    switch (g.gate) {
        case Gate::I:
            return "I";
        case Gate::X:
            return "X";
        case Gate::Y:
            return "Y";
        case Gate::Z:
            return "Z";
        case Gate::H:
            return "H";
        case Gate::CNOT:
            return "CX";
        case Gate::CZ:
            return "CZ";
        case Gate::U:
            return g.adjoint ? "UDG" : "U";
    }
    return "?";
}

inline GateSpec parse_gate_token(std::string_view t) {
    if (t == "I") return {Gate::I};
    if (t == "X") return {Gate::X};
    if (t == "Y") return {Gate::Y};
    if (t == "Z") return {Gate::Z};
    if (t == "H") return {Gate::H};
    if (t == "CX") return {Gate::CNOT};
    if (t == "CZ") return {Gate::CZ};
    if (t == "U") return {Gate::U};
    if (t == "UDG") return {Gate::U, 0.0, 0.0, 0.0, true};
    throw ConfigError("circuit text: unknown gate '" + std::string(t) + "'");
}

inline OpClass default_class(const GateSpec &g) {
    return g.arity() == 2 ? OpClass::Cnot : OpClass::SingleQubit;
}

}  // namespace detail

inline std::string circuit_to_text(const Circuit &c) {
    std::ostringstream out;
    out << "qst-circuit 1\n";
    out << "scheme " << to_string(c.scheme()) << "\n";
    out << "qubits " << c.n_qubits() << "\n";
    out << "cbits " << c.n_cbits() << "\n";
    if (c.wrap_mode()) {
        out << "wrap " << (*c.wrap_mode() == WrapMode::Success ? "success" : "fidelity") << " "
            << detail::fmt_double(c.initial_state()->theta) << " " << detail::fmt_double(c.initial_state()->phi)
            << "\n";
    }
    for (const auto &op : c.ops()) {
        if (const auto *u = std::get_if<UnitaryOp>(&op)) {
            const bool boundary = u->cls == OpClass::Init || u->cls == OpClass::Disentangler;
            if (boundary) {
                out << (u->cls == OpClass::Init ? "INIT" : "DISENTANGLE");
            } else {
                out << detail::gate_token(u->gate);
            }
            for (auto s : u->sites) {
                out << " " << s;
            }
            if (u->gate.gate == Gate::U) {
                out << " " << detail::fmt_double(u->gate.theta) << " " << detail::fmt_double(u->gate.phi) << " "
                    << detail::fmt_double(u->gate.lam);
            }
            if (!boundary && u->cls != detail::default_class(u->gate)) {
                out << " @" << to_string(u->cls);
            }
        } else if (const auto *m = std::get_if<MeasureOp>(&op)) {
            out << "MEASURE " << m->site << " c" << m->cbit;
        } else {
            const auto &cd = std::get<ConditionalOp>(op);
            out << "IF c" << cd.cbit << "==" << cd.trigger << " " << detail::gate_token(cd.gate) << " " << cd.site;
            if (cd.gate.gate == Gate::U) {
                out << " " << detail::fmt_double(cd.gate.theta) << " " << detail::fmt_double(cd.gate.phi) << " "
                    << detail::fmt_double(cd.gate.lam);
            }
        }
        out << "\n";
    }
    return out.str();
}

inline Circuit circuit_from_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t qubits = 0;
    std::size_t cbits = 0;
    Scheme scheme = Scheme::Custom;
    std::optional<Circuit> c;
    std::optional<BlochAngles> angles;
    std::optional<WrapMode> mode;
    std::size_t lineno = 0;
    auto fail = [&](const std::string &msg) -> ConfigError {
        return ConfigError("circuit text line " + std::to_string(lineno) + ": " + msg);
    };
    auto parse_cbit = [&](const std::string &tok) {
        if (tok.size() < 2 || tok[0] != 'c') {
            throw fail("expected c<bit>, got '" + tok + "'");
        }
        return static_cast<std::size_t>(std::stoul(tok.substr(1)));
    };
    auto ensure = [&]() -> Circuit & {
        if (!c) {
            c.emplace(qubits, cbits, scheme);
        }
        return *c;
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) {
            tok.push_back(t);
        }
        if (tok.empty()) {
            continue;
        }
        std::optional<OpClass> cls;
        if (tok.back().starts_with("@")) {
            cls = parse_op_class(std::string_view(tok.back()).substr(1));
            tok.pop_back();
        }
        const std::string &k = tok[0];
        try {
            if (k == "qst-circuit") {
                continue;
            } else if (k == "scheme") {
                scheme = parse_scheme(tok.at(1));
            } else if (k == "qubits") {
                qubits = std::stoul(tok.at(1));
            } else if (k == "cbits") {
                cbits = std::stoul(tok.at(1));
            } else if (k == "wrap") {
                mode = tok.at(1) == "success" ? WrapMode::Success : WrapMode::Fidelity;
                angles = BlochAngles{std::stod(tok.at(2)), std::stod(tok.at(3))};
            } else if (k == "MEASURE") {
                ensure().measure(std::stoul(tok.at(1)), parse_cbit(tok.at(2)));
            } else if (k == "IF") {
                const auto &cond = tok.at(1);
                const auto eq = cond.find("==");
                if (eq == std::string::npos) {
                    throw fail("expected c<bit>==<v>");
                }
                GateSpec g = detail::parse_gate_token(tok.at(2));
                if (g.gate == Gate::U) {
                    g.theta = std::stod(tok.at(4));
                    g.phi = std::stod(tok.at(5));
                    g.lam = std::stod(tok.at(6));
                }
                ensure().conditional(g, std::stoul(tok.at(3)), parse_cbit(cond.substr(0, eq)),
                                     std::stoi(cond.substr(eq + 2)));
            } else {
                GateSpec g;
                if (k == "INIT" || k == "DISENTANGLE") {
                    g = GateSpec{Gate::U, 0.0, 0.0, 0.0, k == "DISENTANGLE"};
                    cls = k == "INIT" ? OpClass::Init : OpClass::Disentangler;
                } else {
                    g = detail::parse_gate_token(k);
                }
                std::vector<std::size_t> sites;
                std::size_t i = 1;
                for (; i <= g.arity(); ++i) {
                    sites.push_back(std::stoul(tok.at(i)));
                }
                if (g.gate == Gate::U) {
                    g.theta = std::stod(tok.at(i));
                    g.phi = std::stod(tok.at(i + 1));
                    g.lam = std::stod(tok.at(i + 2));
                }
                ensure().unitary(g, std::move(sites), cls);
            }
        } catch (const ConfigError &) {
            throw;
        } catch (const std::exception &e) {
            throw fail(std::string("malformed line '") + line + "' (" + e.what() + ")");
        }
    }
    Circuit &out = ensure();
    out.initial_state_ = angles;
    out.wrap_mode_ = mode;
    out.validate();
    return out;
}

/// Which op classes receive a depolarizing channel after the ideal gate.
class NoisePlacementPolicy {
   public:
    enum class Kind { CnotOnly, AllGates, AllGatesIncludingBoundary, Custom };

    static NoisePlacementPolicy cnot_only() {
        return {Kind::CnotOnly, bit(OpClass::Cnot)};
    }
    /// Every gate of the transfer circuit; initializer and disentangler stay ideal.
    static NoisePlacementPolicy all_gates() {
        return {Kind::AllGates,
                static_cast<std::uint8_t>(bit(OpClass::Cnot) | bit(OpClass::SingleQubit) | bit(OpClass::Conditional))};
    }
    static NoisePlacementPolicy all_gates_including_boundary() {
        std::uint8_t m = 0;
        for (auto c : kAllOpClasses) {
            m |= bit(c);
        }
        return {Kind::AllGatesIncludingBoundary, m};
    }
    static NoisePlacementPolicy custom(std::initializer_list<OpClass> classes) {
        std::uint8_t m = 0;
        for (auto c : classes) {
            m |= bit(c);
        }
        return {Kind::Custom, m};
    }

    /// "cnot-only", "all-gates", "all-gates-including-boundary", or a comma
    /// separated class list such as "init,cnot".
    static NoisePlacementPolicy parse(std::string_view s) {
        if (s == "cnot-only") return cnot_only();
        if (s == "all-gates") return all_gates();
        if (s == "all-gates-including-boundary") return all_gates_including_boundary();
        NoisePlacementPolicy p{Kind::Custom, 0};
        std::string rest(s.starts_with("custom:") ? s.substr(7) : s);
        std::istringstream in(rest);
        for (std::string item; std::getline(in, item, ',');) {
            if (!item.empty()) {
                p.mask_ |= bit(parse_op_class(item));
            }
        }
        return p;
    }

    bool applies_to(OpClass c) const noexcept {
        return (mask_ & bit(c)) != 0;
    }
    Kind kind() const noexcept {
        return kind_;
    }
    std::uint8_t mask() const noexcept {
        return mask_;
    }

    std::string name() const {
        switch (kind_) {
            case Kind::CnotOnly:
                return "cnot-only";
            case Kind::AllGates:
                return "all-gates";
            case Kind::AllGatesIncludingBoundary:
                return "all-gates-including-boundary";
            case Kind::Custom:
                break;
        }
        std::string s = "custom:";
        bool first = true;
        for (auto c : kAllOpClasses) {
            if (applies_to(c)) {
                s += (first ? "" : ",") + std::string(to_string(c));
                first = false;
            }
        }
        return s;
    }

    bool operator==(const NoisePlacementPolicy &) const = default;

   private:
    NoisePlacementPolicy(Kind k, std::uint8_t m) : kind_(k), mask_(m) {
    }
    static constexpr std::uint8_t bit(OpClass c) {
        return static_cast<std::uint8_t>(1U << static_cast<unsigned>(c));
    }

    Kind kind_ = Kind::AllGatesIncludingBoundary;
    std::uint8_t mask_ = 0;
};

}  // namespace qst

#endif
