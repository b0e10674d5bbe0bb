// Copyright 2026 The ftperc Authors
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

#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ftperc/errors.hpp"
#include "ftperc/rng.hpp"

namespace ftperc {

inline constexpr std::size_t kDefaultMaxArity = 3;
inline constexpr std::string_view kIdentityKind = "I";

/// One gate location. Gate kinds are opaque labels; "I" is the identity.
struct Gate {
    std::uint32_t id = 0;
    std::string kind;
    std::vector<std::uint32_t> qubits;
    std::uint32_t time = 1;  // 1-based timestep

    std::size_t arity() const {
        return qubits.size();
    }
    bool is_identity() const {
        return kind == kIdentityKind;
    }
    bool operator==(const Gate &) const = default;
};

/// A gate as written by a user, before placement and identity filling.
struct GateSpec {
    std::string kind;
    std::vector<std::uint32_t> qubits;
};

/// Gate placements on a qubit x timestep grid. Every (qubit, step) cell is
/// covered by exactly one gate; cells nobody mentioned hold an "I" gate.
/// Within a step, gates are ordered by their smallest qubit, and ids are
/// assigned in (step, smallest qubit) order.
class Circuit {
   public:
    Circuit() = default;

    static Circuit from_steps(
        std::size_t n_qubits, const std::vector<std::vector<GateSpec>> &steps,
        std::size_t max_arity = kDefaultMaxArity) {
        if (n_qubits == 0) {
            throw std::invalid_argument("circuit must declare at least one qubit");
        }
        if (steps.empty()) {
            throw std::invalid_argument("circuit must contain at least one step");
        }
        if (n_qubits > std::numeric_limits<std::uint32_t>::max() ||
            steps.size() > std::numeric_limits<std::uint32_t>::max() - 1) {
            throw std::invalid_argument("circuit too large");
        }
        Circuit c;
        c.n_qubits_ = n_qubits;
        c.n_steps_ = steps.size();
        constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
        c.grid_.assign(n_qubits * steps.size(), kUnset);

        for (std::size_t s = 0; s < steps.size(); ++s) {
            std::vector<GateSpec> placed;
            std::vector<bool> used(n_qubits, false);
            for (const auto &g : steps[s]) {
                if (g.qubits.empty()) {
                    throw std::invalid_argument("gate '" + g.kind + "' acts on no qubits");
                }
                if (g.qubits.size() > max_arity) {
                    throw std::invalid_argument(
                        "gate '" + g.kind + "' has arity " + std::to_string(g.qubits.size()) +
                        " above maximum " + std::to_string(max_arity));
                }
                for (std::size_t i = 0; i < g.qubits.size(); ++i) {
                    const auto q = g.qubits[i];
                    if (q >= n_qubits) {
                        throw std::invalid_argument("qubit index " + std::to_string(q) + " out of range");
                    }
                    for (std::size_t j = 0; j < i; ++j) {
                        if (g.qubits[j] == q) {
                            throw std::invalid_argument("duplicate qubit in gate");
                        }
                    }
                    if (used[q]) {
                        throw std::invalid_argument(
                            "qubit " + std::to_string(q) + " used twice in step " + std::to_string(s + 1));
                    }
                    used[q] = true;
                }
                placed.push_back(g);
            }
            for (std::uint32_t q = 0; q < n_qubits; ++q) {
                if (!used[q]) {
                    placed.push_back(GateSpec{std::string(kIdentityKind), {q}});
                }
            }
            std::sort(placed.begin(), placed.end(), [](const GateSpec &a, const GateSpec &b) {
                return *std::min_element(a.qubits.begin(), a.qubits.end()) <
                       *std::min_element(b.qubits.begin(), b.qubits.end());
            });
            for (auto &g : placed) {
                Gate gate;
                gate.id = static_cast<std::uint32_t>(c.gates_.size());
                gate.kind = std::move(g.kind);
                gate.qubits = std::move(g.qubits);
                gate.time = static_cast<std::uint32_t>(s + 1);
                for (auto q : gate.qubits) {
                    c.grid_[s * n_qubits + q] = gate.id;
                }
                c.gates_.push_back(std::move(gate));
            }
        }
        return c;
    }

    std::size_t n_qubits() const {
        return n_qubits_;
    }
    std::size_t n_steps() const {
        return n_steps_;
    }
    const std::vector<Gate> &gates() const {
        return gates_;
    }
    std::size_t max_arity() const {
        std::size_t m = 0;
        for (const auto &g : gates_) {
            m = std::max(m, g.arity());
        }
        return m;
    }

    /// Id of the gate acting on `qubit` at 1-based `time`.
    std::uint32_t gate_id_at(std::size_t qubit, std::size_t time) const {
        if (qubit >= n_qubits_ || time < 1 || time > n_steps_) {
            throw std::out_of_range("cell outside circuit grid");
        }
        return grid_[(time - 1) * n_qubits_ + qubit];
    }
    const Gate &gate_at(std::size_t qubit, std::size_t time) const {
        return gates_[gate_id_at(qubit, time)];
    }

    bool operator==(const Circuit &other) const {
        return n_qubits_ == other.n_qubits_ && n_steps_ == other.n_steps_ && gates_ == other.gates_;
    }

   private:
    std::size_t n_qubits_ = 0;
    std::size_t n_steps_ = 0;
    std::vector<Gate> gates_;
    std::vector<std::uint32_t> grid_;
};

namespace detail {

struct LineCursor {
    std::string_view text;
    std::size_t line;
    std::size_t pos = 0;

    void skip_space() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\r')) {
            ++pos;
        }
    }
    bool at_end() const {
        return pos >= text.size();
    }
    std::size_t column() const {
        return pos + 1;
    }
    [[noreturn]] void fail(const std::string &msg) const {
        throw ParseError(msg, line, column());
    }
    [[noreturn]] void fail_at(const std::string &msg, std::size_t col) const {
        throw ParseError(msg, line, col);
    }
    std::string_view word() {
        const std::size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
               text[pos] != ';' && text[pos] != ':') {
            ++pos;
        }
        return text.substr(start, pos - start);
    }
};

inline bool parse_uint(std::string_view s, std::uint64_t &out) {
    if (s.empty() || s.size() > 18) {
        return false;
    }
    out = 0;
    for (char ch : s) {
        if (ch < '0' || ch > '9') {
            return false;
        }
        out = out * 10 + static_cast<std::uint64_t>(ch - '0');
    }
    return true;
}

inline bool valid_kind(std::string_view s) {
    if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) {
        return false;
    }
    return std::all_of(s.begin(), s.end(), [](char ch) {
        return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.';
    });
}

}  // namespace detail

/// Parses the line-based circuit format:
///
///     # comment
///     qubits 3
///     step: H 0; CX 1 2
///     step: CCX 0 1 2
///
/// Steps are numbered from 1 in file order. Text after '#' is ignored.
inline Circuit parse_circuit(std::string_view text, std::size_t max_arity = kDefaultMaxArity) {
    std::size_t n_qubits = 0;
    bool have_header = false;
    std::vector<std::vector<GateSpec>> steps;
    std::size_t line_no = 0;
    std::size_t last_line = 1;

    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(start, end - start);
        ++line_no;
        start = end + 1;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        detail::LineCursor cur{line, line_no};
        cur.skip_space();
        if (cur.at_end()) {
            if (end == text.size()) {
                break;
            }
            continue;
        }
        last_line = line_no;

        if (!have_header) {
            const std::size_t kw_col = cur.column();
            if (cur.word() != "qubits") {
                cur.fail_at("expected 'qubits <N>' header", kw_col);
            }
            cur.skip_space();
            const std::size_t num_col = cur.column();
            std::uint64_t n = 0;
            if (!detail::parse_uint(cur.word(), n)) {
                cur.fail_at("expected qubit count", num_col);
            }
            if (n == 0) {
                cur.fail_at("zero qubits declared", num_col);
            }
            if (n > (1u << 24)) {
                cur.fail_at("qubit count too large", num_col);
            }
            cur.skip_space();
            if (!cur.at_end()) {
                cur.fail("unexpected text after qubit count");
            }
            n_qubits = static_cast<std::size_t>(n);
            have_header = true;
            if (end == text.size()) {
                break;
            }
            continue;
        }

        const std::size_t kw_col = cur.column();
        if (cur.word() != "step") {
            cur.fail_at("expected 'step:'", kw_col);
        }
        cur.skip_space();
        if (cur.at_end() || cur.text[cur.pos] != ':') {
            cur.fail("expected ':' after 'step'");
        }
        ++cur.pos;

        std::vector<GateSpec> step;
        std::vector<bool> used(n_qubits, false);
        while (true) {
            cur.skip_space();
            if (cur.at_end()) {
                if (!step.empty()) {
                    cur.fail("expected gate after ';'");
                }
                break;
            }
            const std::size_t name_col = cur.column();
            std::string_view name = cur.word();
            if (!detail::valid_kind(name)) {
                cur.fail_at("expected gate name", name_col);
            }
            GateSpec g{std::string(name), {}};
            while (true) {
                cur.skip_space();
                if (cur.at_end() || cur.text[cur.pos] == ';') {
                    break;
                }
                const std::size_t q_col = cur.column();
                std::string_view tok = cur.word();
                std::uint64_t q = 0;
                if (!detail::parse_uint(tok, q)) {
                    cur.fail_at("expected qubit index", q_col);
                }
                if (q >= n_qubits) {
                    cur.fail_at("qubit index " + std::to_string(q) + " out of range", q_col);
                }
                const auto qi = static_cast<std::uint32_t>(q);
                if (std::find(g.qubits.begin(), g.qubits.end(), qi) != g.qubits.end()) {
                    cur.fail_at("duplicate qubit in gate", q_col);
                }
                if (used[qi]) {
                    cur.fail_at("qubit " + std::to_string(q) + " used twice in one step", q_col);
                }
                g.qubits.push_back(qi);
                if (g.qubits.size() > max_arity) {
                    cur.fail_at("gate arity exceeds maximum " + std::to_string(max_arity), q_col);
                }
            }
            if (g.qubits.empty()) {
                cur.fail("gate '" + g.kind + "' needs at least one qubit");
            }
            for (auto q : g.qubits) {
                used[q] = true;
            }
            step.push_back(std::move(g));
            if (cur.at_end()) {
                break;
            }
            ++cur.pos;  // ';'
            cur.skip_space();
            if (cur.at_end()) {
                cur.fail("expected gate after ';'");
            }
        }
        steps.push_back(std::move(step));
        if (end == text.size()) {
            break;
        }
    }
    if (!have_header) {
        throw ParseError("missing 'qubits <N>' header", line_no == 0 ? 1 : line_no, 1);
    }
    if (steps.empty()) {
        throw ParseError("circuit has no steps", last_line, 1);
    }
    return Circuit::from_steps(n_qubits, steps, max_arity);
}

/// Writes a circuit back to the text format, identity gates included, so
/// that parsing the result reproduces an equal circuit.
inline std::string serialize_circuit(const Circuit &c) {
    std::ostringstream out;
    out << "qubits " << c.n_qubits() << "\n";
    std::size_t t = 0;
    for (const auto &g : c.gates()) {
        if (g.time != t) {
            if (t != 0) {
                out << "\n";
            }
            out << "step: ";
            t = g.time;
        } else {
            out << "; ";
        }
        out << g.kind;
        for (auto q : g.qubits) {
            out << ' ' << q;
        }
    }
    out << "\n";
    return out.str();
}

/// 1-D nearest-neighbour family: each step tiles the qubit line with
/// single-qubit gates and two-qubit gates on adjacent pairs (q, q+1).
inline Circuit generate_lattice_circuit(std::size_t n_qubits, std::size_t n_steps, std::uint64_t seed) {
    if (n_qubits < 2) {
        throw std::invalid_argument("lattice circuit needs at least 2 qubits");
    }
    if (n_steps < 1) {
        throw std::invalid_argument("lattice circuit needs at least 1 step");
    }
    static const char *const kSingle[] = {"H", "S", "T"};
    std::vector<std::vector<GateSpec>> steps(n_steps);
    for (std::size_t s = 0; s < n_steps; ++s) {
        StreamRng rng(substream(seed, s));
        std::uint32_t q = 0;
        while (q < n_qubits) {
            if (q + 1 < n_qubits && rng.uniform() < 0.5) {
                steps[s].push_back(GateSpec{"CZ", {q, q + 1}});
                q += 2;
            } else {
                steps[s].push_back(GateSpec{kSingle[rng.below(3)], {q}});
                q += 1;
            }
        }
    }
    return Circuit::from_steps(n_qubits, steps, 2);
}

/// Unstructured family: each step partitions a random permutation of the
/// qubits into consecutive groups of size 1..max_arity.
inline Circuit generate_random_circuit(
    std::size_t n_qubits, std::size_t n_steps, std::size_t max_arity, std::uint64_t seed) {
    if (n_qubits < 1) {
        throw std::invalid_argument("random circuit needs at least 1 qubit");
    }
    if (n_steps < 1) {
        throw std::invalid_argument("random circuit needs at least 1 step");
    }
    if (max_arity < 1 || max_arity > n_qubits) {
        throw std::invalid_argument("max_arity must lie in [1, n_qubits]");
    }
    static const char *const kSingle[] = {"H", "S", "T", "X"};
    std::vector<std::vector<GateSpec>> steps(n_steps);
    for (std::size_t s = 0; s < n_steps; ++s) {
        StreamRng rng(substream(seed, s));
        std::vector<std::uint32_t> perm(n_qubits);
        for (std::uint32_t q = 0; q < n_qubits; ++q) {
            perm[q] = q;
        }
        for (std::size_t i = n_qubits; i > 1; --i) {
            std::swap(perm[i - 1], perm[rng.below(i)]);
        }
        std::size_t i = 0;
        while (i < n_qubits) {
            const std::size_t room = std::min(max_arity, n_qubits - i);
            const std::size_t arity = 1 + rng.below(room);
            GateSpec g;
            g.qubits.assign(perm.begin() + static_cast<std::ptrdiff_t>(i),
                            perm.begin() + static_cast<std::ptrdiff_t>(i + arity));
            switch (arity) {
                case 1:
                    g.kind = kSingle[rng.below(4)];
                    break;
                case 2:
                    g.kind = "CX";
                    break;
                case 3:
                    g.kind = "CCX";
                    break;
                default:
                    g.kind = "U" + std::to_string(arity);
            }
            steps[s].push_back(std::move(g));
            i += arity;
        }
    }
    return Circuit::from_steps(n_qubits, steps, std::max(max_arity, kDefaultMaxArity));
}

}  // namespace ftperc
