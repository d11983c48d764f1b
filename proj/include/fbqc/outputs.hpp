// Copyright 2026 The fbqc Authors
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
#include <stdexcept>
#include <string>
#include <vector>

#include "fbqc/pauli.hpp"

namespace fbqc {

enum class Outcome : std::uint8_t { Plus, Minus, Erased };
using OutcomeVector = std::vector<Outcome>;

struct ErasedDependency : std::runtime_error {
    explicit ErasedDependency(const std::string &what) : std::runtime_error(what) {
    }
};
struct NotRestrictable : std::runtime_error {
    explicit NotRestrictable(const std::string &what) : std::runtime_error(what) {
    }
};

/// sign * prod_{i in f_expr} m_i * pauli.
struct SymbolicStabilizer {
    PauliOp pauli;
    BitVec f_expr;
    int sign = 1;

    /// Renders e.g. "m2 m4 Z1X2Z7" given names for outcomes and qubits.
    template <typename OutcomeName, typename QubitLabel>
    std::string render(OutcomeName outcome_name, QubitLabel qubit_label) const {
        std::string s = sign < 0 ? "-" : "";
        for (std::size_t k : f_expr.ones()) {
            s += outcome_name(k);
            s.push_back(' ');
        }
        return s + pauli.sparse_str(qubit_label);
    }
};

struct SymbolicOutputs {
    std::vector<std::size_t> outer;
    std::vector<SymbolicStabilizer> outputs;  ///< paulis live on the outer qubits
    std::vector<SymbolicStabilizer> checks;   ///< identity paulis; sign = expected parity
};

namespace detail {

inline int phase_to_sign(int phase) {
    phase &= 3;
    if (phase & 1) {
        throw std::logic_error("non-real sign in outcome expression");
    }
    return phase == 0 ? 1 : -1;
}

/// Reduced echelon form over the expression bits, carrying signs.
inline void rref_signed(std::vector<SymbolicStabilizer> &rows) {
    if (rows.empty()) {
        return;
    }
    std::size_t ncols = rows[0].f_expr.size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < rows.size(); c++) {
        std::size_t p = r;
        while (p < rows.size() && !rows[p].f_expr[c]) {
            p++;
        }
        if (p == rows.size()) {
            continue;
        }
        std::swap(rows[r], rows[p]);
        for (std::size_t i = 0; i < rows.size(); i++) {
            if (i != r && rows[i].f_expr[c]) {
                rows[i].f_expr ^= rows[r].f_expr;
                rows[i].sign *= rows[r].sign;
            }
        }
        r++;
    }
    rows.resize(r);
}

}  // namespace detail

/// Splits S into output stabilizers on `outer` and internal checks, with
/// every sign written as a product of fusion outcomes.
///
/// Output generators are in reduced echelon form over the outer qubits
/// (X columns first) and their outcome expressions are reduced modulo the
/// checks, so the representation is unique.
inline SymbolicOutputs symbolic_output_stabilizers(const GeneratorSet &s, std::vector<std::size_t> outer,
                                                   const GeneratorSet &f) {
    check_dims(s.n, f.n, "output_stabilizers");
    std::sort(outer.begin(), outer.end());
    std::vector<bool> is_outer(s.n, false);
    for (auto q : outer) {
        is_outer.at(q) = true;
    }
    std::vector<std::size_t> inner;
    for (std::size_t q = 0; q < s.n; q++) {
        if (!is_outer[q]) {
            inner.push_back(q);
        }
    }

    // Row-reduce S over the outer columns, multiplying full operators along.
    std::vector<PauliOp> rows = s.gens;
    std::vector<BitVec> bits;
    for (const auto &g : rows) {
        bits.push_back(g.restricted(outer).symplectic_row());
    }
    std::size_t ncols = 2 * outer.size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < rows.size(); c++) {
        std::size_t p = r;
        while (p < rows.size() && !bits[p][c]) {
            p++;
        }
        if (p == rows.size()) {
            continue;
        }
        std::swap(rows[r], rows[p]);
        std::swap(bits[r], bits[p]);
        for (std::size_t i = 0; i < rows.size(); i++) {
            if (i != r && bits[i][c]) {
                rows[i] = multiply(rows[i], rows[r]);
                bits[i] ^= bits[r];
            }
        }
        r++;
    }

    SymplecticSpan f_span(f);
    auto express = [&](const PauliOp &s_in) {
        PauliOp full(s.n);
        for (std::size_t k = 0; k < inner.size(); k++) {
            full.x.set(inner[k], s_in.x[k]);
            full.z.set(inner[k], s_in.z[k]);
        }
        full.phase = s_in.phase;
        auto combo = f_span.solve(full.symplectic_row());
        if (!combo) {
            throw NotRestrictable("inner part " + full.str() + " is not in the fusion group");
        }
        PauliOp prod = product_of(f, *combo);
        return SymbolicStabilizer{PauliOp(), *combo, detail::phase_to_sign(full.phase - prod.phase)};
    };

    SymbolicOutputs out;
    out.outer = outer;
    for (std::size_t i = r; i < rows.size(); i++) {
        out.checks.push_back(express(rows[i].restricted(inner)));
    }
    detail::rref_signed(out.checks);
    for (auto &c : out.checks) {
        c.pauli = PauliOp(outer.size());
    }

    for (std::size_t i = 0; i < r; i++) {
        SymbolicStabilizer st = express(rows[i].restricted(inner));
        st.pauli = rows[i].restricted(outer);
        st.pauli.phase = 0;
        for (const auto &c : out.checks) {
            std::size_t piv = c.f_expr.first_set();
            if (st.f_expr[piv]) {
                st.f_expr ^= c.f_expr;
                st.sign *= c.sign;
            }
        }
        out.outputs.push_back(std::move(st));
    }
    return out;
}

/// Value of sign * prod m_i; throws ErasedDependency if a needed outcome is erased.
inline int evaluate_sign(const SymbolicStabilizer &st, const OutcomeVector &outcomes) {
    if (outcomes.size() != st.f_expr.size()) {
        throw DimensionMismatch("outcome vector length differs from the fusion generator count");
    }
    int v = st.sign;
    for (std::size_t k : st.f_expr.ones()) {
        if (outcomes[k] == Outcome::Erased) {
            throw ErasedDependency("output sign needs erased outcome " + std::to_string(k));
        }
        if (outcomes[k] == Outcome::Minus) {
            v = -v;
        }
    }
    return v;
}

/// S_out on the outer qubits (re-indexed 0..|outer|-1) with outcome signs applied.
inline GeneratorSet output_stabilizers(const GeneratorSet &s, const std::vector<std::size_t> &outer,
                                       const GeneratorSet &f, const OutcomeVector &outcomes) {
    if (outcomes.size() != f.size()) {
        throw DimensionMismatch("outcome vector length differs from the fusion generator count");
    }
    auto sym = symbolic_output_stabilizers(s, outer, f);
    std::vector<PauliOp> ops;
    for (const auto &st : sym.outputs) {
        PauliOp p = st.pauli;
        p.phase = evaluate_sign(st, outcomes) > 0 ? 0 : 2;
        ops.push_back(std::move(p));
    }
    return GeneratorSet(sym.outer.size(), std::move(ops));
}

/// True iff every check parity is met by the (non-erased) outcomes.
inline bool outcomes_consistent(const SymbolicOutputs &sym, const OutcomeVector &outcomes) {
    for (const auto &c : sym.checks) {
        if (evaluate_sign(c, outcomes) != 1) {
            return false;
        }
    }
    return true;
}

}  // namespace fbqc
