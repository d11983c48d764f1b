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

#include <bit>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fbqc/bitvec.hpp"

namespace fbqc {

struct DimensionMismatch : std::invalid_argument {
    explicit DimensionMismatch(const std::string &what) : std::invalid_argument(what) {
    }
};

/// A Pauli operator i^phase * (tensor of I/X/Y/Z letters).
///
/// Letter Y is stored as x=z=1, so Hermitian operators have an even phase
/// and the phase encodes the overall sign (0 -> +1, 2 -> -1).
struct PauliOp {
    BitVec x;
    BitVec z;
    std::uint8_t phase = 0;

    PauliOp() = default;
    explicit PauliOp(std::size_t n) : x(n), z(n) {
    }

    std::size_t num_qubits() const {
        return x.size();
    }

    /// Parses dense text like "+XZI_Y", "-iXX" or "XX" ('_' and 'I' are identity).
    static PauliOp parse(std::string_view text) {
        std::uint8_t ph = 0;
        std::size_t k = 0;
        if (k < text.size() && (text[k] == '+' || text[k] == '-')) {
            ph = text[k] == '-' ? 2 : 0;
            k++;
        }
        if (k < text.size() && text[k] == 'i') {
            ph = (ph + 1) & 3;
            k++;
        }
        PauliOp p(text.size() - k);
        for (std::size_t q = 0; k < text.size(); k++, q++) {
            switch (text[k]) {
                case 'I':
                case '_':
                    break;
                case 'X':
                    p.x.set(q);
                    break;
                case 'Y':
                    p.x.set(q);
                    p.z.set(q);
                    break;
                case 'Z':
                    p.z.set(q);
                    break;
                default:
                    throw std::invalid_argument("bad Pauli character in '" + std::string(text) + "'");
            }
        }
        p.phase = ph;
        return p;
    }

    /// Builds an operator from (qubit, letter) pairs.
    static PauliOp sparse(std::size_t n, std::initializer_list<std::pair<std::size_t, char>> terms) {
        PauliOp p(n);
        for (auto [q, c] : terms) {
            p.set_letter(q, c);
        }
        return p;
    }

    void set_letter(std::size_t q, char c) {
        x.set(q, c == 'X' || c == 'Y');
        z.set(q, c == 'Z' || c == 'Y');
    }

    char letter(std::size_t q) const {
        return "IXZY"[x[q] | (z[q] << 1)];
    }

    bool is_identity() const {
        return !x.any() && !z.any();
    }
    bool is_hermitian() const {
        return (phase & 1) == 0;
    }
    /// +1 or -1 for Hermitian operators.
    int sign() const {
        if (!is_hermitian()) {
            throw std::logic_error("sign() of a non-Hermitian Pauli");
        }
        return phase == 0 ? 1 : -1;
    }
    std::size_t weight() const {
        std::size_t w = 0;
        for (std::size_t k = 0; k < x.num_words(); k++) {
            w += std::popcount(x.data()[k] | z.data()[k]);
        }
        return w;
    }

    /// Row vector in the symplectic layout [x_0..x_{n-1} | z_0..z_{n-1}].
    BitVec symplectic_row() const {
        std::size_t n = num_qubits();
        BitVec r(2 * n);
        for (std::size_t q = 0; q < n; q++) {
            if (x[q]) {
                r.set(q);
            }
            if (z[q]) {
                r.set(n + q);
            }
        }
        return r;
    }

    /// Restriction to a list of qubits (phase is kept on the result).
    PauliOp restricted(const std::vector<std::size_t> &qubits) const {
        PauliOp r(qubits.size());
        for (std::size_t k = 0; k < qubits.size(); k++) {
            r.x.set(k, x[qubits[k]]);
            r.z.set(k, z[qubits[k]]);
        }
        r.phase = phase;
        return r;
    }

    /// Dense form, e.g. "+XZ_Y"; non-Hermitian phases print as "+i"/"-i".
    std::string str(char identity = '_') const {
        static const char *prefixes[] = {"+", "+i", "-", "-i"};
        std::string s = prefixes[phase & 3];
        for (std::size_t q = 0; q < num_qubits(); q++) {
            char c = letter(q);
            s.push_back(c == 'I' ? identity : c);
        }
        return s;
    }

    /// Sparse form without sign, e.g. "Z1X2Z7"; label(q) names each qubit.
    template <typename Label>
    std::string sparse_str(Label label) const {
        std::string s;
        for (std::size_t q = 0; q < num_qubits(); q++) {
            char c = letter(q);
            if (c != 'I') {
                s.push_back(c);
                s += label(q);
            }
        }
        return s.empty() ? "I" : s;
    }
    std::string sparse_str() const {
        return sparse_str([](std::size_t q) { return std::to_string(q + 1); });
    }

    bool operator==(const PauliOp &o) const = default;
};

inline void check_dims(std::size_t a, std::size_t b, const char *where) {
    if (a != b) {
        throw DimensionMismatch(std::string(where) + ": qubit counts differ (" + std::to_string(a) + " vs " +
                                std::to_string(b) + ")");
    }
}

/// Exponent of i produced when multiplying the letter strings of a and b.
inline int product_log_i(const PauliOp &a, const PauliOp &b) {
    int plus = 0;
    int minus = 0;
    for (std::size_t w = 0; w < a.x.num_words(); w++) {
        std::uint64_t x1 = a.x.data()[w], z1 = a.z.data()[w];
        std::uint64_t x2 = b.x.data()[w], z2 = b.z.data()[w];
        std::uint64_t X1 = x1 & ~z1, Y1 = x1 & z1, Z1 = ~x1 & z1;
        std::uint64_t X2 = x2 & ~z2, Y2 = x2 & z2, Z2 = ~x2 & z2;
        // XY = iZ, YZ = iX, ZX = iY and the reversed orders give -i.
        plus += std::popcount((X1 & Y2) | (Y1 & Z2) | (Z1 & X2));
        minus += std::popcount((Y1 & X2) | (Z1 & Y2) | (X1 & Z2));
    }
    return plus - minus;
}

inline PauliOp multiply(const PauliOp &a, const PauliOp &b) {
    check_dims(a.num_qubits(), b.num_qubits(), "multiply");
    PauliOp r = a;
    r.x ^= b.x;
    r.z ^= b.z;
    r.phase = static_cast<std::uint8_t>((a.phase + b.phase + product_log_i(a, b)) & 3);
    return r;
}

inline bool commutes(const PauliOp &a, const PauliOp &b) {
    check_dims(a.num_qubits(), b.num_qubits(), "commutes");
    return a.x.dot(b.z) == a.z.dot(b.x);
}

/// An ordered generating set of a Pauli subgroup.
struct GeneratorSet {
    std::size_t n = 0;
    std::vector<PauliOp> gens;
    bool contains_minus_one = false;

    GeneratorSet() = default;
    explicit GeneratorSet(std::size_t num_qubits) : n(num_qubits) {
    }
    /// Validates dimensions and Hermiticity of every generator.
    GeneratorSet(std::size_t num_qubits, std::vector<PauliOp> generators, bool minus_one = false)
        : n(num_qubits), gens(std::move(generators)), contains_minus_one(minus_one) {
        for (const auto &g : gens) {
            check_dims(g.num_qubits(), n, "GeneratorSet");
            if (!g.is_hermitian()) {
                throw std::invalid_argument("GeneratorSet: non-Hermitian generator " + g.str());
            }
        }
    }
    /// Skips the Hermiticity check (products of anticommuting elements).
    static GeneratorSet unchecked(std::size_t num_qubits, std::vector<PauliOp> generators, bool minus_one) {
        GeneratorSet g(num_qubits);
        g.gens = std::move(generators);
        g.contains_minus_one = minus_one;
        return g;
    }

    std::size_t size() const {
        return gens.size();
    }
    const PauliOp &operator[](std::size_t k) const {
        return gens[k];
    }

    /// One line per generator in the form "+XZ_Y".
    std::string dump() const {
        std::string s;
        for (const auto &g : gens) {
            s += g.str('I');
            s.push_back('\n');
        }
        return s;
    }
    static GeneratorSet parse_dump(std::size_t num_qubits, std::string_view text) {
        std::vector<PauliOp> ops;
        std::istringstream in{std::string(text)};
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty()) {
                ops.push_back(PauliOp::parse(line));
            }
        }
        return GeneratorSet(num_qubits, std::move(ops));
    }

    bool operator==(const GeneratorSet &o) const = default;
};

/// Product of the generators selected by `combo`, taken in index order.
inline PauliOp product_of(const GeneratorSet &g, const BitVec &combo) {
    PauliOp acc(g.n);
    for (std::size_t k : combo.ones()) {
        acc = multiply(acc, g.gens[k]);
    }
    return acc;
}

/// Row space of a generator set over GF(2), ignoring phases, with solutions
/// expressed as subsets of the original generators.
class SymplecticSpan {
   public:
    explicit SymplecticSpan(const GeneratorSet &g) : m_(g.size()) {
        for (std::size_t i = 0; i < g.size(); i++) {
            BitVec combo(m_);
            combo.set(i);
            insert(g.gens[i].symplectic_row(), std::move(combo));
        }
    }
    explicit SymplecticSpan(std::vector<BitVec> rows) : m_(rows.size()) {
        for (std::size_t i = 0; i < rows.size(); i++) {
            BitVec combo(m_);
            combo.set(i);
            insert(std::move(rows[i]), std::move(combo));
        }
    }

    std::size_t rank() const {
        return basis_.size();
    }
    /// Combinations of generators that multiply to the identity (up to phase).
    const std::vector<BitVec> &relations() const {
        return relations_;
    }

    /// Subset of generators whose rows XOR to `row`, if any.
    std::optional<BitVec> solve(BitVec row) const {
        BitVec combo(m_);
        for (std::size_t k = 0; k < basis_.size(); k++) {
            if (row[pivots_[k]]) {
                row ^= basis_[k];
                combo ^= combos_[k];
            }
        }
        if (row.any()) {
            return std::nullopt;
        }
        return combo;
    }

   private:
    void insert(BitVec row, BitVec combo) {
        for (std::size_t k = 0; k < basis_.size(); k++) {
            if (row[pivots_[k]]) {
                row ^= basis_[k];
                combo ^= combos_[k];
            }
        }
        if (!row.any()) {
            relations_.push_back(std::move(combo));
            return;
        }
        pivots_.push_back(row.first_set());
        basis_.push_back(std::move(row));
        combos_.push_back(std::move(combo));
    }

    std::size_t m_;
    std::vector<BitVec> basis_;
    std::vector<BitVec> combos_;
    std::vector<std::size_t> pivots_;
    std::vector<BitVec> relations_;
};

/// Reduced row echelon form of bit rows (lowest set bit is the pivot).
/// Zero rows are dropped; output is sorted by pivot.
inline std::vector<BitVec> rref_rows(std::vector<BitVec> rows) {
    std::vector<BitVec> out;
    if (rows.empty()) {
        return out;
    }
    std::size_t ncols = rows[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < rows.size(); c++) {
        std::size_t p = r;
        while (p < rows.size() && !rows[p][c]) {
            p++;
        }
        if (p == rows.size()) {
            continue;
        }
        std::swap(rows[r], rows[p]);
        for (std::size_t i = 0; i < rows.size(); i++) {
            if (i != r && rows[i][c]) {
                rows[i] ^= rows[r];
            }
        }
        r++;
    }
    rows.resize(r);
    return rows;
}

/// Independent generating set in reduced row echelon form over the
/// symplectic layout [x | z] (X columns first), with phases tracked exactly.
inline GeneratorSet canonicalize(const GeneratorSet &g) {
    std::vector<PauliOp> rows = g.gens;
    std::vector<BitVec> bits;
    bits.reserve(rows.size());
    for (const auto &p : rows) {
        bits.push_back(p.symplectic_row());
    }
    std::size_t ncols = 2 * g.n;
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
    rows.resize(r);
    return GeneratorSet::unchecked(g.n, std::move(rows), g.contains_minus_one);
}

struct Decomposition {
    std::vector<std::size_t> indices;
    /// p = i^residual_phase * (product of the listed generators in index order).
    std::uint8_t residual_phase = 0;
    int residual_sign() const {
        return residual_phase == 0 ? 1 : (residual_phase == 2 ? -1 : 0);
    }
};

inline std::optional<Decomposition> decompose(const GeneratorSet &g, const PauliOp &p) {
    check_dims(g.n, p.num_qubits(), "decompose");
    SymplecticSpan span(g);
    auto combo = span.solve(p.symplectic_row());
    if (!combo) {
        return std::nullopt;
    }
    PauliOp prod = product_of(g, *combo);
    return Decomposition{combo->ones(), static_cast<std::uint8_t>((p.phase - prod.phase) & 3)};
}

/// Subgroup of <r> commuting with every element of f.
///
/// Generators are products of r's generators whose selection vectors form
/// the reduced row echelon basis of the solution space.
inline GeneratorSet centralizer_in(const GeneratorSet &r, const GeneratorSet &f) {
    check_dims(r.n, f.n, "centralizer_in");
    std::vector<BitVec> rows;
    rows.reserve(r.size());
    for (const auto &ri : r.gens) {
        BitVec row(f.size());
        for (std::size_t j = 0; j < f.size(); j++) {
            if (!commutes(ri, f.gens[j])) {
                row.set(j);
            }
        }
        rows.push_back(std::move(row));
    }
    SymplecticSpan span(std::move(rows));
    std::vector<PauliOp> out;
    for (const auto &combo : rref_rows(span.relations())) {
        out.push_back(product_of(r, combo));
    }
    return GeneratorSet::unchecked(r.n, std::move(out), false);
}

/// An element of <r> ∩ <f> together with its expressions in both groups.
struct CheckOperator {
    PauliOp op;     ///< as the product of r's generators (a +1 stabilizer)
    BitVec r_expr;  ///< subset of r's generators
    BitVec f_expr;  ///< subset of f's generators
    int parity = 1; ///< product of the f_expr outcomes on a noiseless run
};

struct Intersection {
    GeneratorSet group;
    std::vector<CheckOperator> elements;
    std::size_t rank() const {
        return elements.size();
    }
};

/// Zassenhaus intersection of the (sign-free) spans of r and f. Generators
/// come back in reduced echelon form over f's generator index.
inline Intersection intersection(const GeneratorSet &r, const GeneratorSet &f) {
    check_dims(r.n, f.n, "intersection");
    std::size_t w = 2 * r.n;
    std::vector<BitVec> rows;
    for (const auto &g : r.gens) {
        BitVec b = g.symplectic_row();
        BitVec row(2 * w);
        for (std::size_t k : b.ones()) {
            row.set(k);
            row.set(w + k);
        }
        rows.push_back(std::move(row));
    }
    for (const auto &g : f.gens) {
        BitVec row(2 * w);
        for (std::size_t k : g.symplectic_row().ones()) {
            row.set(k);
        }
        rows.push_back(std::move(row));
    }
    rows = rref_rows(std::move(rows));

    SymplecticSpan r_span(r);
    SymplecticSpan f_span(f);
    std::vector<BitVec> f_exprs;
    for (const auto &row : rows) {
        if (row.first_set() < w) {
            continue;
        }
        BitVec v(w);
        for (std::size_t k : row.ones()) {
            v.set(k - w);
        }
        auto fe = f_span.solve(v);
        if (!fe) {
            throw std::logic_error("intersection: element not in span of f");
        }
        f_exprs.push_back(std::move(*fe));
    }

    Intersection out;
    out.group = GeneratorSet(r.n);
    for (auto &fe : rref_rows(std::move(f_exprs))) {
        PauliOp pf = product_of(f, fe);
        auto re = r_span.solve(pf.symplectic_row());
        if (!re) {
            throw std::logic_error("intersection: element not in span of r");
        }
        PauliOp pr = product_of(r, *re);
        CheckOperator c{pr, *re, fe, 1};
        // pf = i^d pr and pr has eigenvalue +1, so the outcomes multiply to i^d.
        int d = (pf.phase - pr.phase) & 3;
        c.parity = d == 0 ? 1 : (d == 2 ? -1 : 0);
        out.group.gens.push_back(pr);
        out.elements.push_back(std::move(c));
    }
    return out;
}

enum class ErrorClass { Detectable, UndetectableTrivial, UndetectableNontrivial };

inline const char *to_string(ErrorClass c) {
    switch (c) {
        case ErrorClass::Detectable:
            return "Detectable";
        case ErrorClass::UndetectableTrivial:
            return "UndetectableTrivial";
        case ErrorClass::UndetectableNontrivial:
            return "UndetectableNontrivial";
    }
    return "?";
}

inline ErrorClass classify_error(const PauliOp &e, const GeneratorSet &c, const GeneratorSet &s) {
    check_dims(e.num_qubits(), c.n, "classify_error");
    check_dims(e.num_qubits(), s.n, "classify_error");
    for (const auto &g : c.gens) {
        if (!commutes(e, g)) {
            return ErrorClass::Detectable;
        }
    }
    for (const auto &g : s.gens) {
        if (!commutes(e, g)) {
            return ErrorClass::UndetectableNontrivial;
        }
    }
    return ErrorClass::UndetectableTrivial;
}

/// Bit i is set iff e anticommutes with generator i of f.
inline BitVec flipped_outcomes(const PauliOp &e, const GeneratorSet &f) {
    check_dims(e.num_qubits(), f.n, "flipped_outcomes");
    BitVec out(f.size());
    for (std::size_t i = 0; i < f.size(); i++) {
        if (!commutes(e, f.gens[i])) {
            out.set(i);
        }
    }
    return out;
}

}  // namespace fbqc
