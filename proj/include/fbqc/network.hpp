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

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fbqc/pauli.hpp"

namespace fbqc {

struct InvalidSize : std::invalid_argument {
    explicit InvalidSize(const std::string &what) : std::invalid_argument(what) {
    }
};

/// Lattice positions are integer coordinates in units of a quarter cell.
using Coord = std::array<int, 3>;

struct ResourceState {
    std::size_t id = 0;
    std::vector<std::size_t> qubits;
    /// Stabilizers on the state's own qubits (local index k = qubits[k]).
    GeneratorSet stabilizers;
    std::optional<Coord> position;
};

enum class BasisTag { XX_ZZ, XZ_ZX, SingleQubitZ };

inline const char *to_string(BasisTag t) {
    switch (t) {
        case BasisTag::XX_ZZ:
            return "XX_ZZ";
        case BasisTag::XZ_ZX:
            return "XZ_ZX";
        case BasisTag::SingleQubitZ:
            return "Z";
    }
    return "?";
}

struct Fusion {
    std::size_t id = 0;
    std::vector<std::size_t> qubits;
    /// Measured operators on the fused qubits (local index k = qubits[k]).
    std::vector<PauliOp> measurements;
    BasisTag basis_tag = BasisTag::XX_ZZ;
    /// Display names of the outcomes, parallel to `measurements`.
    std::vector<std::string> outcome_names;
    std::optional<Coord> position;
};

enum class LatticeKind { FourStar, SixRing };

inline const char *to_string(LatticeKind k) {
    return k == LatticeKind::FourStar ? "four-star" : "six-ring";
}

struct LatticeMeta {
    int L = 0;
    bool periodic = true;
    LatticeKind kind = LatticeKind::SixRing;
};

struct FusionNetwork {
    std::size_t n_qubits = 0;
    std::vector<ResourceState> resource_states;
    std::vector<Fusion> fusions;
    std::vector<std::size_t> outer_qubits;
    std::optional<LatticeMeta> lattice;

    std::size_t num_outcomes() const {
        std::size_t k = 0;
        for (const auto &f : fusions) {
            k += f.measurements.size();
        }
        return k;
    }
    /// Name of the k-th fusion outcome in network_groups order.
    std::string outcome_name(std::size_t k) const {
        for (const auto &f : fusions) {
            if (k < f.measurements.size()) {
                return k < f.outcome_names.size() ? f.outcome_names[k] : "m" + std::to_string(k);
            }
            k -= f.measurements.size();
        }
        throw std::out_of_range("outcome index");
    }
};

/// Stabilizers X_i prod_{j ~ i} Z_j of a graph state on k qubits.
inline GeneratorSet graph_state(std::size_t k, const std::vector<std::pair<std::size_t, std::size_t>> &edges) {
    std::vector<PauliOp> gens;
    for (std::size_t i = 0; i < k; i++) {
        PauliOp p(k);
        p.x.set(i);
        gens.push_back(std::move(p));
    }
    for (auto [a, b] : edges) {
        gens[a].z.flip(b);
        gens[b].z.flip(a);
    }
    return GeneratorSet(k, std::move(gens));
}

/// Embeds a local operator acting on `qubits` into an n-qubit register.
inline PauliOp embed(const PauliOp &local, const std::vector<std::size_t> &qubits, std::size_t n) {
    PauliOp p(n);
    for (std::size_t k = 0; k < qubits.size(); k++) {
        p.x.set(qubits[k], local.x[k]);
        p.z.set(qubits[k], local.z[k]);
    }
    p.phase = local.phase;
    return p;
}

/// Fills outer_qubits and checks the partition/fusion invariants.
inline void finalize_network(FusionNetwork &net) {
    std::vector<int> owner(net.n_qubits, -1);
    for (const auto &rs : net.resource_states) {
        if (rs.stabilizers.n != rs.qubits.size() || rs.stabilizers.size() != rs.qubits.size()) {
            throw std::invalid_argument("resource state " + std::to_string(rs.id) + " is not a pure stabilizer state");
        }
        std::vector<BitVec> rows;
        for (const auto &a : rs.stabilizers.gens) {
            for (const auto &b : rs.stabilizers.gens) {
                if (!commutes(a, b)) {
                    throw std::invalid_argument("resource state " + std::to_string(rs.id) +
                                                " has anticommuting stabilizers");
                }
            }
            rows.push_back(a.symplectic_row());
        }
        if (rref_rows(std::move(rows)).size() != rs.qubits.size()) {
            throw std::invalid_argument("resource state " + std::to_string(rs.id) +
                                        " has dependent stabilizers");
        }
        for (auto q : rs.qubits) {
            if (q >= net.n_qubits || owner[q] != -1) {
                throw std::invalid_argument("resource states do not partition the qubits");
            }
            owner[q] = static_cast<int>(rs.id);
        }
    }
    for (std::size_t q = 0; q < net.n_qubits; q++) {
        if (owner[q] == -1) {
            throw std::invalid_argument("qubit " + std::to_string(q) + " belongs to no resource state");
        }
    }
    std::vector<bool> fused(net.n_qubits, false);
    for (const auto &f : net.fusions) {
        for (auto q : f.qubits) {
            if (q >= net.n_qubits || fused[q]) {
                throw std::invalid_argument("qubit fused twice or out of range");
            }
            fused[q] = true;
        }
        for (std::size_t a = 0; a < f.measurements.size(); a++) {
            for (std::size_t b = a + 1; b < f.measurements.size(); b++) {
                if (!commutes(f.measurements[a], f.measurements[b])) {
                    throw std::invalid_argument("fusion measurements do not commute");
                }
            }
        }
    }
    net.outer_qubits.clear();
    for (std::size_t q = 0; q < net.n_qubits; q++) {
        if (!fused[q]) {
            net.outer_qubits.push_back(q);
        }
    }
}

/// R and F: embedded resource stabilizers and fusion measurements
/// (F in fusion order, measurements in listed order, with -1 included).
inline std::pair<GeneratorSet, GeneratorSet> network_groups(const FusionNetwork &net) {
    std::vector<PauliOp> r, f;
    for (const auto &rs : net.resource_states) {
        for (const auto &g : rs.stabilizers.gens) {
            r.push_back(embed(g, rs.qubits, net.n_qubits));
        }
    }
    for (const auto &fu : net.fusions) {
        for (const auto &m : fu.measurements) {
            f.push_back(embed(m, fu.qubits, net.n_qubits));
        }
    }
    return {GeneratorSet(net.n_qubits, std::move(r)), GeneratorSet(net.n_qubits, std::move(f), true)};
}

namespace detail {

inline void add_state(FusionNetwork &net, std::vector<std::size_t> qubits, GeneratorSet stabs,
                      std::optional<Coord> pos = std::nullopt) {
    ResourceState rs;
    rs.id = net.resource_states.size();
    rs.qubits = std::move(qubits);
    rs.stabilizers = std::move(stabs);
    rs.position = pos;
    net.resource_states.push_back(std::move(rs));
}

inline void add_fusion(FusionNetwork &net, std::size_t a, std::size_t b, BasisTag tag, std::vector<std::string> names,
                       std::optional<Coord> pos = std::nullopt) {
    Fusion f;
    f.id = net.fusions.size();
    f.qubits = {a, b};
    f.basis_tag = tag;
    if (tag == BasisTag::XX_ZZ) {
        f.measurements = {PauliOp::parse("XX"), PauliOp::parse("ZZ")};
    } else {
        f.measurements = {PauliOp::parse("XZ"), PauliOp::parse("ZX")};
    }
    f.outcome_names = std::move(names);
    f.position = pos;
    net.fusions.push_back(std::move(f));
}

inline std::string pair_label(const char *kind, std::size_t a, std::size_t b) {
    return std::string("m^") + kind + "_{" + std::to_string(a) + "," + std::to_string(b) + "}";
}

}  // namespace detail

/// Two 3-line states and a 2-qubit state fused by <XZ, ZX> into a 4-line
/// graph state on qubits 1, 2, 7, 8 (qubit k is index k-1).
inline FusionNetwork build_four_line_example() {
    FusionNetwork net;
    net.n_qubits = 8;
    auto line3 = graph_state(3, {{0, 1}, {1, 2}});
    detail::add_state(net, {0, 1, 2}, line3);
    detail::add_state(net, {3, 4}, graph_state(2, {{0, 1}}));
    detail::add_state(net, {5, 6, 7}, line3);
    detail::add_fusion(net, 2, 3, BasisTag::XZ_ZX, {"m1", "m2"});
    detail::add_fusion(net, 4, 5, BasisTag::XZ_ZX, {"m3", "m4"});
    finalize_network(net);
    return net;
}

/// Two 4-qubit star states (centred on qubits 4 and 13) joined by Bell-pair
/// chains through <XX, ZZ> fusions; the output is a Bell pair on qubits 1, 16.
inline FusionNetwork build_bell_ftfn_example() {
    FusionNetwork net;
    net.n_qubits = 16;
    auto star = [](std::size_t centre) {
        std::vector<std::pair<std::size_t, std::size_t>> e;
        for (std::size_t k = 0; k < 4; k++) {
            if (k != centre) {
                e.push_back({centre, k});
            }
        }
        return graph_state(4, e);
    };
    auto bell = graph_state(2, {{0, 1}});
    detail::add_state(net, {0, 1, 2, 3}, star(3));
    detail::add_state(net, {4, 5}, bell);
    detail::add_state(net, {6, 7}, bell);
    detail::add_state(net, {8, 9}, bell);
    detail::add_state(net, {10, 11}, bell);
    detail::add_state(net, {12, 13, 14, 15}, star(0));
    // Fusion order fixes the echelon form of the checks (1-based labels).
    const std::pair<std::size_t, std::size_t> pairs[] = {{2, 5}, {6, 9}, {10, 14}, {3, 7},
                                                         {8, 11}, {12, 15}, {4, 13}};
    for (auto [a, b] : pairs) {
        detail::add_fusion(net, a - 1, b - 1, BasisTag::XX_ZZ,
                           {detail::pair_label("XX", a, b), detail::pair_label("ZZ", a, b)});
    }
    finalize_network(net);
    return net;
}

namespace detail {

inline void check_lattice_size(int L, bool periodic) {
    if (L < 1 || (periodic && L < 2)) {
        throw InvalidSize("lattice size must be >= 2 for periodic builds (>= 1 otherwise), got " +
                          std::to_string(L));
    }
}

inline int wrap(int v, int m) {
    v %= m;
    return v < 0 ? v + m : v;
}

struct LatticeIndex {
    int L;
    bool periodic;
    /// Cell index lexicographic in (z, y, x).
    std::size_t cell(int x, int y, int z) const {
        return (static_cast<std::size_t>(z) * L + y) * L + x;
    }
    /// Normalizes a quarter-unit coordinate; nullopt if outside a non-periodic box.
    std::optional<Coord> norm(Coord c) const {
        for (auto &v : c) {
            if (periodic) {
                v = wrap(v, 4 * L);
            } else if (v < 0 || v >= 4 * L) {
                return std::nullopt;
            }
        }
        return c;
    }
};

}  // namespace detail

/// 4-star network: per cell three edge states at (1/2,0,0), (0,1/2,0),
/// (0,0,1/2) and three face states at (1/2,1/2,0), (1/2,0,1/2), (0,1/2,1/2),
/// all 4-GHZ states. Every face state fuses with its four boundary edges;
/// each fusion is on (face qubit, edge qubit) and measures <XZ, ZX>.
inline FusionNetwork build_4star(int L, bool periodic = true) {
    detail::check_lattice_size(L, periodic);
    detail::LatticeIndex idx{L, periodic};
    FusionNetwork net;
    net.lattice = LatticeMeta{L, periodic, LatticeKind::FourStar};
    GeneratorSet ghz(4, {PauliOp::parse("ZZZZ"), PauliOp::parse("XX__"), PauliOp::parse("_XX_"),
                         PauliOp::parse("__XX")});
    const Coord slot_offsets[6] = {{2, 0, 0}, {0, 2, 0}, {0, 0, 2}, {2, 2, 0}, {2, 0, 2}, {0, 2, 2}};
    std::size_t n_cells = static_cast<std::size_t>(L) * L * L;
    net.n_qubits = n_cells * 24;
    std::map<Coord, std::size_t> state_at;
    for (int z = 0; z < L; z++) {
        for (int y = 0; y < L; y++) {
            for (int x = 0; x < L; x++) {
                for (int s = 0; s < 6; s++) {
                    Coord c{4 * x + slot_offsets[s][0], 4 * y + slot_offsets[s][1], 4 * z + slot_offsets[s][2]};
                    std::size_t base = (idx.cell(x, y, z) * 6 + s) * 4;
                    state_at[c] = net.resource_states.size();
                    detail::add_state(net, {base, base + 1, base + 2, base + 3}, ghz, c);
                }
            }
        }
    }
    // Local qubit order of a state with long axis a (edge) or normal a (face):
    // neighbours at -b, +b, -c, +c where b < c are the two other axes.
    auto local_slot = [](int a, int axis, int sign) {
        int b = (a + 1) % 3, c = (a + 2) % 3;
        if (b > c) {
            std::swap(b, c);
        }
        return (axis == b ? 0 : 2) + (sign > 0 ? 1 : 0);
    };
    for (const auto &rs : std::vector<ResourceState>(net.resource_states)) {
        const Coord &fc = *rs.position;
        int odd = (fc[0] & 2 ? 1 : 0) + (fc[1] & 2 ? 1 : 0) + (fc[2] & 2 ? 1 : 0);
        if (odd != 2) {
            continue;  // edge state
        }
        int normal = !(fc[0] & 2) ? 0 : (!(fc[1] & 2) ? 1 : 2);
        for (int axis = 0; axis < 3; axis++) {
            if (axis == normal) {
                continue;
            }
            for (int sign : {-1, 1}) {
                Coord ec = fc;
                ec[axis] += 2 * sign;
                auto en = idx.norm(ec);
                if (!en) {
                    continue;
                }
                const ResourceState &edge = net.resource_states[state_at.at(*en)];
                int edge_axis = ((*en)[0] & 2) ? 0 : (((*en)[1] & 2) ? 1 : 2);
                // Seen from the edge, the face lies along `axis` with the opposite sign.
                std::size_t fq = rs.qubits[local_slot(normal, axis, sign)];
                std::size_t eq = edge.qubits[local_slot(edge_axis, axis, -sign)];
                Coord pos = fc;
                pos[axis] += sign;
                detail::add_fusion(net, fq, eq, BasisTag::XZ_ZX, {"M1", "M2"}, idx.norm(pos));
            }
        }
    }
    finalize_network(net);
    return net;
}


/// Quarter-unit offsets of the six ring qubits from a ring-state centre.
inline constexpr Coord kSixRingOffsets[6] = {{2, 0, 0}, {2, 2, 0}, {0, 2, 0}, {0, 2, 2}, {0, 0, 2}, {2, 0, 2}};

/// 6-ring network: ring states centred at (0,0,0) and (1/2,1/2,1/2) of every
/// cell; two qubits are fused with <XX, ZZ> iff they sit on the same face
/// centre or edge midpoint.
inline FusionNetwork build_6ring(int L, bool periodic = true) {
    detail::check_lattice_size(L, periodic);
    detail::LatticeIndex idx{L, periodic};
    FusionNetwork net;
    net.lattice = LatticeMeta{L, periodic, LatticeKind::SixRing};
    GeneratorSet ring = graph_state(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}});
    std::size_t n_cells = static_cast<std::size_t>(L) * L * L;
    net.n_qubits = n_cells * 12;
    std::map<Coord, std::size_t> second_qubit_at;
    for (int z = 0; z < L; z++) {
        for (int y = 0; y < L; y++) {
            for (int x = 0; x < L; x++) {
                for (int s = 0; s < 2; s++) {
                    Coord centre{4 * x + 2 * s, 4 * y + 2 * s, 4 * z + 2 * s};
                    std::size_t base = (idx.cell(x, y, z) * 2 + s) * 6;
                    std::vector<std::size_t> qs;
                    for (std::size_t k = 0; k < 6; k++) {
                        qs.push_back(base + k);
                        if (s == 1) {
                            Coord c = centre;
                            for (int a = 0; a < 3; a++) {
                                c[a] += kSixRingOffsets[k][a];
                            }
                            if (auto cn = idx.norm(c)) {
                                second_qubit_at[*cn] = base + k;
                            }
                        }
                    }
                    detail::add_state(net, std::move(qs), ring, centre);
                }
            }
        }
    }
    // Every site holds one qubit of a (0,0,0)-type ring and one of a
    // (1/2,1/2,1/2)-type ring; fusions are listed by the former.
    for (const auto &rs : std::vector<ResourceState>(net.resource_states)) {
        const Coord &centre = *rs.position;
        if (centre[0] % 4 != 0) {
            continue;
        }
        for (std::size_t k = 0; k < 6; k++) {
            Coord c = centre;
            for (int a = 0; a < 3; a++) {
                c[a] += kSixRingOffsets[k][a];
            }
            auto cn = idx.norm(c);
            if (!cn) {
                continue;
            }
            auto it = second_qubit_at.find(*cn);
            if (it == second_qubit_at.end()) {
                continue;
            }
            std::size_t a = rs.qubits[k];
            detail::add_fusion(net, a, it->second, BasisTag::XX_ZZ, {"XX", "ZZ"}, cn);
        }
    }
    finalize_network(net);
    return net;
}

}  // namespace fbqc
