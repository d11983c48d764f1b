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
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbqc/network.hpp"

namespace fbqc {

struct UnsupportedNetwork : std::invalid_argument {
    explicit UnsupportedNetwork(const std::string &what) : std::invalid_argument(what) {
    }
};

enum class SiteKind : std::uint8_t { Face, Edge };

struct SyndromeEdge {
    std::uint32_t measurement;  ///< index into network_groups(net).second
    std::uint32_t u;
    std::uint32_t v;
    std::array<std::int8_t, 3> disp;  ///< cell displacement from u to v
    SiteKind site;                    ///< where the fusion sits
    std::uint8_t outcome_slot;        ///< which outcome of the fusion (0 or 1)
};

/// Multigraph of checks (vertices) and fusion outcomes (edges).
struct SyndromeGraph {
    int L = 0;
    bool primal = true;
    std::vector<Coord> anchors;  ///< cell (primal) or vertex (dual) coordinates
    /// Outcome indices of each check.
    std::vector<std::vector<std::uint32_t>> check_measurements;
    std::vector<SyndromeEdge> edges;
    /// Edges crossing the plane between layers L-1 and 0, per axis.
    std::array<std::vector<std::uint32_t>, 3> logical_cuts;
    /// CSR adjacency: for vertex v, entries [adj_start[v], adj_start[v+1]).
    std::vector<std::uint32_t> adj_start;
    std::vector<std::uint32_t> adj_edge;
    std::vector<std::uint32_t> adj_nbr;

    std::size_t num_vertices() const {
        return anchors.size();
    }
    std::size_t num_edges() const {
        return edges.size();
    }
    std::size_t degree(std::size_t v) const {
        return adj_start[v + 1] - adj_start[v];
    }

    void build_adjacency() {
        std::size_t nv = num_vertices();
        adj_start.assign(nv + 1, 0);
        for (const auto &e : edges) {
            adj_start[e.u + 1]++;
            adj_start[e.v + 1]++;
        }
        std::partial_sum(adj_start.begin(), adj_start.end(), adj_start.begin());
        adj_edge.assign(adj_start.back(), 0);
        adj_nbr.assign(adj_start.back(), 0);
        std::vector<std::uint32_t> fill(adj_start.begin(), adj_start.end() - 1);
        for (std::uint32_t k = 0; k < edges.size(); k++) {
            const auto &e = edges[k];
            adj_edge[fill[e.u]] = k;
            adj_nbr[fill[e.u]++] = e.v;
            adj_edge[fill[e.v]] = k;
            adj_nbr[fill[e.v]++] = e.u;
        }
    }

    /// Plain edge list: "edge <id> <u> <v> <measurement> <site> <slot> <dx> <dy> <dz>".
    void write_edge_list(std::ostream &out) const {
        out << "# syndrome-graph v1 " << (primal ? "primal" : "dual") << " L=" << L << " vertices=" << num_vertices()
            << " edges=" << num_edges() << "\n";
        for (std::size_t v = 0; v < num_vertices(); v++) {
            out << "vertex " << v << " " << anchors[v][0] << " " << anchors[v][1] << " " << anchors[v][2] << "\n";
        }
        for (std::size_t k = 0; k < edges.size(); k++) {
            const auto &e = edges[k];
            out << "edge " << k << " " << e.u << " " << e.v << " " << e.measurement << " "
                << (e.site == SiteKind::Face ? "face" : "edge") << " " << int(e.outcome_slot) << " " << int(e.disp[0])
                << " " << int(e.disp[1]) << " " << int(e.disp[2]) << "\n";
        }
    }
};

namespace detail {

struct CheckTerm {
    std::uint32_t measurement;
    Coord offset;  ///< site position relative to the check centre (quarter units)
    SiteKind site;
    std::uint8_t slot;
};

inline SiteKind site_kind(const Coord &c) {
    int odd = ((c[0] & 2) ? 1 : 0) + ((c[1] & 2) ? 1 : 0) + ((c[2] & 2) ? 1 : 0);
    return odd == 2 ? SiteKind::Face : SiteKind::Edge;
}

inline SyndromeGraph assemble_graph(int L, bool primal, std::vector<Coord> anchors,
                                    const std::vector<std::vector<CheckTerm>> &checks, std::size_t n_outcomes) {
    SyndromeGraph g;
    g.L = L;
    g.primal = primal;
    g.anchors = std::move(anchors);
    std::vector<std::int64_t> first(n_outcomes, -1);
    std::vector<Coord> first_offset(n_outcomes);
    std::vector<SyndromeEdge> by_meas(n_outcomes);
    std::vector<bool> done(n_outcomes, false);
    for (std::uint32_t v = 0; v < checks.size(); v++) {
        std::vector<std::uint32_t> ms;
        for (const auto &t : checks[v]) {
            ms.push_back(t.measurement);
            if (done[t.measurement]) {
                throw std::logic_error("outcome in more than two checks");
            }
            if (first[t.measurement] < 0) {
                first[t.measurement] = v;
                first_offset[t.measurement] = t.offset;
                continue;
            }
            SyndromeEdge e{};
            e.measurement = t.measurement;
            e.u = static_cast<std::uint32_t>(first[t.measurement]);
            e.v = v;
            for (int a = 0; a < 3; a++) {
                // The site is the midpoint of the two check centres.
                e.disp[a] = static_cast<std::int8_t>(first_offset[t.measurement][a] / 2);
            }
            e.site = t.site;
            e.outcome_slot = t.slot;
            by_meas[t.measurement] = e;
            done[t.measurement] = true;
        }
        std::sort(ms.begin(), ms.end());
        g.check_measurements.push_back(std::move(ms));
    }
    for (std::size_t m = 0; m < n_outcomes; m++) {
        if (done[m]) {
            g.edges.push_back(by_meas[m]);
        } else if (first[m] >= 0) {
            throw std::logic_error("outcome in only one check of a periodic lattice");
        }
    }
    for (std::uint32_t k = 0; k < g.edges.size(); k++) {
        const auto &e = g.edges[k];
        const Coord &a = g.anchors[e.u];
        for (int d = 0; d < 3; d++) {
            int t = a[d] + e.disp[d];
            if (t < 0 || t >= L) {
                g.logical_cuts[d].push_back(k);
            }
        }
    }
    g.build_adjacency();
    return g;
}

}  // namespace detail

/// Primal and dual syndrome graphs of a periodic 4-star or 6-ring lattice,
/// built from the per-cell and per-vertex check formulas.
inline std::pair<SyndromeGraph, SyndromeGraph> derive_syndrome_graphs(const FusionNetwork &net) {
    if (!net.lattice || !net.lattice->periodic) {
        throw UnsupportedNetwork("syndrome graphs need a periodic 4-star or 6-ring lattice");
    }
    const int L = net.lattice->L;
    const LatticeKind kind = net.lattice->kind;
    detail::LatticeIndex idx{L, true};

    // Fusions by site, and (for the 4-star) by resource-state position.
    std::map<Coord, std::uint32_t> fusion_at;
    std::map<Coord, std::vector<std::uint32_t>> fusions_of_state;
    std::vector<std::uint32_t> state_of_qubit(net.n_qubits);
    for (const auto &rs : net.resource_states) {
        for (auto q : rs.qubits) {
            state_of_qubit[q] = static_cast<std::uint32_t>(rs.id);
        }
    }
    for (const auto &f : net.fusions) {
        fusion_at[*f.position] = static_cast<std::uint32_t>(f.id);
        for (auto q : f.qubits) {
            fusions_of_state[*net.resource_states[state_of_qubit[q]].position].push_back(
                static_cast<std::uint32_t>(f.id));
        }
    }
    auto site_at = [&](const Coord &c) {
        return *idx.norm(c);
    };

    std::vector<Coord> cells;
    for (int z = 0; z < L; z++) {
        for (int y = 0; y < L; y++) {
            for (int x = 0; x < L; x++) {
                cells.push_back({x, y, z});
            }
        }
    }
    std::vector<std::vector<detail::CheckTerm>> primal(cells.size()), dual(cells.size());
    const std::size_t n_out = 2 * net.fusions.size();

    if (kind == LatticeKind::FourStar) {
        // Primal: Z_f X_e outcomes of the fusions on the six faces of a cell.
        // Dual: X_f Z_e outcomes of the fusions on the six edges at a vertex.
        for (std::size_t c = 0; c < cells.size(); c++) {
            for (int pass = 0; pass < 2; pass++) {
                int shift = pass == 0 ? 2 : 0;
                Coord centre{4 * cells[c][0] + shift, 4 * cells[c][1] + shift, 4 * cells[c][2] + shift};
                auto &terms = pass == 0 ? primal[c] : dual[c];
                for (int a = 0; a < 3; a++) {
                    for (int s : {-1, 1}) {
                        Coord off{0, 0, 0};
                        off[a] = 2 * s;
                        Coord site = site_at({centre[0] + off[0], centre[1] + off[1], centre[2] + off[2]});
                        for (auto fid : fusions_of_state.at(site)) {
                            std::uint8_t slot = pass == 0 ? 1 : 0;
                            terms.push_back({static_cast<std::uint32_t>(2 * fid + slot), off,
                                             pass == 0 ? SiteKind::Face : SiteKind::Edge, slot});
                        }
                    }
                }
            }
        }
    } else {
        // Primal: XX on the six faces of a cell and ZZ on its six link edges.
        // Dual (half-translation image): XX on the six edges at a vertex and
        // ZZ on the translated link sites, which are faces.
        const Coord links[6] = {{0, 2, -2}, {0, -2, 2}, {2, 0, -2}, {-2, 0, 2}, {2, -2, 0}, {-2, 2, 0}};
        for (std::size_t c = 0; c < cells.size(); c++) {
            for (int pass = 0; pass < 2; pass++) {
                int shift = pass == 0 ? 2 : 0;
                Coord centre{4 * cells[c][0] + shift, 4 * cells[c][1] + shift, 4 * cells[c][2] + shift};
                auto &terms = pass == 0 ? primal[c] : dual[c];
                auto add = [&](const Coord &off, std::uint8_t slot) {
                    Coord site = site_at({centre[0] + off[0], centre[1] + off[1], centre[2] + off[2]});
                    terms.push_back({2 * fusion_at.at(site) + slot, off, detail::site_kind(site), slot});
                };
                for (int a = 0; a < 3; a++) {
                    for (int s : {-1, 1}) {
                        Coord off{0, 0, 0};
                        off[a] = 2 * s;
                        add(off, 0);
                    }
                }
                for (const auto &off : links) {
                    add(off, 1);
                }
            }
        }
    }
    return {detail::assemble_graph(L, true, cells, primal, n_out),
            detail::assemble_graph(L, false, cells, dual, n_out)};
}

/// Vertex parities and erasure clusters.
struct Syndrome {
    std::vector<std::uint32_t> odd_vertices;
    /// Cluster representative of each vertex (union of erased edges).
    std::vector<std::uint32_t> cluster_of;
};

/// Disjoint-set forest with path halving and union by size.
class UnionFind {
   public:
    explicit UnionFind(std::size_t n = 0) {
        reset(n);
    }
    void reset(std::size_t n) {
        parent_.resize(n);
        size_.assign(n, 1);
        std::iota(parent_.begin(), parent_.end(), 0u);
    }
    std::uint32_t find(std::uint32_t v) {
        while (parent_[v] != v) {
            parent_[v] = parent_[parent_[v]];
            v = parent_[v];
        }
        return v;
    }
    bool unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) {
            return false;
        }
        if (size_[a] < size_[b]) {
            std::swap(a, b);
        }
        parent_[b] = a;
        size_[a] += size_[b];
        return true;
    }

   private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> size_;
};

/// Vertex parity is the XOR of the flip bits of its incident edges. An erased
/// edge carries a guessed outcome, so its flip bit is the (unknown) guess
/// error and still counts; erased edges additionally merge their endpoints
/// into one cluster, whose total parity is all the decoder relies on.
inline Syndrome compute_syndrome(const SyndromeGraph &g, const BitVec &flips, const BitVec &erasures) {
    if (flips.size() != g.num_edges() || erasures.size() != g.num_edges()) {
        throw DimensionMismatch("flip/erasure vectors must have one bit per syndrome-graph edge");
    }
    std::vector<std::uint8_t> parity(g.num_vertices(), 0);
    UnionFind uf(g.num_vertices());
    for (std::size_t k = 0; k < g.num_edges(); k++) {
        const auto &e = g.edges[k];
        if (flips[k]) {
            parity[e.u] ^= 1;
            parity[e.v] ^= 1;
        }
        if (erasures[k]) {
            uf.unite(e.u, e.v);
        }
    }
    Syndrome s;
    s.cluster_of.resize(g.num_vertices());
    for (std::uint32_t v = 0; v < g.num_vertices(); v++) {
        if (parity[v]) {
            s.odd_vertices.push_back(v);
        }
        s.cluster_of[v] = uf.find(v);
    }
    return s;
}

inline bool logical_cut_parity(const SyndromeGraph &g, int direction, const BitVec &edge_bits) {
    if (direction < 0 || direction > 2 || g.logical_cuts[direction].empty()) {
        throw std::invalid_argument("no logical cut stored for direction " + std::to_string(direction));
    }
    if (edge_bits.size() != g.num_edges()) {
        throw DimensionMismatch("edge bit vector has the wrong length");
    }
    bool p = false;
    for (auto k : g.logical_cuts[direction]) {
        p ^= edge_bits[k];
    }
    return p;
}

/// Pauli form of a check: the product of its fusion outcomes' operators.
inline PauliOp check_operator(const SyndromeGraph &g, std::size_t v, const GeneratorSet &f) {
    PauliOp p(f.n);
    for (auto m : g.check_measurements[v]) {
        p = multiply(p, f.gens[m]);
    }
    return p;
}

/// Number of checks that fail to decompose over R (0 means all are in R ∩ F;
/// they are in F by construction).
inline std::size_t count_invalid_checks(const SyndromeGraph &g, const GeneratorSet &r, const GeneratorSet &f) {
    SymplecticSpan span(r);
    std::size_t bad = 0;
    for (std::size_t v = 0; v < g.num_vertices(); v++) {
        PauliOp p = check_operator(g, v, f);
        if (!span.solve(p.symplectic_row())) {
            bad++;
        }
    }
    return bad;
}

/// GF(2) rank of the checks of one or more graphs, as outcome subsets.
inline std::size_t check_rank(const std::vector<const SyndromeGraph *> &graphs, std::size_t n_outcomes) {
    std::vector<BitVec> rows;
    for (const auto *g : graphs) {
        for (const auto &ms : g->check_measurements) {
            BitVec b(n_outcomes);
            for (auto m : ms) {
                b.set(m);
            }
            rows.push_back(std::move(b));
        }
    }
    return rref_rows(std::move(rows)).size();
}

/// True iff shifting every primal anchor by (1,1,1) maps the primal edge
/// multiset (endpoints, displacement) onto the dual one.
inline bool translation_isomorphic(const SyndromeGraph &primal, const SyndromeGraph &dual) {
    if (primal.num_vertices() != dual.num_vertices() || primal.num_edges() != dual.num_edges()) {
        return false;
    }
    const int L = primal.L;
    auto key = [&](const SyndromeGraph &g, const SyndromeEdge &e, int shift) {
        Coord a = g.anchors[e.u], b = g.anchors[e.v];
        for (int d = 0; d < 3; d++) {
            a[d] = detail::wrap(a[d] + shift, L);
            b[d] = detail::wrap(b[d] + shift, L);
        }
        std::array<int, 3> disp{e.disp[0], e.disp[1], e.disp[2]};
        if (b < a) {
            std::swap(a, b);
            for (auto &x : disp) {
                x = -x;
            }
        }
        return std::tuple<Coord, Coord, std::array<int, 3>>(a, b, disp);
    };
    std::vector<std::tuple<Coord, Coord, std::array<int, 3>>> ka, kb;
    for (const auto &e : primal.edges) {
        ka.push_back(key(primal, e, 1));
    }
    for (const auto &e : dual.edges) {
        kb.push_back(key(dual, e, 0));
    }
    std::sort(ka.begin(), ka.end());
    std::sort(kb.begin(), kb.end());
    return ka == kb;
}

}  // namespace fbqc
