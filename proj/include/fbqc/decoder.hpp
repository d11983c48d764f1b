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

#include <cstdint>
#include <deque>
#include <limits>
#include <ostream>
#include <vector>

#include "fbqc/error_models.hpp"
#include "fbqc/matching.hpp"
#include "fbqc/syndrome_graph.hpp"

namespace fbqc {

/// Complete terminal graph with 0/1-weighted shortest-path distances.
struct MatchingProblem {
    std::vector<std::uint32_t> terminals;
    /// Row-major |T| x |T| distances.
    std::vector<std::int64_t> distance;
    /// Row i: incoming edge of each graph vertex on the shortest-path tree
    /// rooted at terminal i (kNone at the root or if unreached).
    std::vector<std::uint32_t> parent_edge;
    std::size_t num_vertices = 0;

    static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

    std::size_t size() const {
        return terminals.size();
    }
    std::int64_t dist(std::size_t i, std::size_t j) const {
        return distance[i * terminals.size() + j];
    }

    /// Edges of the recorded shortest path from terminal i to terminal j.
    std::vector<std::uint32_t> witness_path(const SyndromeGraph &g, std::size_t i, std::size_t j) const {
        std::vector<std::uint32_t> path;
        std::uint32_t v = terminals[j];
        const std::uint32_t *par = &parent_edge[i * num_vertices];
        while (v != terminals[i]) {
            std::uint32_t e = par[v];
            path.push_back(e);
            v = g.edges[e].u == v ? g.edges[e].v : g.edges[e].u;
        }
        return path;
    }

    /// Plain-text dump: terminal list then the distance matrix.
    void write(std::ostream &out) const {
        out << "terminals " << terminals.size() << "\n";
        for (auto t : terminals) {
            out << t << " ";
        }
        out << "\n";
        for (std::size_t i = 0; i < size(); i++) {
            for (std::size_t j = 0; j < size(); j++) {
                out << dist(i, j) << (j + 1 < size() ? " " : "\n");
            }
        }
    }
};

/// All-pairs hop distances of a syndrome graph (no erasures), built once
/// and shared read-only by all decoders of that graph.
struct DistanceTable {
    std::size_t n = 0;
    std::vector<std::uint16_t> d;

    explicit DistanceTable(const SyndromeGraph &g) : n(g.num_vertices()), d(n * n, 0xffff) {
        std::vector<std::uint32_t> queue(n);
        for (std::size_t s = 0; s < n; s++) {
            std::uint16_t *row = &d[s * n];
            std::size_t head = 0, tail = 0;
            row[s] = 0;
            queue[tail++] = static_cast<std::uint32_t>(s);
            while (head < tail) {
                std::uint32_t v = queue[head++];
                for (std::uint32_t a = g.adj_start[v]; a < g.adj_start[v + 1]; a++) {
                    std::uint32_t w = g.adj_nbr[a];
                    if (row[w] == 0xffff) {
                        row[w] = row[v] + 1;
                        queue[tail++] = w;
                    }
                }
            }
        }
    }
    std::uint16_t operator()(std::size_t a, std::size_t b) const {
        return d[a * n + b];
    }
};

/// Reusable per-thread decoding workspace for one syndrome graph.
class Decoder {
   public:
    /// `table` (optional) speeds up samples without erasures.
    explicit Decoder(const SyndromeGraph &g, const DistanceTable *table = nullptr) : g_(g), table_(table) {
    }

    /// Shortest-path distances between terminals with erased edges weighing
    /// 0 and all others 1 (one 0-1 breadth-first search per terminal).
    MatchingProblem build_matching_problem(const std::vector<std::uint32_t> &terminals, const BitVec &erased) {
        MatchingProblem mp;
        mp.terminals = terminals;
        mp.num_vertices = g_.num_vertices();
        std::size_t t = terminals.size();
        mp.distance.assign(t * t, 0);
        mp.parent_edge.assign(t * mp.num_vertices, MatchingProblem::kNone);
        const std::uint32_t unreached = std::numeric_limits<std::uint32_t>::max();
        dist_.assign(mp.num_vertices, unreached);
        for (std::size_t i = 0; i < t; i++) {
            std::fill(dist_.begin(), dist_.end(), unreached);
            std::uint32_t *par = &mp.parent_edge[i * mp.num_vertices];
            deque_.clear();
            dist_[terminals[i]] = 0;
            deque_.push_back(terminals[i]);
            while (!deque_.empty()) {
                std::uint32_t v = deque_.front();
                deque_.pop_front();
                for (std::uint32_t a = g_.adj_start[v]; a < g_.adj_start[v + 1]; a++) {
                    std::uint32_t e = g_.adj_edge[a];
                    std::uint32_t w = g_.adj_nbr[a];
                    std::uint32_t wt = erased[e] ? 0 : 1;
                    if (dist_[v] + wt < dist_[w]) {
                        dist_[w] = dist_[v] + wt;
                        par[w] = e;
                        if (wt == 0) {
                            deque_.push_front(w);
                        } else {
                            deque_.push_back(w);
                        }
                    }
                }
            }
            for (std::size_t j = 0; j < t; j++) {
                mp.distance[i * t + j] = dist_[terminals[j]];
            }
        }
        return mp;
    }

    /// Correction (edge set) whose boundary is the odd set of `flips`.
    ///
    /// Odd vertices inside one erased cluster are paired for free along a
    /// spanning tree of the cluster; what remains (one vertex per odd
    /// cluster) is matched exactly on the 0/1 metric.
    BitVec correction(const BitVec &flips, const BitVec &erased) {
        const std::size_t nv = g_.num_vertices();
        parity_.assign(nv, 0);
        for (std::size_t k : flips.ones()) {
            parity_[g_.edges[k].u] ^= 1;
            parity_[g_.edges[k].v] ^= 1;
        }
        BitVec corr(g_.num_edges());

        // Spanning forest of the erased subgraph, in BFS order.
        tree_parent_.assign(nv, MatchingProblem::kNone);
        seen_.assign(nv, 0);
        order_.clear();
        for (std::uint32_t s = 0; s < nv; s++) {
            if (seen_[s]) {
                continue;
            }
            seen_[s] = 1;
            std::size_t head = order_.size();
            order_.push_back(s);
            while (head < order_.size()) {
                std::uint32_t v = order_[head++];
                for (std::uint32_t a = g_.adj_start[v]; a < g_.adj_start[v + 1]; a++) {
                    std::uint32_t e = g_.adj_edge[a];
                    std::uint32_t w = g_.adj_nbr[a];
                    if (erased[e] && !seen_[w]) {
                        seen_[w] = 1;
                        tree_parent_[w] = e;
                        order_.push_back(w);
                    }
                }
            }
        }
        // Peel leaves towards the roots.
        for (std::size_t k = order_.size(); k-- > 0;) {
            std::uint32_t v = order_[k];
            std::uint32_t e = tree_parent_[v];
            if (e != MatchingProblem::kNone && parity_[v]) {
                corr.flip(e);
                parity_[g_.edges[e].u] ^= 1;
                parity_[g_.edges[e].v] ^= 1;
            }
        }
        terminals_.clear();
        for (std::uint32_t v = 0; v < nv; v++) {
            if (parity_[v]) {
                terminals_.push_back(v);
            }
        }
        if (terminals_.empty()) {
            return corr;
        }
        if (table_ != nullptr && !erased.any()) {
            // Plain hop metric: distances from the table, paths by descent.
            std::size_t t = terminals_.size();
            auto dist = [&](int i, int j) { return std::int64_t{(*table_)(terminals_[i], terminals_[j])}; };
            auto mate = min_weight_perfect_matching_sparse(static_cast<int>(t), dist);
            for (std::size_t i = 0; i < t; i++) {
                if (static_cast<std::size_t>(mate[i]) > i) {
                    descend(terminals_[i], terminals_[mate[i]], corr);
                }
            }
            return corr;
        }
        MatchingProblem mp = build_matching_problem(terminals_, erased);
        auto mate = min_weight_perfect_matching(static_cast<int>(mp.size()), mp.distance);
        for (std::size_t i = 0; i < mp.size(); i++) {
            if (static_cast<std::size_t>(mate[i]) > i) {
                for (auto e : mp.witness_path(g_, i, mate[i])) {
                    corr.flip(e);
                }
            }
        }
        return corr;
    }

    /// Bit d set iff the residual error winds nontrivially along axis d.
    unsigned decode(const TrialSample &sample) {
        BitVec residual = correction(sample.flipped, sample.erased);
        residual ^= sample.flipped;
        unsigned flags = 0;
        for (int d = 0; d < 3; d++) {
            if (!g_.logical_cuts[d].empty() && logical_cut_parity(g_, d, residual)) {
                flags |= 1u << d;
            }
        }
        return flags;
    }

    const SyndromeGraph &graph() const {
        return g_;
    }

   private:
    /// Flips a shortest path from b to a, stepping to the first neighbour
    /// (in adjacency order) that is one hop closer to a.
    void descend(std::uint32_t a, std::uint32_t b, BitVec &corr) const {
        std::uint32_t v = b;
        while (v != a) {
            std::uint16_t dv = (*table_)(a, v);
            for (std::uint32_t k = g_.adj_start[v]; k < g_.adj_start[v + 1]; k++) {
                std::uint32_t w = g_.adj_nbr[k];
                if ((*table_)(a, w) + 1 == dv) {
                    corr.flip(g_.adj_edge[k]);
                    v = w;
                    break;
                }
            }
        }
    }

    const SyndromeGraph &g_;
    const DistanceTable *table_ = nullptr;
    std::vector<std::uint8_t> parity_, seen_;
    std::vector<std::uint32_t> tree_parent_, order_, terminals_, dist_;
    std::deque<std::uint32_t> deque_;
};

/// Logical failure flags of one graph for one sample.
inline unsigned decode_trial(const SyndromeGraph &graph, const TrialSample &sample) {
    Decoder d(graph);
    return d.decode(sample);
}

/// Primal and dual decoded independently; failure if any of the six flags is set.
struct NetworkDecoder {
    explicit NetworkDecoder(const std::pair<SyndromeGraph, SyndromeGraph> &graphs,
                            const std::pair<DistanceTable, DistanceTable> *tables = nullptr)
        : primal(graphs.first, tables ? &tables->first : nullptr), dual(graphs.second, tables ? &tables->second : nullptr) {
    }
    Decoder primal;
    Decoder dual;
    TrialSample primal_sample;
    TrialSample dual_sample;

    /// Trial `trial` of a campaign seeded with `seed`; each graph draws from its own stream.
    bool run_trial(const HardwareAgnosticParams &params, std::uint64_t seed, std::uint64_t trial) {
        CounterRng rp(seed, 2 * trial);
        CounterRng rd(seed, 2 * trial + 1);
        sample_hardware_agnostic(params, primal.graph().num_edges(), rp, primal_sample);
        sample_hardware_agnostic(params, dual.graph().num_edges(), rd, dual_sample);
        return (primal.decode(primal_sample) | dual.decode(dual_sample)) != 0;
    }
};

}  // namespace fbqc
