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

// Exact maximum-weight matching on general graphs (Edmonds' blossom
// algorithm with primal-dual updates, O(n^3)). Follows the structure of
// Joris van Rantwijk's public-domain reference implementation; weights are
// integers so every dual update is exact.

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fbqc {

struct OddTerminals : std::invalid_argument {
    explicit OddTerminals(const std::string &what) : std::invalid_argument(what) {
    }
};

struct WeightedEdge {
    int i;
    int j;
    std::int64_t w;
};

class BlossomMatcher {
   public:
    /// Returns mate[v] (or -1) of a maximum-weight matching; with
    /// max_cardinality, the maximum-weight one among maximum-cardinality matchings.
    std::vector<int> solve(int nvertex, const std::vector<WeightedEdge> &edges, bool max_cardinality) {
        init(nvertex, edges);
        if (edges.empty()) {
            return std::vector<int>(nvertex, -1);
        }
        for (int stage = 0; stage < nv_; stage++) {
            std::fill(label_.begin(), label_.end(), 0);
            std::fill(bestedge_.begin(), bestedge_.end(), -1);
            for (int b = nv_; b < 2 * nv_; b++) {
                blossombestedges_[b].clear();
                has_bbe_[b] = false;
            }
            std::fill(allowedge_.begin(), allowedge_.end(), false);
            queue_.clear();
            for (int v = 0; v < nv_; v++) {
                if (mate_[v] == -1 && label_[inblossom_[v]] == 0) {
                    assign_label(v, 1, -1);
                }
            }
            bool augmented = false;
            while (true) {
                while (!queue_.empty() && !augmented) {
                    int v = queue_.back();
                    queue_.pop_back();
                    for (int p : neighbend_[v]) {
                        int k = p / 2;
                        int w = endpoint_[p];
                        if (inblossom_[v] == inblossom_[w]) {
                            continue;
                        }
                        std::int64_t kslack = 0;
                        if (!allowedge_[k]) {
                            kslack = slack(k);
                            if (kslack <= 0) {
                                allowedge_[k] = true;
                            }
                        }
                        if (allowedge_[k]) {
                            if (label_[inblossom_[w]] == 0) {
                                assign_label(w, 2, p ^ 1);
                            } else if (label_[inblossom_[w]] == 1) {
                                int base = scan_blossom(v, w);
                                if (base >= 0) {
                                    add_blossom(base, k);
                                } else {
                                    augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if (label_[w] == 0) {
                                label_[w] = 2;
                                labelend_[w] = p ^ 1;
                            }
                        } else if (label_[inblossom_[w]] == 1) {
                            int b = inblossom_[v];
                            if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) {
                                bestedge_[b] = k;
                            }
                        } else if (label_[w] == 0) {
                            if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) {
                                bestedge_[w] = k;
                            }
                        }
                    }
                }
                if (augmented) {
                    break;
                }

                int deltatype = -1;
                std::int64_t delta = 0;
                int deltaedge = -1, deltablossom = -1;
                if (!max_cardinality) {
                    deltatype = 1;
                    delta = *std::min_element(dualvar_.begin(), dualvar_.begin() + nv_);
                }
                for (int v = 0; v < nv_; v++) {
                    if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
                        std::int64_t d = slack(bestedge_[v]);
                        if (deltatype == -1 || d < delta) {
                            delta = d;
                            deltatype = 2;
                            deltaedge = bestedge_[v];
                        }
                    }
                }
                for (int b = 0; b < 2 * nv_; b++) {
                    if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
                        std::int64_t d = slack(bestedge_[b]) / 2;
                        if (deltatype == -1 || d < delta) {
                            delta = d;
                            deltatype = 3;
                            deltaedge = bestedge_[b];
                        }
                    }
                }
                for (int b = nv_; b < 2 * nv_; b++) {
                    if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 &&
                        (deltatype == -1 || dualvar_[b] < delta)) {
                        delta = dualvar_[b];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }
                if (deltatype == -1) {
                    deltatype = 1;
                    delta = std::max<std::int64_t>(0, *std::min_element(dualvar_.begin(), dualvar_.begin() + nv_));
                }
                for (int v = 0; v < nv_; v++) {
                    if (label_[inblossom_[v]] == 1) {
                        dualvar_[v] -= delta;
                    } else if (label_[inblossom_[v]] == 2) {
                        dualvar_[v] += delta;
                    }
                }
                for (int b = nv_; b < 2 * nv_; b++) {
                    if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
                        if (label_[b] == 1) {
                            dualvar_[b] += delta;
                        } else if (label_[b] == 2) {
                            dualvar_[b] -= delta;
                        }
                    }
                }
                if (deltatype == 1) {
                    break;
                } else if (deltatype == 2) {
                    allowedge_[deltaedge] = true;
                    int i = edges_[deltaedge].i, j = edges_[deltaedge].j;
                    if (label_[inblossom_[i]] == 0) {
                        std::swap(i, j);
                    }
                    queue_.push_back(i);
                } else if (deltatype == 3) {
                    allowedge_[deltaedge] = true;
                    queue_.push_back(edges_[deltaedge].i);
                } else {
                    expand_blossom(deltablossom, false);
                }
            }
            if (!augmented) {
                break;
            }
            for (int b = nv_; b < 2 * nv_; b++) {
                if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 && dualvar_[b] == 0) {
                    expand_blossom(b, true);
                }
            }
        }
        std::vector<int> out(nv_, -1);
        for (int v = 0; v < nv_; v++) {
            if (mate_[v] >= 0) {
                out[v] = endpoint_[mate_[v]];
            }
        }
        return out;
    }

    /// Reduced cost of a (possibly absent) edge (i, j, w) under the final
    /// duals; nonnegative for every pair iff the duals certify optimality.
    std::int64_t pair_slack(int i, int j, std::int64_t w) const {
        std::int64_t s = dualvar_[i] + dualvar_[j] - 2 * w;
        chain(i, ci_);
        chain(j, cj_);
        for (std::size_t a = ci_.size(), b = cj_.size(); a-- > 0 && b-- > 0;) {
            if (ci_[a] != cj_[b]) {
                break;
            }
            s += 2 * dualvar_[ci_[a]];
        }
        return s;
    }
    /// True iff v lies in no nontrivial blossom.
    bool is_top_level_vertex(int v) const {
        return blossomparent_[v] == -1;
    }

   private:
    /// Blossoms containing v, innermost first.
    void chain(int v, std::vector<int> &out) const {
        out.clear();
        for (int b = blossomparent_[v]; b != -1; b = blossomparent_[b]) {
            out.push_back(b);
        }
    }
    mutable std::vector<int> ci_, cj_;

    void init(int nvertex, const std::vector<WeightedEdge> &edges) {
        nv_ = nvertex;
        edges_ = edges;
        int ne = static_cast<int>(edges.size());
        std::int64_t maxweight = 0;
        for (const auto &e : edges) {
            maxweight = std::max(maxweight, e.w);
        }
        endpoint_.resize(2 * ne);
        for (int p = 0; p < 2 * ne; p++) {
            endpoint_[p] = p % 2 == 0 ? edges[p / 2].i : edges[p / 2].j;
        }
        neighbend_.assign(nv_, {});
        for (int k = 0; k < ne; k++) {
            neighbend_[edges[k].i].push_back(2 * k + 1);
            neighbend_[edges[k].j].push_back(2 * k);
        }
        mate_.assign(nv_, -1);
        label_.assign(2 * nv_, 0);
        labelend_.assign(2 * nv_, -1);
        inblossom_.resize(nv_);
        for (int v = 0; v < nv_; v++) {
            inblossom_[v] = v;
        }
        blossomparent_.assign(2 * nv_, -1);
        blossomchilds_.assign(2 * nv_, {});
        blossombase_.assign(2 * nv_, -1);
        for (int v = 0; v < nv_; v++) {
            blossombase_[v] = v;
        }
        blossomendps_.assign(2 * nv_, {});
        bestedge_.assign(2 * nv_, -1);
        blossombestedges_.assign(2 * nv_, {});
        has_bbe_.assign(2 * nv_, false);
        unusedblossoms_.clear();
        for (int b = nv_; b < 2 * nv_; b++) {
            unusedblossoms_.push_back(b);
        }
        dualvar_.assign(2 * nv_, 0);
        for (int v = 0; v < nv_; v++) {
            dualvar_[v] = maxweight;
        }
        allowedge_.assign(ne, false);
        queue_.clear();
    }

    std::int64_t slack(int k) const {
        const auto &e = edges_[k];
        return dualvar_[e.i] + dualvar_[e.j] - 2 * e.w;
    }

    void blossom_leaves(int b, std::vector<int> &out) const {
        if (b < nv_) {
            out.push_back(b);
            return;
        }
        for (int t : blossomchilds_[b]) {
            blossom_leaves(t, out);
        }
    }
    std::vector<int> leaves(int b) const {
        std::vector<int> out;
        blossom_leaves(b, out);
        return out;
    }

    void assign_label(int w, int t, int p) {
        int b = inblossom_[w];
        label_[w] = label_[b] = t;
        labelend_[w] = labelend_[b] = p;
        bestedge_[w] = bestedge_[b] = -1;
        if (t == 1) {
            blossom_leaves(b, queue_);
        } else if (t == 2) {
            int base = blossombase_[b];
            assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
        }
    }

    int scan_blossom(int v, int w) {
        std::vector<int> path;
        int base = -1;
        while (v != -1 || w != -1) {
            int b = inblossom_[v];
            if (label_[b] & 4) {
                base = blossombase_[b];
                break;
            }
            path.push_back(b);
            label_[b] = 5;
            if (labelend_[b] == -1) {
                v = -1;
            } else {
                v = endpoint_[labelend_[b]];
                b = inblossom_[v];
                v = endpoint_[labelend_[b]];
            }
            if (w != -1) {
                std::swap(v, w);
            }
        }
        for (int b : path) {
            label_[b] = 1;
        }
        return base;
    }

    void add_blossom(int base, int k) {
        int v = edges_[k].i, w = edges_[k].j;
        int bb = inblossom_[base];
        int bv = inblossom_[v];
        int bw = inblossom_[w];
        int b = unusedblossoms_.back();
        unusedblossoms_.pop_back();
        blossombase_[b] = base;
        blossomparent_[b] = -1;
        blossomparent_[bb] = b;
        auto &path = blossomchilds_[b];
        auto &endps = blossomendps_[b];
        path.clear();
        endps.clear();
        while (bv != bb) {
            blossomparent_[bv] = b;
            path.push_back(bv);
            endps.push_back(labelend_[bv]);
            v = endpoint_[labelend_[bv]];
            bv = inblossom_[v];
        }
        path.push_back(bb);
        std::reverse(path.begin(), path.end());
        std::reverse(endps.begin(), endps.end());
        endps.push_back(2 * k);
        while (bw != bb) {
            blossomparent_[bw] = b;
            path.push_back(bw);
            endps.push_back(labelend_[bw] ^ 1);
            w = endpoint_[labelend_[bw]];
            bw = inblossom_[w];
        }
        label_[b] = 1;
        labelend_[b] = labelend_[bb];
        dualvar_[b] = 0;
        for (int u : leaves(b)) {
            if (label_[inblossom_[u]] == 2) {
                queue_.push_back(u);
            }
            inblossom_[u] = b;
        }
        std::vector<int> bestedgeto(2 * nv_, -1);
        for (int sub : path) {
            std::vector<int> nblist;
            if (!has_bbe_[sub]) {
                for (int u : leaves(sub)) {
                    for (int p : neighbend_[u]) {
                        nblist.push_back(p / 2);
                    }
                }
            } else {
                nblist = blossombestedges_[sub];
            }
            for (int kk : nblist) {
                int i = edges_[kk].i, j = edges_[kk].j;
                if (inblossom_[j] == b) {
                    std::swap(i, j);
                }
                int bj = inblossom_[j];
                if (bj != b && label_[bj] == 1 && (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj]))) {
                    bestedgeto[bj] = kk;
                }
            }
            blossombestedges_[sub].clear();
            has_bbe_[sub] = false;
            bestedge_[sub] = -1;
        }
        blossombestedges_[b].clear();
        for (int kk : bestedgeto) {
            if (kk != -1) {
                blossombestedges_[b].push_back(kk);
            }
        }
        has_bbe_[b] = true;
        bestedge_[b] = -1;
        for (int kk : blossombestedges_[b]) {
            if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) {
                bestedge_[b] = kk;
            }
        }
    }

    void expand_blossom(int b, bool endstage) {
        std::vector<int> childs = blossomchilds_[b];
        for (int s : childs) {
            blossomparent_[s] = -1;
            if (s < nv_) {
                inblossom_[s] = s;
            } else if (endstage && dualvar_[s] == 0) {
                expand_blossom(s, endstage);
            } else {
                for (int u : leaves(s)) {
                    inblossom_[u] = s;
                }
            }
        }
        if (!endstage && label_[b] == 2) {
            const auto &ch = blossomchilds_[b];
            const auto &ep = blossomendps_[b];
            int len = static_cast<int>(ch.size());
            auto at = [len](int j) { return ((j % len) + len) % len; };
            int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
            int j = static_cast<int>(std::find(ch.begin(), ch.end(), entrychild) - ch.begin());
            int jstep, endptrick;
            if (j & 1) {
                j -= len;
                jstep = 1;
                endptrick = 0;
            } else {
                jstep = -1;
                endptrick = 1;
            }
            int p = labelend_[b];
            while (j != 0) {
                label_[endpoint_[p ^ 1]] = 0;
                label_[endpoint_[ep[at(j - endptrick)] ^ endptrick ^ 1]] = 0;
                assign_label(endpoint_[p ^ 1], 2, p);
                allowedge_[ep[at(j - endptrick)] / 2] = true;
                j += jstep;
                p = ep[at(j - endptrick)] ^ endptrick;
                allowedge_[p / 2] = true;
                j += jstep;
            }
            int bv = ch[at(j)];
            label_[endpoint_[p ^ 1]] = label_[bv] = 2;
            labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
            bestedge_[bv] = -1;
            j += jstep;
            while (ch[at(j)] != entrychild) {
                bv = ch[at(j)];
                if (label_[bv] == 1) {
                    j += jstep;
                    continue;
                }
                int found = -1;
                for (int u : leaves(bv)) {
                    if (label_[u] != 0) {
                        found = u;
                        break;
                    }
                }
                if (found >= 0) {
                    label_[found] = 0;
                    label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
                    assign_label(found, 2, labelend_[found]);
                }
                j += jstep;
            }
        }
        label_[b] = labelend_[b] = -1;
        blossomchilds_[b].clear();
        blossomendps_[b].clear();
        blossombase_[b] = -1;
        blossombestedges_[b].clear();
        has_bbe_[b] = false;
        bestedge_[b] = -1;
        unusedblossoms_.push_back(b);
    }

    void augment_blossom(int b, int v) {
        int t = v;
        while (blossomparent_[t] != b) {
            t = blossomparent_[t];
        }
        if (t >= nv_) {
            augment_blossom(t, v);
        }
        auto &ch = blossomchilds_[b];
        auto &ep = blossomendps_[b];
        int len = static_cast<int>(ch.size());
        auto at = [len](int j) { return ((j % len) + len) % len; };
        int i = static_cast<int>(std::find(ch.begin(), ch.end(), t) - ch.begin());
        int j = i;
        int jstep, endptrick;
        if (i & 1) {
            j -= len;
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        while (j != 0) {
            j += jstep;
            t = ch[at(j)];
            int p = ep[at(j - endptrick)] ^ endptrick;
            if (t >= nv_) {
                augment_blossom(t, endpoint_[p]);
            }
            j += jstep;
            t = ch[at(j)];
            if (t >= nv_) {
                augment_blossom(t, endpoint_[p ^ 1]);
            }
            mate_[endpoint_[p]] = p ^ 1;
            mate_[endpoint_[p ^ 1]] = p;
        }
        std::rotate(ch.begin(), ch.begin() + i, ch.end());
        std::rotate(ep.begin(), ep.begin() + i, ep.end());
        blossombase_[b] = blossombase_[ch[0]];
    }

    void augment_matching(int k) {
        int v = edges_[k].i, w = edges_[k].j;
        for (auto [s0, p0] : {std::pair<int, int>{v, 2 * k + 1}, std::pair<int, int>{w, 2 * k}}) {
            int s = s0, p = p0;
            while (true) {
                int bs = inblossom_[s];
                if (bs >= nv_) {
                    augment_blossom(bs, s);
                }
                mate_[s] = p;
                if (labelend_[bs] == -1) {
                    break;
                }
                int t = endpoint_[labelend_[bs]];
                int bt = inblossom_[t];
                s = endpoint_[labelend_[bt]];
                int j = endpoint_[labelend_[bt] ^ 1];
                if (bt >= nv_) {
                    augment_blossom(bt, j);
                }
                mate_[j] = labelend_[bt];
                p = labelend_[bt] ^ 1;
            }
        }
    }

    int nv_ = 0;
    std::vector<WeightedEdge> edges_;
    std::vector<int> endpoint_;
    std::vector<std::vector<int>> neighbend_;
    std::vector<int> mate_, label_, labelend_, inblossom_, blossomparent_, blossombase_, bestedge_;
    std::vector<std::vector<int>> blossomchilds_, blossomendps_, blossombestedges_;
    std::vector<bool> has_bbe_;
    std::vector<int> unusedblossoms_;
    std::vector<std::int64_t> dualvar_;
    std::vector<bool> allowedge_;
    std::vector<int> queue_;
};

/// Minimum-weight perfect matching on a complete graph given by a symmetric
/// distance matrix (row-major, n*n). Returns mate[v].
inline std::vector<int> min_weight_perfect_matching(int n, const std::vector<std::int64_t> &dist) {
    if (n % 2 != 0) {
        throw OddTerminals("perfect matching needs an even number of terminals, got " + std::to_string(n));
    }
    if (n == 0) {
        return {};
    }
    std::int64_t maxd = 0;
    for (auto d : dist) {
        maxd = std::max(maxd, d);
    }
    // Maximizing (C - d) over maximum-cardinality matchings minimizes total d.
    std::vector<WeightedEdge> edges;
    edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; i++) {
        for (int j = i + 1; j < n; j++) {
            edges.push_back({i, j, maxd + 1 - dist[static_cast<std::size_t>(i) * n + j]});
        }
    }
    BlossomMatcher m;
    auto mate = m.solve(n, edges, true);
    for (int v = 0; v < n; v++) {
        if (mate[v] < 0) {
            throw std::logic_error("matcher returned an imperfect matching");
        }
    }
    return mate;
}

/// Minimum-weight perfect matching on the complete graph of `n` terminals
/// with distances dist(i, j), solved on a sparse candidate graph (the k
/// nearest neighbours of every terminal) and certified exact: any pair whose
/// reduced cost under the final duals is negative is added and the problem
/// re-solved, so the result is optimal for the complete graph.
template <typename Dist>
std::vector<int> min_weight_perfect_matching_sparse(int n, const Dist &dist, int k = 8) {
    if (n % 2 != 0) {
        throw OddTerminals("perfect matching needs an even number of terminals, got " + std::to_string(n));
    }
    if (n == 0) {
        return {};
    }
    std::int64_t maxd = 0;
    for (int i = 0; i < n; i++) {
        for (int j = i + 1; j < n; j++) {
            maxd = std::max<std::int64_t>(maxd, dist(i, j));
        }
    }
    const std::int64_t c = maxd + 1;
    std::vector<std::uint8_t> in_graph(static_cast<std::size_t>(n) * n, 0);
    std::vector<WeightedEdge> edges;
    auto add_pair = [&](int i, int j) {
        if (i > j) {
            std::swap(i, j);
        }
        std::size_t key = static_cast<std::size_t>(i) * n + j;
        if (!in_graph[key]) {
            in_graph[key] = 1;
            edges.push_back({i, j, c - dist(i, j)});
        }
    };
    auto add_nearest = [&](int kk) {
        std::vector<std::pair<std::int64_t, int>> row;
        for (int i = 0; i < n; i++) {
            row.clear();
            for (int j = 0; j < n; j++) {
                if (j != i) {
                    row.push_back({dist(i, j), j});
                }
            }
            int take = std::min<int>(kk, static_cast<int>(row.size()));
            std::partial_sort(row.begin(), row.begin() + take, row.end());
            for (int t = 0; t < take; t++) {
                add_pair(i, row[t].second);
            }
        }
    };
    add_nearest(k);
    BlossomMatcher m;
    while (true) {
        // Deterministic edge order regardless of insertion history.
        std::sort(edges.begin(), edges.end(),
                  [](const WeightedEdge &a, const WeightedEdge &b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
        auto mate = m.solve(n, edges, true);
        if (std::find(mate.begin(), mate.end(), -1) != mate.end()) {
            k *= 2;
            add_nearest(k);
            continue;
        }
        bool added = false;
        for (int i = 0; i < n; i++) {
            for (int j = i + 1; j < n; j++) {
                if (!in_graph[static_cast<std::size_t>(i) * n + j] && m.pair_slack(i, j, c - dist(i, j)) < 0) {
                    add_pair(i, j);
                    added = true;
                }
            }
        }
        if (!added) {
            return mate;
        }
    }
}

}  // namespace fbqc
