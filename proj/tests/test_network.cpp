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

#include <set>

#include <gtest/gtest.h>

#include "fbqc/serialization.hpp"
#include "fbqc/syndrome_graph.hpp"

using namespace fbqc;

namespace {

std::vector<std::string> sparse_strings(const GeneratorSet &g) {
    std::vector<std::string> out;
    auto label = [](std::size_t q) { return std::to_string(q + 1); };
    for (const auto &p : g.gens) {
        out.push_back((p.sign() < 0 ? "-" : "") + p.sparse_str(label));
    }
    return out;
}

void expect_partition(const FusionNetwork &net) {
    std::vector<int> state(net.n_qubits, 0), fusion(net.n_qubits, 0);
    for (const auto &rs : net.resource_states) {
        for (auto q : rs.qubits) {
            state[q]++;
        }
        for (const auto &a : rs.stabilizers.gens) {
            for (const auto &b : rs.stabilizers.gens) {
                ASSERT_TRUE(commutes(a, b));
            }
        }
    }
    for (const auto &f : net.fusions) {
        for (auto q : f.qubits) {
            fusion[q]++;
        }
    }
    for (std::size_t q = 0; q < net.n_qubits; q++) {
        ASSERT_EQ(state[q], 1);
        ASSERT_LE(fusion[q], 1);
    }
}

/// Relabels qubits by a one-cell shift along `axis` and compares R and F as sets.
bool shift_invariant(const FusionNetwork &net, int axis) {
    const int m = 4 * net.lattice->L;
    std::map<std::pair<Coord, std::size_t>, std::size_t> at;
    for (const auto &rs : net.resource_states) {
        for (std::size_t k = 0; k < rs.qubits.size(); k++) {
            at[{*rs.position, k}] = rs.qubits[k];
        }
    }
    std::vector<std::size_t> perm(net.n_qubits);
    for (const auto &rs : net.resource_states) {
        Coord c = *rs.position;
        c[axis] = (c[axis] + 4) % m;
        for (std::size_t k = 0; k < rs.qubits.size(); k++) {
            perm[rs.qubits[k]] = at.at({c, k});
        }
    }
    auto relabel = [&](const PauliOp &p) {
        PauliOp out(p.num_qubits());
        for (std::size_t q = 0; q < p.num_qubits(); q++) {
            out.set_letter(perm[q], p.letter(q));
        }
        out.phase = p.phase;
        return out.str();
    };
    auto [r, f] = network_groups(net);
    for (const GeneratorSet *g : {&r, &f}) {
        std::multiset<std::string> before, after;
        for (const auto &p : g->gens) {
            before.insert(p.str());
            after.insert(relabel(p));
        }
        if (before != after) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST(FourLine, GroupsMatchDisplayedLists) {
    FusionNetwork net = build_four_line_example();
    expect_partition(net);
    auto [r, f] = network_groups(net);
    EXPECT_EQ(sparse_strings(r), (std::vector<std::string>{"X1Z2", "Z1X2Z3", "Z2X3", "X4Z5", "Z4X5", "X6Z7",
                                                           "Z6X7Z8", "Z7X8"}));
    EXPECT_EQ(sparse_strings(f), (std::vector<std::string>{"X3Z4", "Z3X4", "X5Z6", "Z5X6"}));
    EXPECT_TRUE(f.contains_minus_one);
    EXPECT_EQ(net.outer_qubits, (std::vector<std::size_t>{0, 1, 6, 7}));
    for (const auto &a : f.gens) {
        for (const auto &b : f.gens) {
            EXPECT_TRUE(commutes(a, b));
        }
    }
}

TEST(BellNetwork, Structure) {
    FusionNetwork net = build_bell_ftfn_example();
    expect_partition(net);
    EXPECT_EQ(net.n_qubits, 16u);
    EXPECT_EQ(net.outer_qubits, (std::vector<std::size_t>{0, 15}));
    for (const auto &fu : net.fusions) {
        EXPECT_EQ(fu.basis_tag, BasisTag::XX_ZZ);
    }
    bool fused_4_13 = false;
    for (const auto &fu : net.fusions) {
        fused_4_13 = fused_4_13 || (fu.qubits == std::vector<std::size_t>{3, 12});
    }
    EXPECT_TRUE(fused_4_13);
    auto [r, f] = network_groups(net);
    EXPECT_EQ(intersection(r, f).rank(), 2u);
}

TEST(Lattices, FourStarCounts) {
    FusionNetwork net = build_4star(2, true);
    expect_partition(net);
    EXPECT_EQ(net.resource_states.size(), 48u);
    EXPECT_EQ(net.fusions.size(), 96u);
    EXPECT_EQ(net.n_qubits, 192u);
    EXPECT_TRUE(net.outer_qubits.empty());
    std::vector<int> per_state(net.resource_states.size(), 0);
    std::vector<std::size_t> owner(net.n_qubits);
    for (const auto &rs : net.resource_states) {
        for (auto q : rs.qubits) {
            owner[q] = rs.id;
        }
        EXPECT_EQ(rs.stabilizers.dump(), "+ZZZZ\n+XXII\n+IXXI\n+IIXX\n");
    }
    for (const auto &fu : net.fusions) {
        EXPECT_EQ(fu.basis_tag, BasisTag::XZ_ZX);
        for (auto q : fu.qubits) {
            per_state[owner[q]]++;
        }
    }
    for (int c : per_state) {
        EXPECT_EQ(c, 4);
    }
    auto [r, f] = network_groups(net);
    EXPECT_EQ(r.size(), 192u);
    EXPECT_EQ(f.size(), 192u);
    EXPECT_EQ(build_4star(3, true).resource_states.size(), 6u * 27);
    EXPECT_EQ(build_4star(3, true).fusions.size(), 12u * 27);
}

TEST(Lattices, SixRingCounts) {
    FusionNetwork net = build_6ring(2, true);
    expect_partition(net);
    EXPECT_EQ(net.resource_states.size(), 16u);
    EXPECT_EQ(net.fusions.size(), 48u);
    EXPECT_EQ(net.n_qubits, 96u);
    EXPECT_TRUE(net.outer_qubits.empty());
    for (const auto &fu : net.fusions) {
        EXPECT_EQ(fu.basis_tag, BasisTag::XX_ZZ);
    }
    EXPECT_EQ(net.resource_states[0].stabilizers.dump(),
              "+XZIIIZ\n+ZXZIII\n+IZXZII\n+IIZXZI\n+IIIZXZ\n+ZIIIZX\n");
    // Ring qubit k of the state centred at the origin sits at the k-th offset.
    const Coord want[6] = {{2, 0, 0}, {2, 2, 0}, {0, 2, 0}, {0, 2, 2}, {0, 0, 2}, {2, 0, 2}};
    for (int k = 0; k < 6; k++) {
        EXPECT_EQ(kSixRingOffsets[k], want[k]);
    }
    EXPECT_EQ(build_6ring(3, true).fusions.size(), 6u * 27);
}

TEST(Lattices, InvalidSize) {
    EXPECT_THROW(build_4star(1, true), InvalidSize);
    EXPECT_THROW(build_6ring(0, true), InvalidSize);
    EXPECT_NO_THROW(build_6ring(1, false));
}

TEST(Lattices, OpenBuildsLeaveOuterQubits) {
    FusionNetwork net = build_6ring(2, false);
    expect_partition(net);
    EXPECT_FALSE(net.outer_qubits.empty());
}

TEST(Lattices, TranslationInvariant) {
    for (int L : {2, 3}) {
        for (int axis = 0; axis < 3; axis++) {
            EXPECT_TRUE(shift_invariant(build_4star(L, true), axis)) << "4-star L=" << L << " axis " << axis;
            EXPECT_TRUE(shift_invariant(build_6ring(L, true), axis)) << "6-ring L=" << L << " axis " << axis;
        }
    }
}

TEST(Lattices, CheckRankAtL2) {
    // rank(R ∩ F) at L=2 exceeds the rank of the local checks by the six
    // periodic logical membranes (three per graph).
    for (auto kind : {LatticeKind::FourStar, LatticeKind::SixRing}) {
        FusionNetwork net = kind == LatticeKind::FourStar ? build_4star(2, true) : build_6ring(2, true);
        auto [r, f] = network_groups(net);
        auto c = intersection(r, f);
        auto graphs = derive_syndrome_graphs(net);
        std::size_t n_out = net.num_outcomes();
        std::size_t local = check_rank({&graphs.first, &graphs.second}, n_out);
        EXPECT_EQ(local, 2 * (graphs.first.num_vertices() - 1));
        std::vector<BitVec> rows;
        for (const SyndromeGraph *g : {&graphs.first, &graphs.second}) {
            for (const auto &ms : g->check_measurements) {
                BitVec b(n_out);
                for (auto m : ms) {
                    b.set(m);
                }
                rows.push_back(b);
            }
            for (int d = 0; d < 3; d++) {
                BitVec b(n_out);
                for (auto e : g->logical_cuts[d]) {
                    b.set(g->edges[e].measurement);
                }
                rows.push_back(b);
            }
        }
        std::vector<BitVec> f_rows;
        for (const auto &e : c.elements) {
            f_rows.push_back(e.f_expr);
        }
        std::size_t geometric = rref_rows(rows).size();
        EXPECT_EQ(c.rank(), geometric);
        EXPECT_EQ(geometric, local + 6);
        // Same span: adding the algebraic rows does not raise the rank.
        auto both = rows;
        both.insert(both.end(), f_rows.begin(), f_rows.end());
        EXPECT_EQ(rref_rows(both).size(), geometric);
    }
}

TEST(Serialization, RoundTrip) {
    for (const auto &net : {build_four_line_example(), build_bell_ftfn_example(), build_4star(2, true),
                            build_6ring(2, true)}) {
        std::string text = network_to_string(net);
        FusionNetwork back = network_from_string(text);
        EXPECT_EQ(network_to_string(back), text);
        auto [r1, f1] = network_groups(net);
        auto [r2, f2] = network_groups(back);
        EXPECT_EQ(r1, r2);
        EXPECT_EQ(f1, f2);
        EXPECT_EQ(net.outer_qubits, back.outer_qubits);
    }
}

TEST(Serialization, FourLineGolden) {
    EXPECT_EQ(network_to_string(build_four_line_example()),
              "fbqc-network v1\n"
              "qubits 8\n"
              "state 0 qubits 0 1 2 gens +XZI +ZXZ +IZX\n"
              "state 1 qubits 3 4 gens +XZ +ZX\n"
              "state 2 qubits 5 6 7 gens +XZI +ZXZ +IZX\n"
              "fusion 0 tag XZ_ZX qubits 2 3 meas +XZ +ZX names m1 m2\n"
              "fusion 1 tag XZ_ZX qubits 4 5 meas +XZ +ZX names m3 m4\n"
              "end\n");
}

TEST(Serialization, RejectsMalformedInput) {
    std::string good = network_to_string(build_four_line_example());
    EXPECT_THROW(network_from_string(""), ParseError);
    EXPECT_THROW(network_from_string("fbqc-network v2\n"), ParseError);
    auto replace = [&](const std::string &from, const std::string &to) {
        std::string s = good;
        s.replace(s.find(from), from.size(), to);
        return s;
    };
    EXPECT_THROW(network_from_string(replace("+XZI +ZXZ", "+XQI +ZXZ")), ParseError);
    EXPECT_THROW(network_from_string(replace("qubits 2 3", "qubits 2 2")), ParseError);
    EXPECT_THROW(network_from_string(replace("end\n", "")), ParseError);
    EXPECT_THROW(network_from_string(replace("+XZ +ZX names m1", "+XZ +XX names m1")), ParseError);
    EXPECT_THROW(network_from_string(replace("gens +XZ +ZX", "gens +XZ +XZ")), ParseError);
}

TEST(Serialization, EmptyNetwork) {
    FusionNetwork net = network_from_string("fbqc-network v1\nqubits 0\nend\n");
    auto [r, f] = network_groups(net);
    EXPECT_EQ(r.size(), 0u);
    EXPECT_EQ(f.size(), 0u);
}
