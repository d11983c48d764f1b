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

#include <map>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "fbqc/outputs.hpp"
#include "fbqc/statevector.hpp"
#include "fbqc/syndrome_graph.hpp"

namespace fbqc {

/// The group-theoretic picture of a small network, rendered as text.
struct AlgebraReport {
    std::vector<std::string> resource;   ///< R generators
    std::vector<std::string> fusion;     ///< F generators with outcome names
    std::vector<std::string> surviving;  ///< S generators
    std::vector<std::string> checks;     ///< check generators as outcome products
    std::size_t check_rank = 0;
    std::vector<std::string> outputs;    ///< S_out with outcome-dependent signs
};

inline AlgebraReport algebra_report(const FusionNetwork &net) {
    auto [r, f] = network_groups(net);
    GeneratorSet s = centralizer_in(r, f);
    SymbolicOutputs sym = symbolic_output_stabilizers(s, net.outer_qubits, f);
    auto label = [](std::size_t q) { return std::to_string(q + 1); };
    auto oname = [&](std::size_t k) { return net.outcome_name(k); };
    AlgebraReport rep;
    for (const auto &g : r.gens) {
        rep.resource.push_back((g.sign() < 0 ? "-" : "") + g.sparse_str(label));
    }
    for (std::size_t k = 0; k < f.size(); k++) {
        rep.fusion.push_back(oname(k) + " = " + f.gens[k].sparse_str(label));
    }
    for (const auto &g : s.gens) {
        rep.surviving.push_back((g.sign() < 0 ? "-" : "") + g.sparse_str(label));
    }
    for (const auto &c : sym.checks) {
        std::string t;
        for (std::size_t k : c.f_expr.ones()) {
            t += (t.empty() ? "" : " ") + oname(k);
        }
        rep.checks.push_back(t + " = " + (c.sign > 0 ? "+1" : "-1"));
    }
    rep.check_rank = sym.checks.size();
    auto outer_label = [&](std::size_t k) { return std::to_string(sym.outer[k] + 1); };
    for (const auto &o : sym.outputs) {
        rep.outputs.push_back(o.render(oname, outer_label));
    }
    return rep;
}

inline void write_algebra_report(std::ostream &out, const AlgebraReport &rep) {
    auto block = [&](const char *title, const std::vector<std::string> &rows) {
        out << title << " (" << rows.size() << ")\n";
        for (const auto &r : rows) {
            out << "  " << r << "\n";
        }
    };
    block("R", rep.resource);
    block("F", rep.fusion);
    block("S", rep.surviving);
    out << "C rank " << rep.check_rank << "\n";
    for (const auto &c : rep.checks) {
        out << "  " << c << "\n";
    }
    block("S_out", rep.outputs);
}

struct OracleAgreement {
    std::size_t assignments = 0;
    std::size_t agree = 0;
};

/// Compares the algebraic outputs with the state-vector oracle on the given
/// outcome assignments. An assignment violating a check must have zero
/// probability; otherwise the canonical stabilizer groups must coincide.
inline OracleAgreement oracle_agreement(const FusionNetwork &net, const std::vector<OutcomeVector> &assignments) {
    auto [r, f] = network_groups(net);
    GeneratorSet s = centralizer_in(r, f);
    SymbolicOutputs sym = symbolic_output_stabilizers(s, net.outer_qubits, f);
    OracleAgreement res;
    for (const auto &ov : assignments) {
        res.assignments++;
        auto oracle = brute_force_oracle(net, ov);
        if (!outcomes_consistent(sym, ov)) {
            res.agree += !oracle.has_value();
            continue;
        }
        if (oracle && canonicalize(output_stabilizers(s, net.outer_qubits, f, ov)).dump() == oracle->dump()) {
            res.agree++;
        }
    }
    return res;
}

/// All 2^n assignments when n <= max_exhaustive, else `samples` random ones
/// (half forced onto the check-consistent subspace so both branches are hit).
inline std::vector<OutcomeVector> outcome_assignments(const FusionNetwork &net, std::size_t max_exhaustive,
                                                      std::size_t samples, std::uint64_t seed) {
    const std::size_t n = net.num_outcomes();
    std::vector<OutcomeVector> out;
    if (n <= max_exhaustive) {
        for (std::uint64_t m = 0; m < (1ULL << n); m++) {
            OutcomeVector ov(n);
            for (std::size_t k = 0; k < n; k++) {
                ov[k] = (m >> k) & 1 ? Outcome::Minus : Outcome::Plus;
            }
            out.push_back(std::move(ov));
        }
        return out;
    }
    auto [r, f] = network_groups(net);
    SymbolicOutputs sym = symbolic_output_stabilizers(centralizer_in(r, f), net.outer_qubits, f);
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < samples; i++) {
        OutcomeVector ov(n);
        for (auto &o : ov) {
            o = rng() & 1 ? Outcome::Minus : Outcome::Plus;
        }
        if (i % 2 == 0) {
            // Repair each check by flipping its pivot outcome (checks are in
            // reduced echelon form, so pivots are private to their check).
            for (const auto &c : sym.checks) {
                if (evaluate_sign(c, ov) != 1) {
                    auto k = c.f_expr.first_set();
                    ov[k] = ov[k] == Outcome::Plus ? Outcome::Minus : Outcome::Plus;
                }
            }
        }
        out.push_back(std::move(ov));
    }
    return out;
}

/// Lattice summary printed by `inspect`.
inline void write_lattice_report(std::ostream &out, const FusionNetwork &net,
                                 const std::pair<SyndromeGraph, SyndromeGraph> &graphs) {
    out << "resource states " << net.resource_states.size() << "\n";
    out << "fusions " << net.fusions.size() << "\n";
    out << "qubits " << net.n_qubits << "\n";
    out << "fusion outcomes " << net.num_outcomes() << "\n";
    out << "outer qubits " << net.outer_qubits.size() << "\n";
    out << "local check rank " << check_rank({&graphs.first, &graphs.second}, net.num_outcomes()) << "\n";
    for (const SyndromeGraph *g : {&graphs.first, &graphs.second}) {
        std::map<std::size_t, std::size_t> hist;
        for (std::size_t v = 0; v < g->num_vertices(); v++) {
            hist[g->degree(v)]++;
        }
        out << (g->primal ? "primal" : "dual") << " graph: " << g->num_vertices() << " vertices, " << g->num_edges()
            << " edges, degree histogram";
        for (auto [d, c] : hist) {
            out << " " << d << ":" << c;
        }
        out << "\n";
    }
}

}  // namespace fbqc
