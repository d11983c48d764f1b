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

// Dense state-vector simulation of small fusion networks. Used as an
// independent oracle for the symplectic output-stabilizer computation.

#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fbqc/network.hpp"
#include "fbqc/outputs.hpp"

namespace fbqc {

struct TooLarge : std::invalid_argument {
    explicit TooLarge(const std::string &what) : std::invalid_argument(what) {
    }
};

using Amplitudes = std::vector<std::complex<double>>;

/// P|psi> for an n-qubit Pauli (qubit q is bit q of the basis index).
inline Amplitudes apply_pauli(const PauliOp &p, const Amplitudes &psi) {
    std::uint64_t xm = 0, zm = 0;
    for (std::size_t q = 0; q < p.num_qubits(); q++) {
        xm |= std::uint64_t{p.x[q]} << q;
        zm |= std::uint64_t{p.z[q]} << q;
    }
    // Letters: Y = i X Z, so the operator is i^(phase + #Y) X^x Z^z.
    int ph = (p.phase + std::popcount(xm & zm)) & 3;
    static const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    Amplitudes out(psi.size());
    for (std::uint64_t b = 0; b < psi.size(); b++) {
        double s = (std::popcount(b & zm) & 1) ? -1.0 : 1.0;
        out[b ^ xm] = ipow[ph] * s * psi[b];
    }
    return out;
}

/// psi <- (I + sign * P) psi / 2.
inline void project(const PauliOp &p, int sign, Amplitudes &psi) {
    Amplitudes pp = apply_pauli(p, psi);
    for (std::size_t b = 0; b < psi.size(); b++) {
        psi[b] = 0.5 * (psi[b] + double(sign) * pp[b]);
    }
}

inline double norm2(const Amplitudes &psi) {
    double s = 0;
    for (const auto &a : psi) {
        s += std::norm(a);
    }
    return s;
}

/// Signed stabilizers of the outer-qubit state after fusing with the given
/// outcomes, in canonical form; nullopt if the outcomes have probability 0.
inline std::optional<GeneratorSet> brute_force_oracle(const FusionNetwork &net, const OutcomeVector &outcomes) {
    std::size_t n = net.n_qubits;
    if (n > 16) {
        throw TooLarge("state-vector oracle supports at most 16 qubits, got " + std::to_string(n));
    }
    auto [r, f] = network_groups(net);
    if (outcomes.size() != f.size()) {
        throw DimensionMismatch("outcome vector length differs from the fusion generator count");
    }
    std::size_t dim = std::size_t{1} << n;

    // Joint resource state: project basis states onto the +1 eigenspace of R.
    Amplitudes psi;
    for (std::size_t start = 0; start < dim; start++) {
        psi.assign(dim, 0.0);
        psi[start] = 1.0;
        for (const auto &g : r.gens) {
            project(g, 1, psi);
        }
        if (norm2(psi) > 1e-9) {
            break;
        }
    }
    for (std::size_t k = 0; k < f.size(); k++) {
        if (outcomes[k] == Outcome::Erased) {
            throw std::invalid_argument("oracle needs definite outcomes");
        }
        project(f.gens[k], outcomes[k] == Outcome::Plus ? 1 : -1, psi);
    }
    double nn = norm2(psi);
    if (nn < 1e-9) {
        return std::nullopt;
    }
    for (auto &a : psi) {
        a /= std::sqrt(nn);
    }

    // The fused qubits end in a product eigenstate of F, so <P_out> = +-1
    // exactly when +-P_out stabilizes the outer state.
    const auto &outer = net.outer_qubits;
    std::size_t k = outer.size();
    std::vector<PauliOp> found;
    std::uint64_t total = std::uint64_t{1} << (2 * k);
    for (std::uint64_t code = 1; code < total; code++) {
        PauliOp p(n);
        for (std::size_t j = 0; j < k; j++) {
            p.x.set(outer[j], (code >> (2 * j)) & 1);
            p.z.set(outer[j], (code >> (2 * j + 1)) & 1);
        }
        Amplitudes pp = apply_pauli(p, psi);
        std::complex<double> e = 0;
        for (std::size_t b = 0; b < dim; b++) {
            e += std::conj(psi[b]) * pp[b];
        }
        if (std::abs(e.real() - 1) < 1e-6 || std::abs(e.real() + 1) < 1e-6) {
            PauliOp local = p.restricted(outer);
            local.phase = e.real() > 0 ? 0 : 2;
            found.push_back(std::move(local));
        }
    }
    return canonicalize(GeneratorSet(k, std::move(found)));
}

}  // namespace fbqc
