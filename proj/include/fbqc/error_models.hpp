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

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "fbqc/syndrome_graph.hpp"

namespace fbqc {

struct DomainError : std::domain_error {
    explicit DomainError(const std::string &what) : std::domain_error(what) {
    }
};
struct NoSolution : std::runtime_error {
    explicit NoSolution(const std::string &what) : std::runtime_error(what) {
    }
};

struct HardwareAgnosticParams {
    double p_erasure = 0;
    double p_error = 0;

    void validate() const {
        if (!(p_erasure >= 0 && p_erasure <= 1 && p_error >= 0 && p_error <= 1)) {
            throw DomainError("p_erasure and p_error must lie in [0, 1]");
        }
    }
};

struct LinearOpticalParams {
    double p_fail = 0.25;
    double p_loss = 0;
    bool encoded = false;

    double eta() const {
        return 1 - p_loss;
    }
    void validate() const {
        if (!(p_fail > 0 && p_fail <= 1)) {
            throw DomainError("p_fail must lie in (0, 1]");
        }
        if (!(p_loss >= 0 && p_loss < 1)) {
            throw DomainError("p_loss must lie in [0, 1)");
        }
    }
};

/// Counter-based generator: every (seed, stream) pair gives an independent,
/// reproducible sequence, so trials can run in any order on any thread.
class CounterRng {
   public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {
    }

    std::uint64_t next() {
        return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_);
    }
    /// Uniform double in [0, 1).
    double uniform() {
        return (next() >> 11) * 0x1.0p-53;
    }
    /// Bernoulli(p) using 64-bit resolution.
    bool bernoulli(double p) {
        return uniform() < p;
    }

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

   private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

struct TrialSample {
    BitVec erased;
    /// On non-erased edges: a measurement error. On erased edges: the error
    /// of the decoder's unbiased guess for the lost outcome (a fair coin).
    BitVec flipped;
};

/// Draws edges in index order: erasure first, then the flip bit.
inline void sample_hardware_agnostic(const HardwareAgnosticParams &params, std::size_t num_edges, CounterRng &rng,
                                     TrialSample &out) {
    if (out.erased.size() != num_edges) {
        out.erased = BitVec(num_edges);
        out.flipped = BitVec(num_edges);
    } else {
        out.erased.clear();
        out.flipped.clear();
    }
    const bool any_erasure = params.p_erasure > 0;
    for (std::size_t k = 0; k < num_edges; k++) {
        if (any_erasure && rng.bernoulli(params.p_erasure)) {
            out.erased.set(k);
            if (rng.next() & 1) {
                out.flipped.set(k);
            }
        } else if (params.p_error > 0 && rng.bernoulli(params.p_error)) {
            out.flipped.set(k);
        }
    }
}

inline TrialSample sample_hardware_agnostic(const HardwareAgnosticParams &params, const SyndromeGraph &graph,
                                            CounterRng &rng) {
    params.validate();
    TrialSample s;
    sample_hardware_agnostic(params, graph.num_edges(), rng, s);
    return s;
}

/// Marginal erasure probability of one outcome of a boosted fusion.
inline double p0(double p_fail, double eta) {
    if (!(p_fail > 0 && p_fail <= 1) || !(eta >= 0 && eta <= 1)) {
        throw DomainError("p0 needs p_fail in (0,1] and eta in [0,1]");
    }
    return 1 - (1 - p_fail / 2) * std::pow(eta, 1 / p_fail);
}

/// Erasure probability of an encoded fusion outcome, averaged over the two
/// orientations of the (2,2)-Shor code.
inline double p_enc(double p0_val) {
    if (!(p0_val >= 0 && p0_val <= 1)) {
        throw DomainError("p_enc needs p0 in [0,1]");
    }
    double a = 1 - (1 - p0_val) * (1 - p0_val);
    double b = 1 - p0_val * p0_val;
    return (a * a + 1 - b * b) / 2;
}

struct BoostingLevel {
    int ancilla_photons;
    double p_fail;
    /// Photons whose loss spoils the fusion (two inputs plus ancillas).
    int photons_per_fusion() const {
        return ancilla_photons + 2;
    }
};

inline BoostingLevel boosting_photons(int n_level) {
    if (n_level < 1) {
        throw DomainError("boosting level must be >= 1");
    }
    return {(1 << n_level) - 2, std::ldexp(1.0, -n_level)};
}

struct FusionOutcomeDistribution {
    double success;
    double failure_x;  ///< failed, XX outcome kept
    double failure_z;  ///< failed, ZZ outcome kept
    double no_info;    ///< at least one photon lost

    double sum() const {
        return success + failure_x + failure_z + no_info;
    }
    /// Probability that a given one of the two outcomes is missing.
    double marginal_erasure() const {
        return failure_z + no_info;
    }
};

/// Outcome classes of a fusion boosted to p_fail = 1/4 (four photons).
inline FusionOutcomeDistribution fusion_outcome_distribution(double eta) {
    if (!(eta >= 0 && eta <= 1)) {
        throw DomainError("eta must lie in [0,1]");
    }
    double e4 = eta * eta * eta * eta;
    return {3 * e4 / 4, e4 / 8, e4 / 8, 1 - e4};
}

inline double effective_erasure(const LinearOpticalParams &params) {
    params.validate();
    double v = p0(params.p_fail, params.eta());
    return params.encoded ? p_enc(v) : v;
}

/// Per-photon loss at which the effective erasure reaches the threshold.
inline double loss_threshold(double p_fail, double p_erasure_star, bool encoded) {
    auto at = [&](double loss) { return effective_erasure({p_fail, loss, encoded}); };
    if (at(0) >= p_erasure_star) {
        throw NoSolution("zero-loss erasure " + std::to_string(at(0)) + " already exceeds " +
                         std::to_string(p_erasure_star));
    }
    double lo = 0, hi = 1 - 1e-15;
    while (hi - lo > 1e-10) {
        double mid = 0.5 * (lo + hi);
        (at(mid) < p_erasure_star ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Largest p_fail tolerated at zero loss (bisection on p_fail).
inline double failure_threshold(double p_erasure_star, bool encoded) {
    auto at = [&](double pf) { return effective_erasure({pf, 0, encoded}); };
    if (at(1) <= p_erasure_star) {
        return 1;
    }
    double lo = 1e-12, hi = 1;
    while (hi - lo > 1e-10) {
        double mid = 0.5 * (lo + hi);
        (at(mid) < p_erasure_star ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace fbqc
