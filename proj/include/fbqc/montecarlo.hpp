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
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "fbqc/decoder.hpp"
#include "fbqc/fit.hpp"
#include "fbqc/network.hpp"

namespace fbqc {

/// Wilson score interval for k successes in n trials.
inline std::pair<double, double> wilson_interval(std::uint64_t k, std::uint64_t n, double z = 1.959963984540054) {
    if (n == 0) {
        return {0.0, 1.0};
    }
    double p = double(k) / double(n), nn = double(n);
    double denom = 1 + z * z / nn;
    double centre = (p + z * z / (2 * nn)) / denom;
    double half = z * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn)) / denom;
    // The bounds are exactly 0 and 1 at k = 0 and k = n; avoid rounding residue.
    return {k == 0 ? 0.0 : std::max(0.0, centre - half), k == n ? 1.0 : std::min(1.0, centre + half)};
}

inline FusionNetwork build_lattice(LatticeKind kind, int L) {
    return kind == LatticeKind::FourStar ? build_4star(L, true) : build_6ring(L, true);
}

/// Immutable per-lattice decoding data shared by all workers.
struct LatticeContext {
    LatticeKind kind;
    int L;
    std::pair<SyndromeGraph, SyndromeGraph> graphs;
    std::unique_ptr<std::pair<DistanceTable, DistanceTable>> tables;

    LatticeContext(LatticeKind k, int size, bool with_tables = true)
        : kind(k), L(size), graphs(derive_syndrome_graphs(build_lattice(k, size))) {
        // Tables cost 2 bytes per vertex pair; skip them for very large lattices.
        if (with_tables && graphs.first.num_vertices() <= 12000) {
            tables = std::make_unique<std::pair<DistanceTable, DistanceTable>>(DistanceTable(graphs.first),
                                                                               DistanceTable(graphs.second));
        }
    }
};

struct CurvePoint {
    LatticeKind kind = LatticeKind::SixRing;
    int L = 0;
    double x = 0;
    double p_erasure = 0;
    double p_error = 0;
    std::uint64_t trials = 0;
    std::uint64_t failures = 0;

    double rate() const {
        return trials ? double(failures) / double(trials) : 0.0;
    }
    std::pair<double, double> ci() const {
        return wilson_interval(failures, trials);
    }
};

/// Seed of one sweep point, independent of scheduling and point order.
inline std::uint64_t point_seed(std::uint64_t master, LatticeKind kind, int L, double p_erasure, double p_error) {
    std::uint64_t a, b;
    std::memcpy(&a, &p_erasure, sizeof a);
    std::memcpy(&b, &p_error, sizeof b);
    std::uint64_t h = CounterRng::mix(master ^ 0x5bd1e995);
    h = CounterRng::mix(h ^ (static_cast<std::uint64_t>(kind) + 1));
    h = CounterRng::mix(h ^ static_cast<std::uint64_t>(L));
    h = CounterRng::mix(h ^ a);
    return CounterRng::mix(h ^ b);
}

/// Counts trials with any logical failure. Trials are split statically over
/// `workers` threads; the result does not depend on the worker count.
inline CurvePoint run_point(const LatticeContext &ctx, const HardwareAgnosticParams &params, std::uint64_t trials,
                            std::uint64_t seed, int workers = 1) {
    params.validate();
    workers = std::max(1, workers);
    std::vector<std::uint64_t> counts(workers, 0);
    auto work = [&](int w) {
        NetworkDecoder nd(ctx.graphs, ctx.tables.get());
        std::uint64_t c = 0;
        for (std::uint64_t t = w; t < trials; t += workers) {
            c += nd.run_trial(params, seed, t) ? 1 : 0;
        }
        counts[w] = c;
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; w++) {
            pool.emplace_back(work, w);
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    CurvePoint p;
    p.kind = ctx.kind;
    p.L = ctx.L;
    p.p_erasure = params.p_erasure;
    p.p_error = params.p_error;
    p.trials = trials;
    for (auto c : counts) {
        p.failures += c;
    }
    return p;
}

struct SweepSpec {
    LatticeKind kind = LatticeKind::SixRing;
    std::vector<int> sizes{8, 10, 12};
    double c_erasure = 1;
    double c_error = 0;
    std::vector<double> x_values;
    std::uint64_t trials_per_point = 15000;
    std::uint64_t master_seed = 1;
    int workers = 1;

    void validate() const {
        if (sizes.empty()) {
            throw std::invalid_argument("sweep needs at least one size");
        }
        for (int L : sizes) {
            if (L < 2) {
                throw std::invalid_argument("sizes must be >= 2");
            }
        }
        if (trials_per_point < 1) {
            throw std::invalid_argument("trials_per_point must be >= 1");
        }
        if (c_erasure < 0 || c_error < 0 || (c_erasure == 0 && c_error == 0)) {
            throw std::invalid_argument("ray coefficients must be >= 0 and not both 0");
        }
        if (x_values.empty()) {
            throw std::invalid_argument("sweep needs x values");
        }
        for (double x : x_values) {
            if (x < 0 || c_erasure * x > 1 || c_error * x > 1) {
                throw std::invalid_argument("x values must keep probabilities in [0, 1]");
            }
        }
    }
};

/// Evenly spaced values lo..hi inclusive.
inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; i++) {
        v.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    }
    return v;
}

using ProgressFn = std::function<void(const CurvePoint &)>;

inline std::vector<CurvePoint> run_sweep(const SweepSpec &spec, const ProgressFn &progress = nullptr) {
    spec.validate();
    std::vector<CurvePoint> out;
    for (int L : spec.sizes) {
        LatticeContext ctx(spec.kind, L);
        for (double x : spec.x_values) {
            HardwareAgnosticParams params{spec.c_erasure * x, spec.c_error * x};
            CurvePoint p = run_point(ctx, params, spec.trials_per_point,
                                     point_seed(spec.master_seed, spec.kind, L, params.p_erasure, params.p_error),
                                     spec.workers);
            p.x = x;
            out.push_back(p);
            if (progress) {
                progress(p);
            }
        }
    }
    return out;
}

struct ThresholdEstimate {
    LatticeKind kind = LatticeKind::SixRing;
    double c_erasure = 0;
    double c_error = 0;
    double x_star = 0;
    double uncertainty = 0;
    std::vector<int> sizes;
    std::vector<BetaCdfFit> fits;
    std::vector<double> pair_crossings;

    double p_erasure_star() const {
        return c_erasure * x_star;
    }
    double p_error_star() const {
        return c_error * x_star;
    }
};

/// Fits each size's curve and intersects them.
inline ThresholdEstimate find_threshold(const SweepSpec &spec, const std::vector<CurvePoint> &points) {
    ThresholdEstimate est;
    est.kind = spec.kind;
    est.c_erasure = spec.c_erasure;
    est.c_error = spec.c_error;
    double lo = 1e300, hi = -1e300;
    for (int L : spec.sizes) {
        std::vector<RatePoint> rp;
        for (const auto &p : points) {
            if (p.L == L) {
                rp.push_back({p.x, p.failures, p.trials});
                lo = std::min(lo, p.x);
                hi = std::max(hi, p.x);
            }
        }
        try {
            est.fits.push_back(fit_beta_cdf(rp));
            est.sizes.push_back(L);
        } catch (const FitFailed &) {
            // Reported by the caller through the missing size.
        }
    }
    auto c = find_crossing(est.fits, lo, hi);
    est.x_star = c.x_star;
    est.uncertainty = c.uncertainty;
    est.pair_crossings = c.pair_crossings;
    return est;
}

inline std::string format_double(double v, int digits = 10) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

inline void write_points_csv(std::ostream &out, const std::vector<CurvePoint> &points) {
    out << "kind,L,x,p_erasure,p_error,trials,failures,rate,ci_lo,ci_hi\n";
    for (const auto &p : points) {
        auto [lo, hi] = p.ci();
        out << to_string(p.kind) << "," << p.L << "," << format_double(p.x) << "," << format_double(p.p_erasure)
            << "," << format_double(p.p_error) << "," << p.trials << "," << p.failures << ","
            << format_double(p.rate()) << "," << format_double(lo) << "," << format_double(hi) << "\n";
    }
}

inline void write_threshold_csv(std::ostream &out, const std::vector<ThresholdEstimate> &ests) {
    out << "kind,c_erasure,c_error,x_star,p_erasure_star,p_error_star,uncertainty\n";
    for (const auto &e : ests) {
        out << to_string(e.kind) << "," << format_double(e.c_erasure) << "," << format_double(e.c_error) << ","
            << format_double(e.x_star) << "," << format_double(e.p_erasure_star()) << ","
            << format_double(e.p_error_star()) << "," << format_double(e.uncertainty) << "\n";
    }
}

/// Two-column "x rate" series for one size.
inline void write_series(std::ostream &out, const std::vector<CurvePoint> &points, int L) {
    for (const auto &p : points) {
        if (p.L == L) {
            out << format_double(p.x) << " " << format_double(p.rate()) << "\n";
        }
    }
}

/// Phase-boundary points along rays (cos t, sin t) of the (p_erasure,
/// p_error) plane. x ranges are centred on the straight line between the
/// given marginal thresholds.
struct RegionSpec {
    LatticeKind kind = LatticeKind::SixRing;
    std::vector<double> angles;  ///< radians in [0, pi/2]
    std::vector<int> sizes{8, 10, 12};
    std::uint64_t trials_per_point = 15000;
    std::uint64_t master_seed = 1;
    int workers = 1;
    double erasure_guess = 0.12;
    double error_guess = 0.011;
    int points_per_ray = 9;
    double half_width = 0.25;
};

inline std::vector<ThresholdEstimate> trace_correctable_region(const RegionSpec &rs,
                                                               const ProgressFn &progress = nullptr) {
    std::vector<ThresholdEstimate> out;
    for (double t : rs.angles) {
        double ce = std::cos(t), cp = std::sin(t);
        if (std::abs(ce) < 1e-12) {
            ce = 0;
        }
        if (std::abs(cp) < 1e-12) {
            cp = 0;
        }
        double guess = 1 / (ce / rs.erasure_guess + cp / rs.error_guess);
        SweepSpec s;
        s.kind = rs.kind;
        s.sizes = rs.sizes;
        s.c_erasure = ce;
        s.c_error = cp;
        s.x_values = linspace(guess * (1 - rs.half_width), guess * (1 + rs.half_width), rs.points_per_ray);
        s.trials_per_point = rs.trials_per_point;
        s.master_seed = rs.master_seed;
        s.workers = rs.workers;
        auto pts = run_sweep(s, progress);
        out.push_back(find_threshold(s, pts));
    }
    return out;
}

/// (p_fail, p_loss*) along a p_fail grid; p_loss* = 0 where no loss is tolerable.
inline std::vector<std::pair<double, double>> loss_failure_curve(double p_erasure_star, bool encoded,
                                                                 const std::vector<double> &p_fail_grid) {
    std::vector<std::pair<double, double>> out;
    for (double pf : p_fail_grid) {
        double loss = 0;
        try {
            loss = loss_threshold(pf, p_erasure_star, encoded);
        } catch (const NoSolution &) {
            loss = 0;
        }
        out.push_back({pf, loss});
    }
    return out;
}

}  // namespace fbqc
