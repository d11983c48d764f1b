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


#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "fbqc/montecarlo.hpp"

using namespace fbqc;

TEST(RunPoint, Extremes) {
    LatticeContext ctx(LatticeKind::SixRing, 8);
    EXPECT_EQ(run_point(ctx, {0, 0}, 500, 1).failures, 0u);
    EXPECT_GT(run_point(ctx, {0.20, 0}, 1000, 2).rate(), 0.4);
    EXPECT_LT(run_point(ctx, {0.06, 0}, 1000, 3).rate(), 0.05);
    EXPECT_THROW(run_point(ctx, {1.5, 0}, 10, 1), DomainError);
}

TEST(RunPoint, WorkerCountAndReplayInvariance) {
    LatticeContext ctx(LatticeKind::FourStar, 4);
    HardwareAgnosticParams params{0.05, 0.006};
    auto one = run_point(ctx, params, 3000, 17, 1);
    for (int w : {2, 3, 8}) {
        auto many = run_point(ctx, params, 3000, 17, w);
        EXPECT_EQ(many.failures, one.failures) << w << " workers";
        EXPECT_EQ(many.trials, 3000u);
    }
    EXPECT_EQ(run_point(ctx, params, 3000, 17, 1).failures, one.failures);
    EXPECT_NE(run_point(ctx, params, 3000, 18, 1).failures, one.failures);
}

TEST(RunPoint, WilsonInterval) {
    auto [lo, hi] = wilson_interval(0, 100);
    EXPECT_EQ(lo, 0);
    EXPECT_NEAR(hi, 0.0370, 1e-4);
    auto [l2, h2] = wilson_interval(50, 100);
    EXPECT_NEAR(l2, 0.4038, 1e-4);
    EXPECT_NEAR(h2, 0.5962, 1e-4);
    auto [l3, h3] = wilson_interval(100, 100);
    EXPECT_NEAR(l3, 0.9630, 1e-4);
    EXPECT_NEAR(h3, 1, 1e-12);
}

TEST(RunPoint, SeedsDependOnEveryParameter) {
    auto s = point_seed(1, LatticeKind::SixRing, 8, 0.1, 0);
    EXPECT_NE(s, point_seed(2, LatticeKind::SixRing, 8, 0.1, 0));
    EXPECT_NE(s, point_seed(1, LatticeKind::FourStar, 8, 0.1, 0));
    EXPECT_NE(s, point_seed(1, LatticeKind::SixRing, 10, 0.1, 0));
    EXPECT_NE(s, point_seed(1, LatticeKind::SixRing, 8, 0.1000001, 0));
    EXPECT_NE(s, point_seed(1, LatticeKind::SixRing, 8, 0.1, 1e-9));
}

TEST(Fit, RecoversSyntheticBetaCdf) {
    BetaCdfFit truth;
    truth.y0 = 0.01;
    truth.y1 = 0.75;
    truth.a = 0.05;
    truth.b = 0.2;
    truth.alpha = 3;
    truth.beta = 2.5;
    std::mt19937_64 rng(12);
    const std::uint64_t n = 15000;
    std::vector<RatePoint> pts;
    for (double x : linspace(0.08, 0.16, 9)) {
        std::binomial_distribution<std::uint64_t> bin(n, truth(x));
        pts.push_back({x, bin(rng), n});
    }
    auto fit = fit_beta_cdf(pts);
    for (const auto &p : pts) {
        double r = truth(p.x);
        double sd = std::sqrt(r * (1 - r) / n);
        EXPECT_NEAR(fit(p.x), r, 3 * sd) << "x " << p.x;
    }
    // Residuals within binomial noise: chi-square per degree of freedom ~ 1.
    EXPECT_LT(fit.chi2 / 3, 4);
    EXPECT_EQ(fit.residuals.size(), pts.size());
}

TEST(Fit, DegenerateAndTooFewPoints) {
    std::vector<RatePoint> flat;
    for (double x : linspace(0.1, 0.2, 6)) {
        flat.push_back({x, 300, 1000});
    }
    EXPECT_THROW(fit_beta_cdf(flat), FitFailed);
    EXPECT_THROW(fit_beta_cdf({{0.1, 1, 10}, {0.2, 5, 10}, {0.3, 9, 10}}), FitFailed);
}

TEST(Fit, CrossingOfSyntheticFamily) {
    // Curves pivoting around x = 0.12 with slope growing in L.
    std::vector<BetaCdfFit> fits;
    for (double s : {1.0, 1.5, 2.0}) {
        BetaCdfFit f;
        f.y0 = 0;
        f.y1 = 1;
        f.a = 0.12 - 0.05 / s;
        f.b = 0.12 + 0.05 / s;
        f.alpha = f.beta = 3;
        fits.push_back(f);
    }
    auto c = find_crossing(fits, 0.08, 0.16);
    EXPECT_NEAR(c.x_star, 0.12, 1e-6);
    EXPECT_LT(c.uncertainty, 1e-6);
    EXPECT_EQ(c.pair_crossings.size(), 3u);
    // Parallel curves never cross.
    BetaCdfFit shifted = fits[0];
    shifted.a += 0.01;
    shifted.b += 0.01;
    EXPECT_THROW(find_crossing({fits[0], shifted}, 0.08, 0.16), NoCrossing);
}

TEST(Sweep, MixedRayCurvesSteepenWithSize) {
    // Small-scale version of the mixed erasure/Pauli ray used for the 6-ring.
    SweepSpec spec;
    spec.kind = LatticeKind::SixRing;
    spec.sizes = {4, 6};
    spec.c_erasure = 0.0599358;
    spec.c_error = 0.00529835;
    spec.x_values = linspace(0.6, 1.6, 6);
    spec.trials_per_point = 1500;
    auto pts = run_sweep(spec);
    ASSERT_EQ(pts.size(), 12u);
    auto est = find_threshold(spec, pts);
    ASSERT_EQ(est.fits.size(), 2u);
    for (const auto &f : est.fits) {
        for (double x = 0.6; x < 1.6; x += 0.01) {
            ASSERT_LE(f(x), f(x + 0.01) + 1e-12);
        }
    }
    const double h = 1e-3, x = est.x_star;
    double slope_small = (est.fits[0](x + h) - est.fits[0](x - h)) / (2 * h);
    double slope_large = (est.fits[1](x + h) - est.fits[1](x - h)) / (2 * h);
    EXPECT_GT(slope_large, slope_small);
    EXPECT_GT(x, 0.6);
    EXPECT_LT(x, 1.6);
}

TEST(Sweep, CsvOutputsAreReproducible) {
    SweepSpec spec;
    spec.kind = LatticeKind::FourStar;
    spec.sizes = {3, 4};
    spec.x_values = linspace(0.04, 0.1, 4);
    spec.trials_per_point = 400;
    spec.master_seed = 5;
    auto csv = [&](int workers) {
        spec.workers = workers;
        std::ostringstream out;
        write_points_csv(out, run_sweep(spec));
        return out.str();
    };
    std::string a = csv(1);
    EXPECT_EQ(a, csv(8));
    EXPECT_EQ(a.substr(0, a.find('\n')), "kind,L,x,p_erasure,p_error,trials,failures,rate,ci_lo,ci_hi");
    EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 9);
    spec.x_values.clear();
    EXPECT_THROW(spec.validate(), std::invalid_argument);
    spec.x_values = {0.1};
    spec.c_erasure = 0;
    EXPECT_THROW(spec.validate(), std::invalid_argument);
}

TEST(LossCurve, EncodedSixRing) {
    auto curve = loss_failure_curve(0.1198, true, {0.5, 0.432, 0.25, 0.125, 0.0625});
    EXPECT_EQ(curve[0].second, 0);
    EXPECT_NEAR(curve[1].second, 0, 2e-3);
    EXPECT_NEAR(curve[2].second, 0.027, 0.002);
    EXPECT_GT(curve[2].second, 0);
    for (const auto &[pf, loss] : curve) {
        EXPECT_GE(loss, 0);
    }
    // Unencoded: p0(1/4, 1) = 0.125 exceeds both marginal thresholds.
    EXPECT_EQ(loss_failure_curve(0.0690, false, {0.25})[0].second, 0);
    EXPECT_EQ(loss_failure_curve(0.1198, false, {0.25})[0].second, 0);
}

TEST(Region, AxisRaysUseMarginalCoefficients) {
    RegionSpec rs;
    rs.kind = LatticeKind::SixRing;
    rs.angles = {0, std::acos(-1.0) / 2};
    rs.sizes = {4, 6};
    rs.trials_per_point = 1500;
    rs.points_per_ray = 7;
    rs.half_width = 0.5;
    auto ests = trace_correctable_region(rs);
    ASSERT_EQ(ests.size(), 2u);
    EXPECT_EQ(ests[0].c_error, 0);
    EXPECT_EQ(ests[1].c_erasure, 0);
    EXPECT_EQ(ests[0].c_erasure, 1);
    EXPECT_EQ(ests[1].c_error, 1);
    // Small lattices drift, but the crossings stay near the marginal thresholds.
    EXPECT_NEAR(ests[0].p_erasure_star(), 0.12, 0.04);
    EXPECT_NEAR(ests[1].p_error_star(), 0.011, 0.004);
}
