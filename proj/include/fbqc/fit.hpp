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
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

namespace fbqc {

struct FitFailed : std::runtime_error {
    explicit FitFailed(const std::string &what) : std::runtime_error(what) {
    }
};

/// Binomial observation at one sweep value.
struct RatePoint {
    double x;
    std::uint64_t failures;
    std::uint64_t trials;
    double rate() const {
        return trials ? double(failures) / double(trials) : 0.0;
    }
};

/// rate(x) = y0 + (y1 - y0) * I_z(alpha, beta), z = (x - a) / (b - a) clamped to [0, 1].
struct BetaCdfFit {
    double y0 = 0, y1 = 1, a = 0, b = 1, alpha = 1, beta = 1;
    /// Weighted sum of squared residuals (chi-square) and per-point residuals.
    double chi2 = 0;
    std::vector<double> residuals;

    double operator()(double x) const {
        double z = std::clamp((x - a) / (b - a), 0.0, 1.0);
        return y0 + (y1 - y0) * boost::math::ibeta(alpha, beta, z);
    }
};

/// Downhill simplex minimization; returns the best vertex found.
inline std::vector<double> nelder_mead(const std::function<double(const std::vector<double> &)> &f,
                                       std::vector<double> x0, double step, int max_iter, double tol) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> s(n + 1, x0);
    for (std::size_t i = 0; i < n; i++) {
        s[i + 1][i] += step;
    }
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; i++) {
        fv[i] = f(s[i]);
    }
    std::vector<std::size_t> idx(n + 1);
    for (int it = 0; it < max_iter; it++) {
        for (std::size_t i = 0; i <= n; i++) {
            idx[i] = i;
        }
        std::sort(idx.begin(), idx.end(), [&](std::size_t p, std::size_t q) { return fv[p] < fv[q]; });
        std::size_t best = idx[0], worst = idx[n], second = idx[n - 1];
        if (std::abs(fv[worst] - fv[best]) <= tol * (std::abs(fv[best]) + 1e-12)) {
            break;
        }
        std::vector<double> c(n, 0.0);
        for (std::size_t i = 0; i <= n; i++) {
            if (i != worst) {
                for (std::size_t k = 0; k < n; k++) {
                    c[k] += s[i][k] / n;
                }
            }
        }
        auto along = [&](double t) {
            std::vector<double> p(n);
            for (std::size_t k = 0; k < n; k++) {
                p[k] = c[k] + t * (s[worst][k] - c[k]);
            }
            return p;
        };
        auto xr = along(-1);
        double fr = f(xr);
        if (fr < fv[best]) {
            auto xe = along(-2);
            double fe = f(xe);
            if (fe < fr) {
                s[worst] = xe, fv[worst] = fe;
            } else {
                s[worst] = xr, fv[worst] = fr;
            }
        } else if (fr < fv[second]) {
            s[worst] = xr, fv[worst] = fr;
        } else {
            auto xc = fr < fv[worst] ? along(-0.5) : along(0.5);
            double fc = f(xc);
            if (fc < std::min(fr, fv[worst])) {
                s[worst] = xc, fv[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= n; i++) {
                    if (i != best) {
                        for (std::size_t k = 0; k < n; k++) {
                            s[i][k] = s[best][k] + 0.5 * (s[i][k] - s[best][k]);
                        }
                        fv[i] = f(s[i]);
                    }
                }
            }
        }
    }
    std::size_t best = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
    return s[best];
}

/// Weighted least-squares fit of the shifted, rescaled beta CDF.
inline BetaCdfFit fit_beta_cdf(std::vector<RatePoint> points) {
    if (points.size() < 4) {
        throw FitFailed("need at least 4 points");
    }
    std::sort(points.begin(), points.end(), [](const RatePoint &p, const RatePoint &q) { return p.x < q.x; });
    double xmin = points.front().x, xmax = points.back().x, span = xmax - xmin;
    double rmin = 1, rmax = 0, noise = 0;
    for (const auto &p : points) {
        rmin = std::min(rmin, p.rate());
        rmax = std::max(rmax, p.rate());
        noise = std::max(noise, std::sqrt((p.rate() * (1 - p.rate()) + 1.0 / p.trials) / p.trials));
    }
    if (span <= 0 || rmax - rmin <= 3 * noise) {
        throw FitFailed("degenerate data: rates do not vary beyond noise");
    }
    std::vector<double> w;
    for (const auto &p : points) {
        double r = p.rate();
        w.push_back(p.trials / (r * (1 - r) + 1.0 / p.trials));
    }
    auto sigmoid = [](double u) { return 1 / (1 + std::exp(-u)); };
    auto decode = [&](const std::vector<double> &u) {
        BetaCdfFit m;
        m.y0 = sigmoid(u[0]);
        m.y1 = m.y0 + (1 - m.y0) * sigmoid(u[1]);
        m.a = xmin - span * std::exp(u[2]);
        m.b = xmax + span * std::exp(u[3]);
        m.alpha = std::exp(std::clamp(u[4], -4.0, 6.0));
        m.beta = std::exp(std::clamp(u[5], -4.0, 6.0));
        return m;
    };
    auto objective = [&](const std::vector<double> &u) {
        BetaCdfFit m = decode(u);
        double s = 0;
        for (std::size_t i = 0; i < points.size(); i++) {
            double d = points[i].rate() - m(points[i].x);
            s += w[i] * d * d;
        }
        return std::isfinite(s) ? s : 1e300;
    };
    auto logit = [](double p) {
        p = std::clamp(p, 1e-6, 1 - 1e-6);
        return std::log(p / (1 - p));
    };
    double y0 = std::max(rmin * 0.5, 1e-5);
    double y1 = std::min(rmax + 0.5 * (1 - rmax), 0.999);
    std::vector<double> best;
    double best_val = 1e300;
    for (double la : {0.0, 1.0, 2.0}) {
        for (double lb : {0.0, 1.0, 2.0}) {
            std::vector<double> u0{logit(y0), logit((y1 - y0) / (1 - y0)), std::log(0.5), std::log(0.5), la, lb};
            auto u = nelder_mead(objective, u0, 0.5, 3000, 1e-12);
            u = nelder_mead(objective, u, 0.1, 3000, 1e-14);
            double v = objective(u);
            if (v < best_val) {
                best_val = v;
                best = u;
            }
        }
    }
    BetaCdfFit fit = decode(best);
    fit.chi2 = best_val;
    for (const auto &p : points) {
        fit.residuals.push_back(p.rate() - fit(p.x));
    }
    if (!std::isfinite(fit.chi2)) {
        throw FitFailed("fit did not converge");
    }
    return fit;
}

struct NoCrossing : std::runtime_error {
    explicit NoCrossing(const std::string &what) : std::runtime_error(what) {
    }
};

/// All x in [lo, hi] where f and g cross (grid scan plus bisection).
inline std::vector<double> crossings(const BetaCdfFit &f, const BetaCdfFit &g, double lo, double hi,
                                     int grid = 2000) {
    std::vector<double> out;
    auto diff = [&](double x) { return f(x) - g(x); };
    double prev_x = lo, prev = diff(lo);
    for (int i = 1; i <= grid; i++) {
        double x = lo + (hi - lo) * i / grid;
        double d = diff(x);
        if (prev == 0) {
            out.push_back(prev_x);
        } else if ((prev < 0) != (d < 0) && d != 0) {
            double a = prev_x, b = x, fa = prev;
            for (int k = 0; k < 80; k++) {
                double m = 0.5 * (a + b), fm = diff(m);
                if ((fa < 0) == (fm < 0)) {
                    a = m, fa = fm;
                } else {
                    b = m;
                }
            }
            out.push_back(0.5 * (a + b));
        }
        prev_x = x, prev = d;
    }
    return out;
}

struct CrossingEstimate {
    double x_star;
    double uncertainty;  ///< half the spread of the chosen pairwise crossings
    std::vector<double> pair_crossings;
};

/// Picks one crossing per pair of curves so that their spread is minimal.
inline CrossingEstimate find_crossing(const std::vector<BetaCdfFit> &fits, double lo, double hi) {
    if (fits.size() < 2) {
        throw NoCrossing("need curves for at least two sizes");
    }
    std::vector<std::vector<double>> cands;
    for (std::size_t i = 0; i < fits.size(); i++) {
        for (std::size_t j = i + 1; j < fits.size(); j++) {
            auto c = crossings(fits[i], fits[j], lo, hi);
            if (!c.empty()) {
                cands.push_back(std::move(c));
            }
        }
    }
    if (cands.empty()) {
        throw NoCrossing("fitted curves do not cross inside the swept range");
    }
    std::vector<std::size_t> pick(cands.size(), 0), best_pick;
    double best_spread = 1e300;
    while (true) {
        double mn = 1e300, mx = -1e300;
        for (std::size_t k = 0; k < cands.size(); k++) {
            mn = std::min(mn, cands[k][pick[k]]);
            mx = std::max(mx, cands[k][pick[k]]);
        }
        if (mx - mn < best_spread) {
            best_spread = mx - mn;
            best_pick = pick;
        }
        std::size_t k = 0;
        while (k < cands.size() && ++pick[k] == cands[k].size()) {
            pick[k++] = 0;
        }
        if (k == cands.size()) {
            break;
        }
    }
    CrossingEstimate est{0, best_spread / 2, {}};
    for (std::size_t k = 0; k < cands.size(); k++) {
        est.pair_crossings.push_back(cands[k][best_pick[k]]);
        est.x_star += cands[k][best_pick[k]] / cands.size();
    }
    return est;
}

}  // namespace fbqc
