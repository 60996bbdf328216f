#pragma once

// Shared generators and reference implementations for the test suites. The
// naive grid here stays deliberately dumb so it can vouch for the optimized
// library version.

#include <cmath>
#include <random>

#include "confint/confint.hpp"

namespace testutil {

using confint::BoundSpec;
using confint::Dataset;
using confint::SensitivityTuple;
using confint::SummaryStats;

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline SummaryStats random_stats(std::mt19937_64& g, double rho_cap = 0.9,
                                 double ratio_lo = 0.5, double ratio_hi = 5.0) {
    return {uniform(g, -rho_cap, rho_cap), uniform(g, ratio_lo, ratio_hi)};
}

inline BoundSpec random_box(std::mt19937_64& g, double r2_cap = 0.95) {
    auto sorted_pair = [&](double lo, double hi) {
        double a = uniform(g, lo, hi), b = uniform(g, lo, hi);
        return a <= b ? std::pair{a, b} : std::pair{b, a};
    };
    BoundSpec b;
    std::tie(b.r2x_lo, b.r2x_hi) = sorted_pair(0.0, r2_cap);
    std::tie(b.r2y_lo, b.r2y_hi) = sorted_pair(0.0, r2_cap);
    std::tie(b.rho_lo, b.rho_hi) = sorted_pair(-1.0, 1.0);
    return b;
}

// A spec whose feasible set is provably nonempty (retries until the solver
// accepts it).
inline std::pair<SummaryStats, BoundSpec> random_feasible_spec(std::mt19937_64& g,
                                                               double r2_cap = 0.95) {
    for (;;) {
        const SummaryStats s = random_stats(g, 0.949, 1.0, 1.0);
        const BoundSpec b = random_box(g, r2_cap);
        try {
            confint::solve_interval(s, b);
            return {s, b};
        } catch (const confint::empty_feasible_set&) {
        }
    }
}

// Random tuple inside the realizability band for the given stats. For p == 1
// only rho_hxhy = +-1 is realizable when both R^2 are positive, so the rho
// component is pinned to a band-compatible sign.
inline SensitivityTuple random_feasible_tuple(std::mt19937_64& g, const SummaryStats& s,
                                              int p = 2, double r2_lo = 0.01,
                                              double r2_hi = 0.9) {
    for (;;) {
        SensitivityTuple t;
        t.r2wx = uniform(g, r2_lo, r2_hi);
        t.r2wy = uniform(g, r2_lo, r2_hi);
        const auto range = confint::feasible_rho_range(s, t.r2wx, t.r2wy);
        if (range.empty()) continue;
        if (p == 1) {
            if (range.hi >= 1.0) t.rho_hxhy = 1.0;
            else if (range.lo <= -1.0) t.rho_hxhy = -1.0;
            else continue;
        } else {
            t.rho_hxhy = uniform(g, range.lo, range.hi);
        }
        return t;
    }
}

// Full triple loop over the lattice; the library's slab-reduced version must
// match this bit for bit.
struct NaiveGrid {
    double lower, upper;
    std::size_t count;
};

inline NaiveGrid grid_naive(const SummaryStats& s, const BoundSpec& b, int res,
                            double tol = confint::kFeasTol) {
    auto node = [&](double lo, double hi, int i) {
        return i == res - 1 ? hi : lo + (hi - lo) * double(i) / double(res - 1);
    };
    NaiveGrid out{0, 0, 0};
    bool first = true;
    for (int i = 0; i < res; ++i)
        for (int j = 0; j < res; ++j)
            for (int k = 0; k < res; ++k) {
                const SensitivityTuple t{node(b.r2x_lo, b.r2x_hi, i),
                                         node(b.r2y_lo, b.r2y_hi, j),
                                         node(b.rho_lo, b.rho_hi, k)};
                if (!confint::is_feasible(s, b, t, tol)) continue;
                ++out.count;
                const double v = confint::beta_adjusted(s, t);
                if (first || v < out.lower) out.lower = v;
                if (first || v > out.upper) out.upper = v;
                first = false;
            }
    return out;
}

} // namespace testutil
