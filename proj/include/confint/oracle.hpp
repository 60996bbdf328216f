#pragma once

// Verification machinery, independent of the candidate solver: dense grid
// optimization over the feasible set, constructive synthesis of datasets
// realizing a prescribed sensitivity tuple, and a least-squares cross-check
// of the adjusted-slope formula.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "confint/core.hpp"
#include "confint/errors.hpp"
#include "confint/types.hpp"

namespace confint {

struct GridConfig {
    int resolution = 201; // nodes per axis, both endpoints included
    double tol = kFeasTol;
};

struct GridResult {
    ConfoundingInterval interval; // witnesses are lattice nodes
    std::size_t feasible_count = 0;
};

namespace detail {

inline double grid_node(double lo, double hi, int i, int res) {
    if (i == res - 1) return hi; // box corners are always probed exactly
    return lo + (hi - lo) * double(i) / double(res - 1);
}

} // namespace detail

// Brute-force interval over the lattice of the box. For fixed (R^2_wx, R^2_wy)
// beta is linear in rho_hxhy and the feasible rho nodes form one contiguous
// index range, so only the two extreme feasible nodes of each slab need
// evaluating; the index range is located arithmetically and then refined with
// the exact per-node feasibility predicate, which keeps the result identical
// to the full triple loop.
inline GridResult grid_min_max(const SummaryStats& s, const BoundSpec& b,
                               const GridConfig& cfg = {}) {
    validate(s);
    validate(b);
    if (cfg.resolution < 2) throw domain_error("grid resolution must be at least 2");
    if (!(cfg.tol >= 0.0)) throw domain_error("grid tolerance must be nonnegative");

    const int res = cfg.resolution;
    const double rho_step = (b.rho_hi - b.rho_lo) / double(res - 1);
    GridResult out;
    bool first = true;

    const auto rho_node = [&](int k) { return detail::grid_node(b.rho_lo, b.rho_hi, k, res); };

    for (int i = 0; i < res; ++i) {
        const double r2x = detail::grid_node(b.r2x_lo, b.r2x_hi, i, res);
        for (int j = 0; j < res; ++j) {
            const double r2y = detail::grid_node(b.r2y_lo, b.r2y_hi, j, res);
            const auto band = detail::alpha_band(s, r2x, r2y);
            int klo = 0, khi = res - 1;
            if (!band.vacuous) {
                const double lo_edge = band.lo - cfg.tol;
                const double hi_edge = band.hi + cfg.tol;
                const auto ok = [&](int k) {
                    const double r = rho_node(k);
                    return r >= lo_edge && r <= hi_edge;
                };
                if (rho_step == 0.0) {
                    if (!ok(0)) continue;
                } else {
                    if (lo_edge > b.rho_hi || hi_edge < b.rho_lo) continue;
                    int k0 = int(std::ceil((lo_edge - b.rho_lo) / rho_step));
                    int k1 = int(std::floor((hi_edge - b.rho_lo) / rho_step));
                    k0 = std::clamp(k0, 0, res - 1);
                    k1 = std::clamp(k1, 0, res - 1);
                    // refine: the arithmetic guess is within a couple of nodes
                    klo = -1;
                    for (int k = std::max(0, k0 - 2); k <= std::min(res - 1, k0 + 2); ++k)
                        if (ok(k)) { klo = k; break; }
                    khi = -1;
                    for (int k = std::min(res - 1, k1 + 2); k >= std::max(0, k1 - 2); --k)
                        if (ok(k)) { khi = k; break; }
                    if (klo < 0 || khi < 0 || klo > khi) continue;
                }
            }
            out.feasible_count += std::size_t(khi - klo + 1);
            for (int k : {klo, khi}) {
                const SensitivityTuple t{r2x, r2y, rho_node(k)};
                const double v = beta_adjusted(s, t);
                if (first || v < out.interval.lower) {
                    out.interval.lower = v;
                    out.interval.argmin = t;
                }
                if (first || v > out.interval.upper) {
                    out.interval.upper = v;
                    out.interval.argmax = t;
                }
                first = false;
            }
        }
    }
    if (out.feasible_count == 0)
        throw empty_feasible_set("no lattice node satisfies the bounds");
    return out;
}

// Builds columns (x, y, w_1..w_p) whose summary statistics reproduce the
// requested (stats, tuple) exactly up to rounding. Construction: an
// orthonormal frame containing the normalized ones vector; fitted directions
// placed in the w-span with inner product rho_hxhy and squared-norm fractions
// R^2_wx, R^2_wy; residual directions orthogonal to the span with the partial
// correlation implied by the decomposition identity; w is a seed-randomized
// basis of the chosen span. sigma_x is 1 by construction.
inline Dataset synthesize_data(const SummaryStats& s, const SensitivityTuple& t,
                               int n, int p, std::uint64_t seed) {
    validate(s);
    validate(t);
    if (p < 0) throw domain_error("synthesize_data: p must be nonnegative");
    if (n <= p + 2) throw domain_error("synthesize_data: need n > p + 2");

    double rho_res = residual_correlation(s, t);
    if (std::fabs(rho_res) > 1.0 + 1e-12)
        throw infeasible_tuple_error(
            "tuple is not realizable: implied residual correlation " +
            std::to_string(rho_res) + " lies outside [-1, 1]");
    rho_res = std::clamp(rho_res, -1.0, 1.0);
    if (p == 0 && (t.r2wx > 0.0 || t.r2wy > 0.0))
        throw infeasible_tuple_error("p = 0 admits only R^2 = 0");
    if (p == 1 && t.r2wx > 0.0 && t.r2wy > 0.0 && std::fabs(t.rho_hxhy) != 1.0)
        throw infeasible_tuple_error(
            "p = 1 collapses both fitted vectors onto one direction; only "
            "rho_hxhy = +-1 is realizable when both R^2 are positive");

    std::mt19937_64 gen(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int span = p + 2; // w-span plus two residual directions

    Eigen::MatrixXd frame;
    for (;;) {
        Eigen::MatrixXd m(n, span + 1);
        m.col(0).setOnes();
        for (int c = 1; c <= span; ++c)
            for (int r = 0; r < n; ++r) m(r, c) = gauss(gen);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
        if (qr.rank() < span + 1) continue; // a zero-probability redraw
        frame = Eigen::HouseholderQR<Eigen::MatrixXd>(m).householderQ() *
                Eigen::MatrixXd::Identity(n, span + 1);
        break;
    }
    const auto u = [&](int i) { return frame.col(1 + i); }; // orthonormal, mean zero

    const double rwx = std::sqrt(t.r2wx);
    const double rwy = std::sqrt(t.r2wy);
    Eigen::VectorXd xhat_dir = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd yhat_dir = Eigen::VectorXd::Zero(n);
    if (p >= 2) {
        xhat_dir = u(0);
        yhat_dir = t.rho_hxhy * u(0) +
                   std::sqrt(std::max(0.0, 1.0 - t.rho_hxhy * t.rho_hxhy)) * u(1);
    } else if (p == 1) {
        xhat_dir = u(0);
        yhat_dir = (t.rho_hxhy < 0.0 ? -1.0 : 1.0) * u(0);
    }
    const Eigen::VectorXd xres_dir = u(p);
    const Eigen::VectorXd yres_dir =
        rho_res * u(p) + std::sqrt(std::max(0.0, 1.0 - rho_res * rho_res)) * u(p + 1);

    const double scale = std::sqrt(double(n));
    Dataset d;
    d.x = scale * (rwx * xhat_dir + std::sqrt(1.0 - t.r2wx) * xres_dir);
    d.y = s.sigma_ratio * scale * (rwy * yhat_dir + std::sqrt(1.0 - t.r2wy) * yres_dir);
    d.x.array() += 2.0 * gauss(gen);
    d.y.array() += 2.0 * gauss(gen);

    d.w.resize(n, p);
    if (p > 0) {
        Eigen::MatrixXd mix(p, p);
        for (;;) {
            for (int r = 0; r < p; ++r)
                for (int c = 0; c < p; ++c) mix(r, c) = gauss(gen);
            if (Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(mix).rank() == p) break;
        }
        d.w = frame.middleCols(1, p) * mix;
        for (int c = 0; c < p; ++c) d.w.col(c).array() += 2.0 * gauss(gen);
    }
    return d;
}

// Coefficient on x from the least-squares regression of y on
// (intercept, x, w), via column-pivoted orthogonal decomposition.
inline double ols_beta(const Dataset& d) {
    const Eigen::Index n = d.rows();
    const Eigen::Index p = d.confounders();
    if (d.y.size() != n || (p > 0 && d.w.rows() != n))
        throw domain_error("ols_beta: columns have mismatched lengths");
    Eigen::MatrixXd design(n, p + 2);
    design.col(0).setOnes();
    design.col(1) = d.x;
    if (p > 0) design.rightCols(p) = d.w;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-10);
    if (qr.rank() < p + 2)
        throw rank_error("ols_beta: design [1 | x | w] is rank deficient");
    const Eigen::VectorXd coef = qr.solve(d.y);
    return coef(1);
}

struct Prop1Report {
    double ols_slope = 0.0;
    double formula_slope = 0.0;
    double abs_diff = 0.0;
};

// End-to-end identity check: synthesize a dataset for the tuple and compare
// the regression coefficient against the closed-form adjusted slope.
inline Prop1Report verify_prop1(const SummaryStats& s, const SensitivityTuple& t,
                                int n, int p, std::uint64_t seed) {
    const Dataset d = synthesize_data(s, t, n, p, seed);
    Prop1Report rep;
    rep.ols_slope = ols_beta(d);
    rep.formula_slope = beta_adjusted(s, t);
    rep.abs_diff = std::fabs(rep.ols_slope - rep.formula_slope);
    return rep;
}

} // namespace confint
