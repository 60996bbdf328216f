#pragma once

// Formula kernel: the adjusted-slope formula, the realizability band for the
// fitted-value correlation, feasibility of sensitivity tuples, and summary
// statistics computed from raw data.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "confint/errors.hpp"
#include "confint/types.hpp"

namespace confint {

// Slope coefficient on x in the (unfittable) regression of y on x and the
// confounder set, expressed through the sensitivity tuple:
//
//   beta = (sigma_y/sigma_x) * (rho_xy - R_wx R_wy rho_hxhy) / (1 - R^2_wx)
inline double beta_adjusted(const SummaryStats& s, const SensitivityTuple& t) {
    if (!(t.r2wx < 1.0))
        throw domain_error("beta_adjusted requires r2wx < 1");
    const double rwx = std::sqrt(t.r2wx);
    const double rwy = std::sqrt(t.r2wy);
    return s.sigma_ratio * (s.rho_xy - rwx * rwy * t.rho_hxhy) / (1.0 - t.r2wx);
}

// Closed interval of rho_hxhy values; empty() when no value is admissible.
struct RhoRange {
    double lo = -1.0;
    double hi = 1.0;
    bool empty() const { return lo > hi; }
};

namespace detail {

// Unclipped band [alpha_minus, alpha_plus]; (-inf, +inf) when R_wx*R_wy = 0
// (the constraint is vacuous: beta does not depend on rho_hxhy there).
struct AlphaBand {
    double lo;
    double hi;
    bool vacuous;
};

inline AlphaBand alpha_band(const SummaryStats& s, double r2wx, double r2wy) {
    const double d = std::sqrt(r2wx) * std::sqrt(r2wy);
    if (d < 1e-150)
        return {-std::numeric_limits<double>::infinity(),
                std::numeric_limits<double>::infinity(), true};
    const double sres = std::sqrt(1.0 - r2wx) * std::sqrt(1.0 - r2wy);
    return {(s.rho_xy - sres) / d, (s.rho_xy + sres) / d, false};
}

} // namespace detail

// Range of fitted-value correlations consistent with some actual dataset,
// given the observed correlation and the two coefficients of determination.
inline RhoRange feasible_rho_range(const SummaryStats& s, double r2wx, double r2wy) {
    if (!(r2wx >= 0.0 && r2wx < 1.0) || !(r2wy >= 0.0 && r2wy < 1.0))
        throw domain_error("feasible_rho_range requires R^2 values in [0, 1)");
    const auto band = detail::alpha_band(s, r2wx, r2wy);
    if (band.vacuous) return {-1.0, 1.0};
    return {std::max(band.lo, -1.0), std::min(band.hi, 1.0)};
}

// A tuple is feasible when it satisfies the six box bounds and the
// realizability band, all within an absolute tolerance.
inline bool is_feasible(const SummaryStats& s, const BoundSpec& b,
                        const SensitivityTuple& t, double tol = kFeasTol) {
    if (!in_box(b, t, tol)) return false;
    const auto band = detail::alpha_band(s, t.r2wx, t.r2wy);
    if (band.vacuous) return true;
    return t.rho_hxhy >= band.lo - tol && t.rho_hxhy <= band.hi + tol;
}

// Correlation between the residual vectors x - x_hat and y - y_hat.
inline double residual_correlation(const SummaryStats& s, const SensitivityTuple& t) {
    if (!(t.r2wx < 1.0 && t.r2wy < 1.0))
        throw domain_error("residual_correlation requires R^2 values < 1");
    const double num = s.rho_xy - std::sqrt(t.r2wx) * std::sqrt(t.r2wy) * t.rho_hxhy;
    return num / (std::sqrt(1.0 - t.r2wx) * std::sqrt(1.0 - t.r2wy));
}

struct SummarizeResult {
    SummaryStats stats;
    SensitivityTuple tuple;
    double sigma_x = 0.0; // population form, divisor n
    double sigma_y = 0.0;
    // Fitted-value vector numerically constant; the matching R^2 is reported
    // as 0 and rho_hxhy as 0 so pipelines on near-constant confounders keep
    // running.
    bool x_fit_degenerate = false;
    bool y_fit_degenerate = false;
};

// Correlation, determination coefficients, and fitted-value correlation from
// raw columns. Fits of x-on-w and y-on-w include an intercept and share one
// orthogonal decomposition of [1 | w].
inline SummarizeResult summarize(const Dataset& d) {
    const Eigen::Index n = d.rows();
    const Eigen::Index p = d.confounders();
    if (d.y.size() != n || (p > 0 && d.w.rows() != n))
        throw domain_error("summarize: columns have mismatched lengths");
    if (n < 2) throw domain_error("summarize: need at least two rows");

    const Eigen::VectorXd xc = d.x.array() - d.x.mean();
    const Eigen::VectorXd yc = d.y.array() - d.y.mean();
    const double xnorm = xc.norm();
    const double ynorm = yc.norm();
    if (xnorm == 0.0) throw degenerate_variance_error("summarize: x is constant");
    if (ynorm == 0.0) throw degenerate_variance_error("summarize: y is constant");

    SummarizeResult out;
    out.sigma_x = xnorm / std::sqrt(double(n));
    out.sigma_y = ynorm / std::sqrt(double(n));
    out.stats.sigma_ratio = ynorm / xnorm;
    out.stats.rho_xy = std::clamp(xc.dot(yc) / (xnorm * ynorm), -1.0, 1.0);

    if (p == 0) return out; // no confounders: tuple stays (0, 0, 0)

    Eigen::MatrixXd design(n, p + 1);
    design.col(0).setOnes();
    design.rightCols(p) = d.w;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-10);
    if (qr.rank() < p + 1)
        throw rank_error("summarize: confounder design [1 | w] is rank deficient");

    const Eigen::MatrixXd q =
        qr.householderQ() * Eigen::MatrixXd::Identity(n, p + 1); // thin Q
    const Eigen::VectorXd xhat_c = q * (q.transpose() * xc); // centered fitted values
    const Eigen::VectorXd yhat_c = q * (q.transpose() * yc);

    const double fx = xhat_c.norm();
    const double fy = yhat_c.norm();
    out.x_fit_degenerate = fx <= 1e-12 * xnorm;
    out.y_fit_degenerate = fy <= 1e-12 * ynorm;
    out.tuple.r2wx = out.x_fit_degenerate ? 0.0 : (fx * fx) / (xnorm * xnorm);
    out.tuple.r2wy = out.y_fit_degenerate ? 0.0 : (fy * fy) / (ynorm * ynorm);
    out.tuple.rho_hxhy =
        (out.x_fit_degenerate || out.y_fit_degenerate)
            ? 0.0
            : std::clamp(xhat_c.dot(yhat_c) / (fx * fy), -1.0, 1.0);
    return out;
}

} // namespace confint
