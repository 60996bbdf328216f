#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "confint/errors.hpp"

namespace confint {

// Default absolute tolerance for feasibility checks. All constraint
// quantities are O(1) and candidate points are closed-form.
inline constexpr double kFeasTol = 1e-12;

// Below this magnitude a quadratic's leading coefficient is treated as zero.
inline constexpr double kDegenEps = 1e-14;

// Candidates closer than this in max-norm are merged.
inline constexpr double kDedupTol = 1e-12;

// The measured pair that anchors every computation: correlation of (x, y)
// and the ratio of their standard deviations.
struct SummaryStats {
    double rho_xy = 0.0;
    double sigma_ratio = 1.0; // sigma_y / sigma_x
};

// User-specified interval endpoints for the three sensitivity parameters.
struct BoundSpec {
    double r2x_lo = 0.0, r2x_hi = 0.0; // bounds on R^2_wx
    double r2y_lo = 0.0, r2y_hi = 0.0; // bounds on R^2_wy
    double rho_lo = -1.0, rho_hi = 1.0; // bounds on rho_hxhy
};

// A point (R^2_wx, R^2_wy, rho_hxhy) in [0,1) x [0,1) x [-1,1].
// R_wx and R_wy always denote the nonnegative square roots; sign information
// lives entirely in rho_hxhy.
struct SensitivityTuple {
    double r2wx = 0.0;
    double r2wy = 0.0;
    double rho_hxhy = 0.0;
};

// Closed interval of attainable adjusted slopes, with witness tuples.
struct ConfoundingInterval {
    double lower = 0.0;
    double upper = 0.0;
    SensitivityTuple argmin{};
    SensitivityTuple argmax{};
};

// Raw columns. w has one column per confounder (p columns, possibly zero).
struct Dataset {
    Eigen::VectorXd x;
    Eigen::VectorXd y;
    Eigen::MatrixXd w;

    Eigen::Index rows() const { return x.size(); }
    Eigen::Index confounders() const { return w.cols(); }
};

inline void validate(const SummaryStats& s) {
    if (!(s.rho_xy > -1.0 && s.rho_xy < 1.0))
        throw domain_error("rho_xy must lie strictly inside (-1, 1), got " +
                           std::to_string(s.rho_xy));
    if (!(s.sigma_ratio > 0.0))
        throw domain_error("sigma_ratio must be positive, got " +
                           std::to_string(s.sigma_ratio));
}

inline void validate(const BoundSpec& b) {
    if (!(b.r2x_lo >= 0.0)) throw domain_error("r2x lower bound must be >= 0");
    if (!(b.r2y_lo >= 0.0)) throw domain_error("r2y lower bound must be >= 0");
    if (!(b.r2x_lo <= b.r2x_hi)) throw domain_error("r2x lower bound exceeds upper");
    if (!(b.r2y_lo <= b.r2y_hi)) throw domain_error("r2y lower bound exceeds upper");
    if (!(b.r2x_hi < 1.0)) throw domain_error("r2x upper bound must be < 1");
    if (!(b.r2y_hi < 1.0)) throw domain_error("r2y upper bound must be < 1");
    if (!(b.rho_lo >= -1.0)) throw domain_error("rho_hxhy lower bound must be >= -1");
    if (!(b.rho_lo <= b.rho_hi)) throw domain_error("rho_hxhy lower bound exceeds upper");
    if (!(b.rho_hi <= 1.0)) throw domain_error("rho_hxhy upper bound must be <= 1");
}

inline void validate(const SensitivityTuple& t) {
    if (!(t.r2wx >= 0.0 && t.r2wx < 1.0))
        throw domain_error("r2wx must lie in [0, 1), got " + std::to_string(t.r2wx));
    if (!(t.r2wy >= 0.0 && t.r2wy < 1.0))
        throw domain_error("r2wy must lie in [0, 1), got " + std::to_string(t.r2wy));
    if (!(std::fabs(t.rho_hxhy) <= 1.0))
        throw domain_error("rho_hxhy must lie in [-1, 1], got " +
                           std::to_string(t.rho_hxhy));
}

inline bool in_box(const BoundSpec& b, const SensitivityTuple& t, double tol) {
    return t.r2wx >= b.r2x_lo - tol && t.r2wx <= b.r2x_hi + tol &&
           t.r2wy >= b.r2y_lo - tol && t.r2wy <= b.r2y_hi + tol &&
           t.rho_hxhy >= b.rho_lo - tol && t.rho_hxhy <= b.rho_hi + tol;
}

} // namespace confint
