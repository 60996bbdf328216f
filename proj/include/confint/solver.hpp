#pragma once

// Exact confounding intervals by enumerating the finite candidate set of
// stationary/corner points over the feasible set, plus Monte-Carlo prior
// propagation.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "confint/core.hpp"
#include "confint/errors.hpp"
#include "confint/types.hpp"

namespace confint {

// Real roots of a x^2 + b x + c = 0. Leading coefficients below kDegenEps
// are treated as zero (linear equation); a negative discriminant yields no
// roots. At most two, deduplicated.
inline std::vector<double> quadratic_roots(double a, double b, double c) {
    std::vector<double> out;
    if (std::fabs(a) <= kDegenEps) {
        if (std::fabs(b) > kDegenEps) out.push_back(-c / b);
        return out;
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return out;
    const double sq = std::sqrt(disc);
    const double r1 = (-b + sq) / (2.0 * a);
    const double r2 = (-b - sq) / (2.0 * a);
    out.push_back(r1);
    if (r2 != r1) out.push_back(r2);
    return out;
}

// Squares of the real roots, deduplicated (symmetric roots collapse).
inline std::vector<double> q_pm_squared(double a, double b, double c) {
    std::vector<double> out;
    for (double r : quadratic_roots(a, b, c)) {
        const double sq = r * r;
        if (std::find(out.begin(), out.end(), sq) == out.end()) out.push_back(sq);
    }
    return out;
}

// Which active-constraint pattern produced a candidate.
enum class CandidateFamily {
    box_corner,      // all three parameters at box bounds
    stationary_r2x,  // R^2_wy and rho pinned, beta stationary in R^2_wx
    equal_r2_plus,   // equal-R^2 diagonal point, (rho_xy+1)/(b_rho+1)
    equal_r2_minus,  // equal-R^2 diagonal point, (rho_xy-1)/(b_rho-1)
    band_at_corner,  // band edge evaluated at an R^2 box corner
    band_solve_r2y,  // R^2_wx and rho pinned, R^2_wy solved on the band
    band_solve_r2x,  // R^2_wy and rho pinned, R^2_wx solved on the band
    band_stationary, // rho pinned, beta stationary along the band surface
};

inline const char* to_string(CandidateFamily f) {
    switch (f) {
        case CandidateFamily::box_corner: return "box_corner";
        case CandidateFamily::stationary_r2x: return "stationary_r2x";
        case CandidateFamily::equal_r2_plus: return "equal_r2_plus";
        case CandidateFamily::equal_r2_minus: return "equal_r2_minus";
        case CandidateFamily::band_at_corner: return "band_at_corner";
        case CandidateFamily::band_solve_r2y: return "band_solve_r2y";
        case CandidateFamily::band_solve_r2x: return "band_solve_r2x";
        case CandidateFamily::band_stationary: return "band_stationary";
    }
    return "?";
}

struct Candidate {
    SensitivityTuple tuple;
    CandidateFamily family;
    int branch; // root / sign branch within the family
};

namespace detail {

inline bool tuple_in_domain(const SensitivityTuple& t) {
    return std::isfinite(t.r2wx) && std::isfinite(t.r2wy) && std::isfinite(t.rho_hxhy) &&
           t.r2wx >= 0.0 && t.r2wx < 1.0 && t.r2wy >= 0.0 && t.r2wy < 1.0 &&
           std::fabs(t.rho_hxhy) <= 1.0;
}

// Stationary points of beta along the realizability-band edge with rho
// pinned at b_rho and both R^2 free. With x = R_wx, y = R_wy, u = sqrt(1-x^2),
// v = sqrt(1-y^2), the Lagrange condition is b_rho (x^2 v^2 + y^2 u^2) =
// +-2 x y u v; the valid band branch is alpha_minus for b_rho > 0 and
// alpha_plus for b_rho < 0. Solving jointly with the band equation reduces
// to a quadratic in w = sqrt(R^2_wx R^2_wy):
//
//   w^2 - (2 rho_xy / b_rho) w + (rho_xy^2 - 1)/(b_rho^2 - 1) = 0,
//
// after which X + Y = 2 w uv / |b_rho| + 2 w^2 and X Y = w^2 recover the two
// R^2 values (both orderings are stationary).
inline void band_stationary_points(const SummaryStats& s, double b_rho,
                                   std::vector<Candidate>& out) {
    if (std::fabs(b_rho) <= kDegenEps) return;
    if (std::fabs(b_rho * b_rho - 1.0) <= kDegenEps) return; // no interior solutions
    int branch = 0;
    for (double w : quadratic_roots(1.0, -2.0 * s.rho_xy / b_rho,
                                    (s.rho_xy * s.rho_xy - 1.0) / (b_rho * b_rho - 1.0))) {
        ++branch;
        if (!(w > 0.0 && w < 1.0)) continue;
        const double uv = b_rho > 0.0 ? s.rho_xy - b_rho * w : b_rho * w - s.rho_xy;
        if (uv < 0.0) continue; // wrong band branch
        const double sum = 2.0 * w * uv / std::fabs(b_rho) + 2.0 * w * w;
        const auto zs = quadratic_roots(1.0, -sum, w * w);
        if (zs.size() == 2) {
            out.push_back({{zs[0], zs[1], b_rho}, CandidateFamily::band_stationary, branch});
            out.push_back({{zs[1], zs[0], b_rho}, CandidateFamily::band_stationary, -branch});
        } else if (zs.size() == 1) {
            out.push_back({{zs[0], zs[0], b_rho}, CandidateFamily::band_stationary, branch});
        }
    }
}

inline std::vector<Candidate> raw_candidates(const SummaryStats& s, const BoundSpec& b) {
    std::vector<Candidate> out;
    out.reserve(88);
    const double bx2s[2] = {b.r2x_lo, b.r2x_hi};
    const double by2s[2] = {b.r2y_lo, b.r2y_hi};
    const double rhos[2] = {b.rho_lo, b.rho_hi};
    for (double bx2 : bx2s) {
        const double bx = std::sqrt(bx2);
        for (double by2 : by2s) {
            const double by = std::sqrt(by2);
            for (double brho : rhos) {
                // stationary in R^2_wx; degenerate leading coefficient means
                // beta is monotone there and corners already cover it
                if (std::fabs(by * brho) > kDegenEps) {
                    int k = 0;
                    for (double q : q_pm_squared(-by * brho, 2.0 * s.rho_xy, -by * brho))
                        out.push_back({{q, by2, brho}, CandidateFamily::stationary_r2x, ++k});
                }
                out.push_back({{bx2, by2, brho}, CandidateFamily::box_corner, 0});
                if (bx * by > kDegenEps) {
                    const auto band = alpha_band(s, bx2, by2);
                    out.push_back({{bx2, by2, band.lo}, CandidateFamily::band_at_corner, -1});
                    out.push_back({{bx2, by2, band.hi}, CandidateFamily::band_at_corner, +1});
                }
                int k = 0;
                for (double q : q_pm_squared(bx2 * brho * brho + 1.0 - bx2,
                                             -2.0 * bx * brho * s.rho_xy,
                                             bx2 - 1.0 + s.rho_xy * s.rho_xy))
                    out.push_back({{bx2, q, brho}, CandidateFamily::band_solve_r2y, ++k});
                k = 0;
                for (double q : q_pm_squared(by2 * brho * brho + 1.0 - by2,
                                             -2.0 * by * brho * s.rho_xy,
                                             by2 - 1.0 + s.rho_xy * s.rho_xy))
                    out.push_back({{q, by2, brho}, CandidateFamily::band_solve_r2x, ++k});
            }
        }
    }
    // families that depend on the rho bound only
    for (double brho : rhos) {
        if (std::fabs(brho + 1.0) > kDegenEps) {
            const double v = (s.rho_xy + 1.0) / (brho + 1.0);
            out.push_back({{v, v, brho}, CandidateFamily::equal_r2_plus, 0});
        }
        if (std::fabs(brho - 1.0) > kDegenEps) {
            const double v = (s.rho_xy - 1.0) / (brho - 1.0);
            out.push_back({{v, v, brho}, CandidateFamily::equal_r2_minus, 0});
        }
        band_stationary_points(s, brho, out);
    }
    return out;
}

inline bool coarse_probe_feasible(const SummaryStats& s, const BoundSpec& b, double tol) {
    constexpr int probe = 11;
    for (int i = 0; i < probe; ++i) {
        const double r2x = b.r2x_lo + (b.r2x_hi - b.r2x_lo) * i / (probe - 1);
        for (int j = 0; j < probe; ++j) {
            const double r2y = b.r2y_lo + (b.r2y_hi - b.r2y_lo) * j / (probe - 1);
            for (int k = 0; k < probe; ++k) {
                const double rho = b.rho_lo + (b.rho_hi - b.rho_lo) * k / (probe - 1);
                if (is_feasible(s, b, {r2x, r2y, rho}, tol)) return true;
            }
        }
    }
    return false;
}

} // namespace detail

// The feasible members of the finite candidate set, deduplicated. Every
// extremum of beta over the feasible set is attained at one of them. At most
// 84 points are generated before filtering. `generated`, when non-null,
// receives the pre-filter count.
inline std::vector<Candidate> enumerate_candidates(const SummaryStats& s, const BoundSpec& b,
                                                   double tol = kFeasTol,
                                                   std::size_t* generated = nullptr) {
    validate(s);
    validate(b);
    const auto raw = detail::raw_candidates(s, b);
    if (generated) *generated = raw.size();
    std::vector<Candidate> out;
    out.reserve(raw.size());
    for (const auto& c : raw) {
        if (!detail::tuple_in_domain(c.tuple)) continue;
        if (!is_feasible(s, b, c.tuple, tol)) continue;
        const bool dup = std::any_of(out.begin(), out.end(), [&](const Candidate& k) {
            return std::fabs(k.tuple.r2wx - c.tuple.r2wx) <= kDedupTol &&
                   std::fabs(k.tuple.r2wy - c.tuple.r2wy) <= kDedupTol &&
                   std::fabs(k.tuple.rho_hxhy - c.tuple.rho_hxhy) <= kDedupTol;
        });
        if (!dup) out.push_back(c);
    }
    if (out.empty()) {
        if (detail::coarse_probe_feasible(s, b, tol))
            throw std::logic_error(
                "enumerate_candidates: no candidate survived but the grid probe "
                "found a feasible point; candidate enumeration is incomplete");
        throw empty_feasible_set("no sensitivity tuple satisfies the bounds");
    }
    return out;
}

struct SolveDiagnostics {
    std::size_t generated = 0;
    std::size_t feasible = 0;
    CandidateFamily argmin_family = CandidateFamily::box_corner;
    CandidateFamily argmax_family = CandidateFamily::box_corner;
};

// Exact confounding interval with witness tuples. Deterministic: candidates
// are scanned in generation order and ties keep the first witness.
inline ConfoundingInterval solve_interval(const SummaryStats& s, const BoundSpec& b,
                                          double tol = kFeasTol,
                                          SolveDiagnostics* diag = nullptr) {
    std::size_t generated = 0;
    const auto cands = enumerate_candidates(s, b, tol, &generated);
    ConfoundingInterval out;
    bool first = true;
    CandidateFamily fmin = CandidateFamily::box_corner, fmax = fmin;
    for (const auto& c : cands) {
        const double v = beta_adjusted(s, c.tuple);
        if (first || v < out.lower) {
            out.lower = v;
            out.argmin = c.tuple;
            fmin = c.family;
        }
        if (first || v > out.upper) {
            out.upper = v;
            out.argmax = c.tuple;
            fmax = c.family;
        }
        first = false;
    }
    if (diag) *diag = {generated, cands.size(), fmin, fmax};
    return out;
}

// ---------------------------------------------------------------------------
// Prior propagation

enum class PriorFamily { uniform, beta };

// Marginal prior for one parameter over its BoundSpec range. Beta priors are
// affinely mapped onto the range.
struct AxisPrior {
    PriorFamily family = PriorFamily::uniform;
    double alpha = 1.0;
    double beta = 1.0;
};

struct PriorSpec {
    AxisPrior r2x{};
    AxisPrior r2y{};
    AxisPrior rho{};
    std::int64_t sample_count = 10000;
    std::uint64_t seed = 0;
};

inline constexpr std::array<double, 5> kQuantileProbs = {0.025, 0.25, 0.5, 0.75, 0.975};

struct PriorResult {
    std::vector<double> samples; // adjusted-slope values, in acceptance order
    double acceptance_rate = 0.0;
    std::array<double, 5> quantiles{}; // at kQuantileProbs
};

namespace detail {

inline double sample_axis(const AxisPrior& a, double lo, double hi, std::mt19937_64& gen) {
    if (hi <= lo) return lo;
    if (a.family == PriorFamily::uniform) {
        return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(gen);
    }
    std::gamma_distribution<double> ga(a.alpha, 1.0), gb(a.beta, 1.0);
    const double g1 = ga(gen);
    const double g2 = gb(gen);
    const double u = (g1 + g2 > 0.0) ? g1 / (g1 + g2) : 0.5;
    return lo + (hi - lo) * u;
}

inline double interpolated_quantile(const std::vector<double>& sorted, double prob) {
    const double h = prob * double(sorted.size() - 1);
    const std::size_t i = static_cast<std::size_t>(h);
    if (i + 1 >= sorted.size()) return sorted.back();
    const double frac = h - double(i);
    return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

} // namespace detail

// Rejection-samples tuples from the prior (rejecting points outside the
// realizability band), maps them through beta_adjusted. Deterministic given
// the seed. Throws low_acceptance_error when the first 10^4 draws all miss
// the feasible set (acceptance rate below 1e-4).
inline PriorResult propagate_prior(const SummaryStats& s, const BoundSpec& b,
                                   const PriorSpec& prior, double tol = kFeasTol) {
    validate(s);
    validate(b);
    if (prior.sample_count <= 0) throw domain_error("sample_count must be positive");
    if (prior.r2x.alpha <= 0 || prior.r2x.beta <= 0 || prior.r2y.alpha <= 0 ||
        prior.r2y.beta <= 0 || prior.rho.alpha <= 0 || prior.rho.beta <= 0)
        throw domain_error("beta prior parameters must be positive");

    constexpr std::int64_t kProbe = 10000;
    std::mt19937_64 gen(prior.seed);
    PriorResult out;
    out.samples.reserve(static_cast<std::size_t>(prior.sample_count));
    std::int64_t attempts = 0;
    while (std::int64_t(out.samples.size()) < prior.sample_count) {
        SensitivityTuple t;
        t.r2wx = detail::sample_axis(prior.r2x, b.r2x_lo, b.r2x_hi, gen);
        t.r2wy = detail::sample_axis(prior.r2y, b.r2y_lo, b.r2y_hi, gen);
        t.rho_hxhy = detail::sample_axis(prior.rho, b.rho_lo, b.rho_hi, gen);
        ++attempts;
        if (is_feasible(s, b, t, tol)) out.samples.push_back(beta_adjusted(s, t));
        if (attempts == kProbe && out.samples.empty())
            throw low_acceptance_error(
                "prior acceptance rate below 1e-4: prior is essentially "
                "incompatible with the realizability band");
    }
    out.acceptance_rate = double(prior.sample_count) / double(attempts);
    std::vector<double> sorted = out.samples;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < kQuantileProbs.size(); ++i)
        out.quantiles[i] = detail::interpolated_quantile(sorted, kQuantileProbs[i]);
    return out;
}

} // namespace confint
