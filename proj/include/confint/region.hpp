#pragma once

// Inverse problem: which realizable sensitivity tuples would push the
// adjusted slope outside a declared practical-significance range.

#include <limits>
#include <vector>

#include "confint/core.hpp"
#include "confint/oracle.hpp"
#include "confint/types.hpp"

namespace confint {

// Target interval of slope values, declared prospectively. Either side may
// be infinite.
struct SignificanceRange {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double v) const { return v >= lo && v <= hi; }
};

struct RegionPoint {
    SensitivityTuple tuple;
    double beta;
};

// All lattice nodes of the box that are realizable (inside the band) and
// whose adjusted slope falls outside the significance range. An empty cloud
// is a meaningful answer: no realizable tuple explains the association away.
inline std::vector<RegionPoint> necessary_region(const SummaryStats& s, const BoundSpec& b,
                                                 const SignificanceRange& sig,
                                                 const GridConfig& cfg = {101, kFeasTol}) {
    validate(s);
    validate(b);
    if (!(sig.lo <= sig.hi)) throw domain_error("significance range bounds out of order");
    if (cfg.resolution < 2) throw domain_error("grid resolution must be at least 2");

    const int res = cfg.resolution;
    std::vector<RegionPoint> cloud;
    for (int i = 0; i < res; ++i) {
        const double r2x = detail::grid_node(b.r2x_lo, b.r2x_hi, i, res);
        for (int j = 0; j < res; ++j) {
            const double r2y = detail::grid_node(b.r2y_lo, b.r2y_hi, j, res);
            const auto band = detail::alpha_band(s, r2x, r2y);
            for (int k = 0; k < res; ++k) {
                const double rho = detail::grid_node(b.rho_lo, b.rho_hi, k, res);
                if (!band.vacuous &&
                    !(rho >= band.lo - cfg.tol && rho <= band.hi + cfg.tol))
                    continue;
                const SensitivityTuple t{r2x, r2y, rho};
                const double v = beta_adjusted(s, t);
                if (!sig.contains(v)) cloud.push_back({t, v});
            }
        }
    }
    return cloud;
}

} // namespace confint
