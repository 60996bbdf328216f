#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include "confint/confint.hpp"
#include "helpers.hpp"

using namespace confint;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
const BoundSpec kFullBox{0.0, 0.99, 0.0, 0.99, -1.0, 1.0};
} // namespace

TEST_CASE("explain-away region for a moderate positive association", "[region]") {
    const SummaryStats s{0.5, 1.0};
    const SignificanceRange sig{0.2, kInf};
    const auto cloud = necessary_region(s, kFullBox, sig, {41, kFeasTol});
    CHECK_FALSE(cloud.empty());
    for (const auto& pt : cloud) {
        CHECK(is_feasible(s, kFullBox, pt.tuple));
        CHECK(pt.beta < 0.2);
        CHECK(pt.beta == beta_adjusted(s, pt.tuple));
    }
}

TEST_CASE("an all-encompassing significance range empties the cloud", "[region]") {
    const auto cloud =
        necessary_region({0.5, 1.0}, kFullBox, {-kInf, kInf}, {21, kFeasTol});
    CHECK(cloud.empty());
}

TEST_CASE("point box whose only slope is inside the range", "[region]") {
    const SummaryStats s{0.3, 2.0};
    const BoundSpec point{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    const double slope = s.rho_xy * s.sigma_ratio;
    const auto cloud =
        necessary_region(s, point, {slope - 1.0, slope + 1.0}, {5, kFeasTol});
    CHECK(cloud.empty());
}

TEST_CASE("enlarging the significance range can only shrink the cloud", "[region]") {
    std::mt19937_64 gen(606);
    for (int rep = 0; rep < 10; ++rep) {
        const auto [s, b] = testutil::random_feasible_spec(gen, 0.9);
        const double mid = testutil::uniform(gen, -2.0, 2.0);
        const double half = testutil::uniform(gen, 0.1, 2.0);
        const SignificanceRange narrow{mid - half, mid + half};
        const SignificanceRange wide{mid - 2.0 * half, mid + 2.0 * half};
        const auto small_cloud = necessary_region(s, b, wide, {31, kFeasTol});
        const auto big_cloud = necessary_region(s, b, narrow, {31, kFeasTol});
        CHECK(small_cloud.size() <= big_cloud.size());
    }
}

TEST_CASE("cloud emptiness tracks interval containment", "[region]") {
    std::mt19937_64 gen(909);
    for (int rep = 0; rep < 12; ++rep) {
        const auto [s, b] = testutil::random_feasible_spec(gen, 0.9);
        const auto iv = solve_interval(s, b);
        const double width = iv.upper - iv.lower;
        if (width < 0.01) continue;

        // range swallowing the interval with margin: cloud must be empty
        const SignificanceRange covering{iv.lower - 0.5 * width - 0.1,
                                         iv.upper + 0.5 * width + 0.1};
        CHECK(necessary_region(s, b, covering, {41, kFeasTol}).empty());

        // range cutting well inside: the grid must see excluded points
        const SignificanceRange cutting{iv.lower + 0.4 * width, kInf};
        CHECK_FALSE(necessary_region(s, b, cutting, {41, kFeasTol}).empty());
    }
}
