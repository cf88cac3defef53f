#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "corpus.hpp"
#include "knotcert/projection.hpp"

using namespace knotcert;

namespace {

// Brute-force nearest parameter on a dense grid.
double brute_force_distance(const BezierSegment& seg, const Point3& q, int samples = 200000) {
    double best = 1e300;
    for (int k = 0; k <= samples; ++k) {
        best = std::min(best, distance(eval(seg, static_cast<double>(k) / samples), q));
    }
    return best;
}

}  // namespace

TEST(projection, apex_of_quadratic) {
    const CurveProjector proj(corpus::quadratic());
    const Projection p = proj.project({1, 2, 0}).best;
    EXPECT_NEAR(p.t, 0.5, 1e-12);
    EXPECT_NEAR(p.distance, 1.5, 1e-12);
    EXPECT_LT(p.tangential, 1e-12);
}

TEST(projection, point_on_curve_has_zero_distance) {
    std::mt19937_64 rng(2);
    const BezierSegment seg = corpus::random_segment(rng, 5);
    const CurveProjector proj(seg);
    for (double t : {0.0, 0.123, 0.5, 0.999, 1.0}) {
        const Projection p = proj.project(eval(seg, t)).best;
        EXPECT_LT(p.distance, 1e-12);
    }
}

TEST(projection, clamps_at_endpoints) {
    const CurveProjector proj(BezierSegment({{0, 0, 0}, {1, 0, 0}}));
    const Projection p = proj.project({-1, 1, 0}).best;
    EXPECT_EQ(p.t, 0.0);
    EXPECT_NEAR(p.distance, std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(p.tangential, 1.0, 1e-15);
}

TEST(projection, agrees_with_brute_force) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> coord(-1.5, 1.5);
    for (int trial = 0; trial < 20; ++trial) {
        const BezierSegment seg = corpus::random_segment(rng, 3 + trial % 4);
        const CurveProjector proj(seg);
        const Point3 q{coord(rng), coord(rng), coord(rng)};
        EXPECT_NEAR(proj.project(q).best.distance, brute_force_distance(seg, q), 1e-9);
    }
}

TEST(projection, reports_symmetric_runner_up) {
    // Both ends of the U are equally far from a point on its axis.
    const BezierSegment u({{0, 1, 0}, {0, -1, 0}, {2, -1, 0}, {2, 1, 0}});
    const CurveProjector proj(u);
    const ProjectionResult r = proj.project({1, 5, 0});
    ASSERT_TRUE(r.runner_up.has_value());
    EXPECT_NEAR(r.runner_up->distance, r.best.distance, 1e-9);
    EXPECT_GT(std::abs(r.runner_up->t - r.best.t), 0.5);
}
