#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "corpus.hpp"
#include "knotcert/errors.hpp"
#include "knotcert/geometry.hpp"

using namespace knotcert;

namespace {

constexpr double kPi = std::numbers::pi;

// Closed polygon as an open polyline with the first two vertices appended,
// so every corner is an interior vertex.
Polyline closed(const std::vector<Point3>& corners) {
    std::vector<Point3> v = corners;
    v.push_back(corners[0]);
    v.push_back(corners[1]);
    return Polyline(v);
}

double sampled_min_speed(const BezierSegment& seg, int samples) {
    double best = 1e300;
    for (int k = 0; k <= samples; ++k) {
        best = std::min(best, norm(eval_jet(seg, static_cast<double>(k) / samples).d1));
    }
    return best;
}

double sampled_max_curvature(const BezierSegment& seg, int samples) {
    double best = 0.0;
    for (int k = 0; k <= samples; ++k) {
        best = std::max(best, curvature_at(seg, static_cast<double>(k) / samples));
    }
    return best;
}

CompositeBezier u_shape(double gap) {
    // Two parallel arms joined by a cubic turn.
    return CompositeBezier({BezierSegment({{0, 2, 0}, {0, 0, 0}}),
                            BezierSegment({{0, 0, 0}, {0, -0.75, 0}, {gap, -0.75, 0}, {gap, 0, 0}}),
                            BezierSegment({{gap, 0, 0}, {gap, 2, 0}})});
}

}  // namespace

TEST(angle_between, examples) {
    EXPECT_DOUBLE_EQ(angle_between({1, 0, 0}, {0, 1, 0}), kPi / 2);
    EXPECT_EQ(angle_between({1, 0, 0}, {1, 0, 0}), 0.0);
    // Near pi: exact value is pi - atan(1e-8).
    const double want = kPi - std::atan(1e-8);
    EXPECT_NEAR(angle_between({1, 0, 0}, {-1, 1e-8, 0}), want, 1e-12 * want);
    EXPECT_NEAR(angle_between({1, 0, 0}, {1, 1e-9, 0}), 1e-9, 1e-20);
    EXPECT_THROW(angle_between({0, 0, 0}, {1, 0, 0}), DomainError);
}

TEST(total_curvature, examples) {
    EXPECT_EQ(total_curvature(Polyline({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}})).total, 0.0);
    EXPECT_DOUBLE_EQ(total_curvature(Polyline({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}})).total, kPi / 2);
    EXPECT_DOUBLE_EQ(total_curvature(control_polygon(corpus::quadratic())).total, kPi / 2);
}

TEST(total_curvature, regular_polygons_turn_once) {
    for (int k = 3; k <= 12; ++k) {
        std::vector<Point3> corners;
        for (int j = 0; j < k; ++j) {
            const double a = 2 * kPi * j / k;
            corners.push_back({std::cos(a), std::sin(a), 0});
        }
        const TotalCurvature tc = total_curvature(closed(corners));
        EXPECT_EQ(tc.exterior_angles.size(), static_cast<std::size_t>(k));
        EXPECT_NEAR(tc.total, 2 * kPi, 1e-9);
    }
}

TEST(spherical_chain_slack, examples) {
    const std::vector<Vec3> tight{{1, 0, 0}, {0, 1, 0}, {-1, 0, 0}};
    EXPECT_NEAR(spherical_chain_slack(tight), 0.0, 1e-15);
    const std::vector<Vec3> loop{{1, 0, 0}, {0, 0, 1}, {0, 1, 0}, {1, 0, 0}};
    EXPECT_GE(spherical_chain_slack(loop), 0.0);
    EXPECT_THROW(spherical_chain_slack(std::vector<Vec3>{{1, 0, 0}, {0, 1, 0}}), DomainError);
}

TEST(spherical_chain_slack, random_triples_nonnegative) {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 10000; ++trial) {
        std::vector<Vec3> v(3);
        for (auto& x : v) {
            x = {g(rng), g(rng), g(rng)};
            x = x / norm(x);
        }
        EXPECT_GE(spherical_chain_slack(v), -1e-12);
    }
}

TEST(derivative_angle_profile, examples) {
    const BezierSegment line({{0, 0, 0}, {1, 2, 3}});
    EXPECT_EQ(derivative_angle_profile(line, control_polygon(line), 33).max_theta, 0.0);

    const BezierSegment q = corpus::quadratic();
    const AngleProfile prof = derivative_angle_profile(q, control_polygon(q), 257);
    EXPECT_EQ(prof.samples.front().t, 0.0);
    EXPECT_NEAR(prof.samples.front().theta, 0.0, 1e-15);
    const auto mid = std::find_if(prof.samples.begin(), prof.samples.end(),
                                  [](const AngleSample& s) { return s.t == 0.5; });
    ASSERT_NE(mid, prof.samples.end());
    // C'(1/2) = (2,0,0) against the edge directions (1,1,0) and (1,-1,0).
    EXPECT_NEAR(mid->theta, kPi / 4, 1e-12);
    EXPECT_NEAR(prof.max_theta, kPi / 4, 1e-12);
}

TEST(max_curvature, examples) {
    EXPECT_EQ(max_curvature(BezierSegment({{0, 0, 0}, {1, 1, 1}})).kappa, 0.0);
    const CurvatureMax km = max_curvature(corpus::quadratic());
    EXPECT_NEAR(km.kappa, 1.0, 1e-9);
    EXPECT_NEAR(km.argmax_t, 0.5, 1e-6);
}

TEST(max_curvature, circle_like_cubic_is_nearly_constant) {
    // Standard quarter-circle cubic, handle length 0.5523.
    const double h = 0.5522847498;
    const BezierSegment arc({{1, 0, 0}, {1, h, 0}, {h, 1, 0}, {0, 1, 0}});
    double lo = 1e300;
    double hi = 0.0;
    for (int k = 0; k <= 1000; ++k) {
        const double kappa = curvature_at(arc, k / 1000.0);
        lo = std::min(lo, kappa);
        hi = std::max(hi, kappa);
    }
    EXPECT_LT(hi / lo, 1.05);
    EXPECT_NEAR(max_curvature(arc).kappa, hi, 1e-6);
}

TEST(max_curvature, brackets_dense_sampling) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const BezierSegment seg = corpus::random_segment(rng, 3 + trial % 4);
        const double sampled = sampled_max_curvature(seg, 10000);
        const double found = max_curvature(seg).kappa;
        EXPECT_LE(sampled, found * kCurvatureSafetyFactor * (1 + 1e-12));
        EXPECT_GE(found * (1 + 1e-9), sampled / kCurvatureSafetyFactor);
    }
}

TEST(min_derivative_norm, examples) {
    EXPECT_EQ(min_derivative_norm(BezierSegment({{0, 0, 0}, {2, 0, 0}})), 2.0);
    const double sigma = min_derivative_norm(corpus::quadratic());
    EXPECT_LE(sigma, 2.0);
    EXPECT_NEAR(sigma, 2.0, 1e-5);
    EXPECT_THROW(min_derivative_norm(BezierSegment({{0, 0, 0}, {1, 0, 0}, {0, 0, 0}})),
                 RegularityError);
}

TEST(min_derivative_norm, lower_bounds_sampled_speed) {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 20; ++trial) {
        const BezierSegment seg = corpus::random_segment(rng, 2 + trial % 7, 0.05);
        const double sigma = min_derivative_norm(seg);
        EXPECT_GT(sigma, 0.0);
        EXPECT_LE(sigma, sampled_min_speed(seg, 10000));
    }
}

TEST(min_separation_distance, examples) {
    const CompositeBezier line({BezierSegment({{0, 0, 0}, {3, 0, 0}})});
    EXPECT_EQ(min_separation_distance(line).d_min, kInfinity);
    EXPECT_NEAR(min_separation_distance(u_shape(1.0)).d_min, 1.0, 1e-6);
    EXPECT_NEAR(min_separation_distance(u_shape(0.5)).d_min, 0.5, 1e-6);
}

TEST(end_radius, examples) {
    const CompositeBezier line({BezierSegment({{0, 0, 0}, {3, 0, 0}})});
    EXPECT_EQ(end_radius(line), kInfinity);
    // Leaves the origin and returns to (0, 0.2, 0).
    const CompositeBezier hook({BezierSegment({{0, 0, 0}, {1.5, -0.6, 0}, {1.5, 0.9, 0}, {0, 0.2, 0}})});
    const double r_end = end_radius(hook);
    EXPECT_NEAR(r_end, 0.2, 0.01);
    EXPECT_LE(r_end, min_separation_distance(hook).d_min + 3.0);
}

TEST(pipe_radius, examples) {
    const CompositeBezier line({BezierSegment({{0, 0, 0}, {3, 0, 0}})});
    EXPECT_FALSE(pipe_radius(line).bounded());

    const PipeSpec q = pipe_radius(CompositeBezier({corpus::quadratic()}));
    EXPECT_NEAR(q.r, 1.0 / 1.02, 1e-9);
    EXPECT_EQ(q.d_min, kInfinity);
    EXPECT_EQ(q.r_end, kInfinity);

    const PipeSpec u = pipe_radius(u_shape(1.0));
    EXPECT_NEAR(u.r, std::min(1.0 / u.kappa_max, 1.0), 1e-6);
    EXPECT_NEAR(u.d_min, 1.0, 1e-6);

    PipeOptions half;
    half.radius_scale = 0.5;
    EXPECT_NEAR(pipe_radius(CompositeBezier({corpus::quadratic()}), half).r, 0.5 / 1.02, 1e-9);
}

TEST(pipe_radius, rejects_self_intersection) {
    // A cubic whose control polygon forces a loop through itself.
    const CompositeBezier loop({BezierSegment({{0, 0, 0}, {3, 3, 0}, {-1, 3, 0}, {2, 0, 0}})});
    EXPECT_THROW(pipe_radius(loop), SelfIntersectionError);
}
