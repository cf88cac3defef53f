#pragma once

#include <limits>
#include <span>
#include <vector>

#include "knotcert/curve.hpp"

namespace knotcert {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Angle between two nonzero vectors, in [0, pi]. atan2 form, stable near 0 and pi.
double angle_between(const Vec3& u, const Vec3& v);

struct TotalCurvature {
    double total = 0.0;                  // sum of exterior angles, radians
    std::vector<double> exterior_angles; // one per interior vertex
};

TotalCurvature total_curvature(const Polyline& poly);

// Sum of consecutive angles minus the end-to-end angle; never negative up to
// rounding (spherical triangle inequality chained along the vectors).
double spherical_chain_slack(std::span<const Vec3> vectors);

struct AngleSample {
    double t = 0.0;
    double theta = 0.0;
};

// theta(t) = angle(C'(t), L'(t)) with L' the piecewise-constant derivative of
// the polyline under its uniform parameterization.
struct AngleProfile {
    std::vector<AngleSample> samples;
    double max_theta = 0.0;
};

AngleProfile derivative_angle_profile(const BezierSegment& seg, const Polyline& poly,
                                      int grid_size);

inline constexpr double kCurvatureSafetyFactor = 1.02;

struct CurvatureMax {
    double kappa = 0.0;   // raw maximum, not inflated
    double argmax_t = 0.0;
};

double curvature_at(const BezierSegment& seg, double t);

// Dense sampling (1024) plus golden-section refinement near the best samples.
CurvatureMax max_curvature(const BezierSegment& seg, int samples = 1024);

struct CurvatureReport {
    double kappa_max = 0.0;
    double argmax_t = 0.0;
    double total_curvature_polyline = 0.0;
    std::vector<double> exterior_angles;
};

CurvatureReport curvature_report(const BezierSegment& seg, const Polyline& poly);

// Distance from the origin to the convex hull of the given points.
double origin_hull_distance(std::span<const Point3> points);

// Certified lower bound on min_t |C'(t)| from hodograph hull distances under
// subdivision. Throws RegularityError when no positive bound is found.
double min_derivative_norm(const BezierSegment& seg);

struct SeparationResult {
    double d_min = kInfinity;
    double s = 0.0;            // global parameters of the closest pair
    double t = 0.0;
    int grid = 0;
    double exclusion_arc = 0.0;    // pairs this close along the curve were never candidates
};

// Minimum distance over non-adjacent pairs: discrete local minima of the
// sampled distance field, refined by alternating one-dimensional minimization.
SeparationResult min_separation_distance(const CompositeBezier& curve, int grid = 256);

// Largest radius whose ball around each endpoint meets the curve in one
// parameter-connected piece; +inf when the curve never returns.
double end_radius(const CompositeBezier& curve, int samples = 4096);

struct PipeOptions {
    double radius_scale = 1.0;
    double kappa_safety = kCurvatureSafetyFactor;
    int separation_grid = 256;
};

struct PipeSpec {
    double r = kInfinity;          // radius_scale * min(1/kappa_max, d_min, r_end)
    double kappa_max = 0.0;        // safety-inflated
    double kappa_max_raw = 0.0;
    double d_min = kInfinity;
    double r_end = kInfinity;
    double radius_scale = 1.0;
    double kappa_safety = kCurvatureSafetyFactor;
    SeparationResult separation;

    bool bounded() const { return r < kInfinity; }
};

PipeSpec pipe_radius(const CompositeBezier& curve, const PipeOptions& options = {});

}  // namespace knotcert
