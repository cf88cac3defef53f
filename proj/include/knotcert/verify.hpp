#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "knotcert/curve.hpp"
#include "knotcert/geometry.hpp"
#include "knotcert/projection.hpp"

namespace knotcert {

inline constexpr double kMarginTolerance = 1e-9;

// Tangential residual allowed when classifying a point as lying in a normal disc.
inline double orthogonality_tolerance(const Point3& q) { return 1e-7 * (1.0 + norm(q)); }

struct Condition1Result {
    bool pass = false;
    double clearance = 0.0;         // r - max distance of polyline samples to the curve
    double max_distance = 0.0;
    double max_tangential = 0.0;    // worst normal-plane residual
    bool orthogonal = true;         // every residual within tolerance
    std::size_t samples = 0;
};

struct Condition2Result {
    bool pass = false;
    double total_curvature = 0.0;
    double max_theta = 0.0;
    double value = 0.0;             // total_curvature + max_theta
    double margin = 0.0;            // pi/2 - value
};

struct ConditionReport {
    Condition1Result condition1;
    Condition2Result condition2;
    ParamInterval sub_interval;

    bool pass() const { return condition1.pass && condition2.pass; }
};

struct VerifyOptions {
    int grid = 257;               // theta profile, uniqueness and correspondence grid
    int samples_per_edge = 8;     // Condition 1 samples inside each polyline edge
    int coarse_samples = CurveProjector::kDefaultCoarseSamples;
    int curve_disc_samples = 128; // curve sampling for the disc/curve uniqueness check
};

// Every polyline point except the two ends must sit inside the open pipe
// section of radius r around seg: distance below r, foot point orthogonal.
Condition1Result check_condition1(const Polyline& poly, const BezierSegment& seg, double r,
                                  int samples_per_edge,
                                  int coarse_samples = CurveProjector::kDefaultCoarseSamples);

// T_kappa(L) + max theta < pi/2.
Condition2Result check_condition2(const Polyline& poly, const BezierSegment& seg, int grid_size);

ConditionReport check_conditions(const Polyline& poly, const BezierSegment& seg, double r,
                                 const VerifyOptions& options = {});

struct DiscHit {
    Point3 point;
    std::size_t edge = 0;
    double fraction = 0.0;  // position along the edge in [0, 1]

    // Position along the polyline measured in edges.
    double polyline_position() const { return static_cast<double>(edge) + fraction; }
};

struct Disc {
    Point3 center;
    Vec3 normal;  // unit
    double radius = 0.0;
};

Disc normal_disc(const BezierSegment& seg, double t, double r);

// Points where the normal disc D_r(t) meets the polyline, in polyline order.
// Edges are half-open [a, b) except the last, which is closed.
std::vector<DiscHit> disc_polyline_intersections(const BezierSegment& seg, double t, double r,
                                                 const Polyline& poly);
std::vector<DiscHit> disc_polyline_intersections(const Disc& disc, const Polyline& poly);

struct UniquenessViolation {
    double t = 0.0;
    int polyline_hits = 0;  // -1 when an edge lies in the disc plane
    int curve_hits = 0;
};

struct UniquenessReport {
    int grid_size = 0;
    int unique_polyline = 0;  // grid parameters with exactly one polyline hit
    int unique_curve = 0;     // grid parameters with exactly one curve hit
    std::vector<UniquenessViolation> violations;

    bool all_unique() const { return violations.empty(); }
};

UniquenessReport verify_unique_disc_intersections(const BezierSegment& seg, const Polyline& poly,
                                                  double r, int grid_size,
                                                  int curve_samples = 128);

struct CorrespondenceRow {
    double t = 0.0;
    Point3 curve_point;
    Point3 polyline_point;
    double polyline_position = 0.0;
};

struct CorrespondenceTable {
    int grid_size = 0;
    std::vector<CorrespondenceRow> rows;

    // Polyline positions strictly increasing with t.
    bool strictly_monotone() const;
    double max_offset() const;  // max |C(t) - L~(t)|
};

// Tabulates h: C(t) -> D_r(t) ∩ L on a uniform grid including 0 and 1.
CorrespondenceTable correspondence_h(const BezierSegment& seg, const Polyline& poly, double r,
                                     int grid_size);

struct SubPairReport {
    std::size_t segment = 0;
    std::size_t index = 0;        // position within the segment's subdivision
    ConditionReport conditions;
    std::optional<UniquenessReport> uniqueness;  // run only when both conditions pass
    bool correspondence_monotone = false;
    double max_offset = 0.0;

    bool pass() const {
        return conditions.pass() && uniqueness && uniqueness->all_unique() &&
               correspondence_monotone;
    }
};

struct CompositeVerification {
    bool pass = false;
    double r = 0.0;
    VerifyOptions options;
    std::vector<int> iterations;     // per curve segment
    std::vector<SubPairReport> pairs;
    std::size_t failed_pairs = 0;
    double worst_clearance = kInfinity;
    double worst_condition2_margin = kInfinity;
};

// Pairs sub-polygons with sub-curves of each segment's subdivision.
struct SubPair {
    std::size_t segment = 0;
    std::size_t index = 0;
    const BezierSegment* curve = nullptr;
    const Polyline* polyline = nullptr;
};

CompositeVerification verify_pairs(const std::vector<SubPair>& pairs, std::size_t segments,
                                   double r, const VerifyOptions& options);

CompositeVerification verify_composite(const CompositeBezier& curve,
                                       const std::vector<SubdivisionResult>& subdivisions,
                                       double r, const VerifyOptions& options = {});

}  // namespace knotcert
