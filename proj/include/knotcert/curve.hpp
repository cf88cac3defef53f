#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "knotcert/vec3.hpp"

namespace knotcert {

// Closed parameter interval [lo, hi] with lo < hi.
struct ParamInterval {
    double lo = 0.0;
    double hi = 1.0;

    double width() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
    // Maps a local parameter in [0,1] into this interval.
    double to_global(double local) const { return lo + local * (hi - lo); }

    bool operator==(const ParamInterval&) const = default;
};

// Bezier segment of degree n with n+1 control points. The interval records
// where the segment sits in the parameter range of the curve it was cut from;
// evaluation always uses the local parameter t in [0,1].
class BezierSegment {
public:
    explicit BezierSegment(std::vector<Point3> control_points, ParamInterval interval = {});

    int degree() const { return static_cast<int>(points_.size()) - 1; }
    std::span<const Point3> control_points() const { return points_; }
    const Point3& control_point(std::size_t j) const { return points_[j]; }
    const Point3& front() const { return points_.front(); }
    const Point3& back() const { return points_.back(); }
    const ParamInterval& interval() const { return interval_; }

private:
    std::vector<Point3> points_;
    ParamInterval interval_;
};

// Position and first two derivatives at one local parameter.
struct CurveJet {
    Point3 point;
    Vec3 d1;
    Vec3 d2;
};

Point3 eval(const BezierSegment& seg, double t);
CurveJet eval_jet(const BezierSegment& seg, double t);

std::pair<BezierSegment, BezierSegment> subdivide_once(const BezierSegment& seg);

// Derivative curve: degree n-1 with control points n (P_{j+1} - P_j). A
// degree-0 result is the constant derivative of a line.
BezierSegment hodograph(const BezierSegment& seg);

// max_j |P_{j+2} - 2 P_{j+1} + P_j| (Euclidean norm per vector).
double second_difference_norm(std::span<const Point3> points);

// PL curve with the uniform parameterization: vertex j sits at
// lo + (hi - lo) j / (size - 1).
class Polyline {
public:
    explicit Polyline(std::vector<Point3> vertices, ParamInterval interval = {});

    std::size_t size() const { return vertices_.size(); }
    std::size_t edge_count() const { return vertices_.size() - 1; }
    std::span<const Point3> vertices() const { return vertices_; }
    const Point3& vertex(std::size_t j) const { return vertices_[j]; }
    const Point3& front() const { return vertices_.front(); }
    const Point3& back() const { return vertices_.back(); }
    const ParamInterval& interval() const { return interval_; }

    Vec3 edge(std::size_t j) const { return vertices_[j + 1] - vertices_[j]; }
    double length() const;

    // Point at local parameter u in [0,1] under the uniform parameterization.
    Point3 at(double u) const;

    // Non-adjacent edges pairwise disjoint (distance above tol). O(size^2).
    bool is_simple(double tol = 1e-12) const;

private:
    std::vector<Point3> vertices_;
    ParamInterval interval_;
};

Polyline control_polygon(const BezierSegment& seg);

struct SubdivisionResult {
    std::vector<BezierSegment> sub_segments;
    std::vector<Polyline> sub_polygons;
    int iterations = 0;
};

inline constexpr std::size_t kDefaultSegmentCap = std::size_t{1} << 22;

// Midpoint subdivision applied i times; 2^i pieces in parameter order.
SubdivisionResult subdivide_iter(const BezierSegment& seg, int iterations,
                                 std::size_t segment_cap = kDefaultSegmentCap);

// Distance from q to the closed segment [a, b].
double point_segment_distance(const Point3& q, const Point3& a, const Point3& b);
double point_polyline_distance(const Point3& q, const Polyline& poly);

// Symmetric sampled Hausdorff distance between a polyline and a segment.
double hausdorff_estimate(const Polyline& poly, const BezierSegment& seg, int samples);

// Chain of segments joined C^1. Global parameter u in [0, segment_count()]
// selects segment floor(u) at local parameter u - floor(u).
class CompositeBezier {
public:
    static constexpr double kTangentTolerance = 1e-6;

    explicit CompositeBezier(std::vector<BezierSegment> segments);

    std::size_t segment_count() const { return segments_.size(); }
    std::span<const BezierSegment> segments() const { return segments_; }
    const BezierSegment& segment(std::size_t k) const { return segments_[k]; }

    double param_max() const { return static_cast<double>(segments_.size()); }
    std::pair<std::size_t, double> locate(double u) const;
    Point3 eval(double u) const;
    CurveJet eval_jet(double u) const;

    const Point3& front() const { return segments_.front().front(); }
    const Point3& back() const { return segments_.back().back(); }

    // Radius of a bounding sphere of all control points.
    double control_radius() const;

private:
    std::vector<BezierSegment> segments_;
};

}  // namespace knotcert
