#include "knotcert/curve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "knotcert/errors.hpp"
#include "knotcert/projection.hpp"

namespace knotcert {

namespace {

void require_unit_parameter(double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw DomainError("local parameter " + std::to_string(t) + " outside [0, 1]");
    }
}

// Runs de Casteljau to the end and keeps the last three levels, which carry
// the first and second derivatives.
CurveJet de_casteljau_jet(std::span<const Point3> pts, double t) {
    const int n = static_cast<int>(pts.size()) - 1;
    if (n == 0) {
        return {pts[0], {}, {}};
    }
    std::vector<Point3> work(pts.begin(), pts.end());
    std::array<Point3, 3> level3{};
    std::array<Point3, 2> level2{};
    for (int len = n; len >= 1; --len) {
        if (len + 1 == 3) {
            std::copy_n(work.begin(), 3, level3.begin());
        }
        if (len + 1 == 2) {
            std::copy_n(work.begin(), 2, level2.begin());
        }
        for (int j = 0; j < len; ++j) {
            work[j] = lerp(work[j], work[j + 1], t);
        }
    }
    CurveJet jet;
    jet.point = work[0];
    jet.d1 = static_cast<double>(n) * (level2[1] - level2[0]);
    if (n >= 2) {
        jet.d2 = static_cast<double>(n * (n - 1)) * (level3[2] - 2.0 * level3[1] + level3[0]);
    }
    return jet;
}

double segment_segment_distance(const Point3& p1, const Point3& q1, const Point3& p2,
                                const Point3& q2) {
    const Vec3 d1 = q1 - p1;
    const Vec3 d2 = q2 - p2;
    const Vec3 r = p1 - p2;
    const double a = dot(d1, d1);
    const double e = dot(d2, d2);
    const double f = dot(d2, r);
    const double c = dot(d1, r);
    const double b = dot(d1, d2);
    const double denom = a * e - b * b;
    double s = 0.0;
    if (denom > 1e-300) {
        s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
    }
    double t = (b * s + f) / e;
    if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
    } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
    }
    return distance(p1 + d1 * s, p2 + d2 * t);
}

}  // namespace

BezierSegment::BezierSegment(std::vector<Point3> control_points, ParamInterval interval)
    : points_(std::move(control_points)), interval_(interval) {
    if (points_.empty()) {
        throw DomainError("Bezier segment needs at least one control point");
    }
    for (const auto& p : points_) {
        if (!is_finite(p)) {
            throw DomainError("Bezier control point is not finite");
        }
    }
    if (!(interval_.lo < interval_.hi)) {
        throw DomainError("Bezier parameter interval must satisfy lo < hi");
    }
}

Point3 eval(const BezierSegment& seg, double t) {
    require_unit_parameter(t);
    std::vector<Point3> work(seg.control_points().begin(), seg.control_points().end());
    for (std::size_t len = work.size() - 1; len >= 1; --len) {
        for (std::size_t j = 0; j < len; ++j) {
            work[j] = lerp(work[j], work[j + 1], t);
        }
    }
    return work[0];
}

CurveJet eval_jet(const BezierSegment& seg, double t) {
    require_unit_parameter(t);
    return de_casteljau_jet(seg.control_points(), t);
}

std::pair<BezierSegment, BezierSegment> subdivide_once(const BezierSegment& seg) {
    const auto pts = seg.control_points();
    const std::size_t n = pts.size() - 1;
    std::vector<Point3> work(pts.begin(), pts.end());
    std::vector<Point3> left(n + 1);
    std::vector<Point3> right(n + 1);
    left[0] = work[0];
    right[n] = work[n];
    for (std::size_t level = 1; level <= n; ++level) {
        for (std::size_t j = 0; j + level <= n; ++j) {
            work[j] = lerp(work[j], work[j + 1], 0.5);
        }
        left[level] = work[0];
        right[n - level] = work[n - level];
    }
    const ParamInterval& iv = seg.interval();
    const double mid = iv.midpoint();
    return {BezierSegment(std::move(left), {iv.lo, mid}),
            BezierSegment(std::move(right), {mid, iv.hi})};
}

BezierSegment hodograph(const BezierSegment& seg) {
    const auto pts = seg.control_points();
    const int n = seg.degree();
    if (n < 1) {
        throw DomainError("hodograph needs degree >= 1");
    }
    std::vector<Point3> d;
    d.reserve(pts.size() - 1);
    for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
        d.push_back(static_cast<double>(n) * (pts[j + 1] - pts[j]));
    }
    return BezierSegment(std::move(d), seg.interval());
}

double second_difference_norm(std::span<const Point3> points) {
    if (points.size() < 3) {
        throw DomainError("second difference needs at least 3 points");
    }
    double best = 0.0;
    for (std::size_t j = 0; j + 2 < points.size(); ++j) {
        best = std::max(best, norm(points[j + 2] - 2.0 * points[j + 1] + points[j]));
    }
    return best;
}

Polyline::Polyline(std::vector<Point3> vertices, ParamInterval interval)
    : vertices_(std::move(vertices)), interval_(interval) {
    if (vertices_.size() < 2) {
        throw DomainError("polyline needs at least 2 vertices");
    }
    for (std::size_t j = 0; j < vertices_.size(); ++j) {
        if (!is_finite(vertices_[j])) {
            throw DomainError("polyline vertex " + std::to_string(j) + " is not finite");
        }
        if (j > 0 && vertices_[j] == vertices_[j - 1]) {
            throw DomainError("polyline vertices " + std::to_string(j - 1) + " and " +
                              std::to_string(j) + " coincide");
        }
    }
    if (!(interval_.lo < interval_.hi)) {
        throw DomainError("polyline parameter interval must satisfy lo < hi");
    }
}

double Polyline::length() const {
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < vertices_.size(); ++j) {
        total += norm(edge(j));
    }
    return total;
}

Point3 Polyline::at(double u) const {
    require_unit_parameter(u);
    const double scaled = u * static_cast<double>(edge_count());
    const std::size_t j = std::min(static_cast<std::size_t>(scaled), edge_count() - 1);
    return lerp(vertices_[j], vertices_[j + 1], scaled - static_cast<double>(j));
}

bool Polyline::is_simple(double tol) const {
    const std::size_t m = edge_count();
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const Vec3 a = edge(i);
        const Vec3 b = edge(i + 1);
        if (norm(cross(a, b)) <= tol * norm(a) * norm(b) && dot(a, b) < 0.0) {
            return false;  // folds back on itself
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 2; j < m; ++j) {
            if (segment_segment_distance(vertices_[i], vertices_[i + 1], vertices_[j],
                                         vertices_[j + 1]) <= tol) {
                return false;
            }
        }
    }
    return true;
}

Polyline control_polygon(const BezierSegment& seg) {
    return Polyline({seg.control_points().begin(), seg.control_points().end()}, seg.interval());
}

SubdivisionResult subdivide_iter(const BezierSegment& seg, int iterations,
                                 std::size_t segment_cap) {
    if (iterations < 0) {
        throw DomainError("subdivision iteration count must be nonnegative");
    }
    if (iterations >= 63 || (std::size_t{1} << iterations) > segment_cap) {
        throw ResourceError("subdivision to " + std::to_string(iterations) +
                            " iterations exceeds the segment cap of " +
                            std::to_string(segment_cap) + " sub-segments");
    }
    std::vector<BezierSegment> level{seg};
    for (int i = 0; i < iterations; ++i) {
        std::vector<BezierSegment> next;
        next.reserve(level.size() * 2);
        for (const auto& s : level) {
            auto [l, r] = subdivide_once(s);
            next.push_back(std::move(l));
            next.push_back(std::move(r));
        }
        level = std::move(next);
    }
    SubdivisionResult result;
    result.iterations = iterations;
    result.sub_polygons.reserve(level.size());
    for (const auto& s : level) {
        result.sub_polygons.push_back(control_polygon(s));
    }
    result.sub_segments = std::move(level);
    return result;
}

double point_segment_distance(const Point3& q, const Point3& a, const Point3& b) {
    const Vec3 ab = b - a;
    const double len2 = squared_norm(ab);
    if (len2 == 0.0) {
        return distance(q, a);
    }
    const double u = std::clamp(dot(q - a, ab) / len2, 0.0, 1.0);
    return distance(q, lerp(a, b, u));
}

double point_polyline_distance(const Point3& q, const Polyline& poly) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < poly.edge_count(); ++j) {
        best = std::min(best, point_segment_distance(q, poly.vertex(j), poly.vertex(j + 1)));
    }
    return best;
}

double hausdorff_estimate(const Polyline& poly, const BezierSegment& seg, int samples) {
    if (samples < 2) {
        throw DomainError("hausdorff_estimate needs at least 2 samples");
    }
    double worst = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double t = static_cast<double>(k) / (samples - 1);
        worst = std::max(worst, point_polyline_distance(eval(seg, t), poly));
    }
    const CurveProjector projector(seg);
    for (const auto& v : poly.vertices()) {
        worst = std::max(worst, projector.project(v).best.distance);
    }
    for (int k = 0; k < samples; ++k) {
        const double u = static_cast<double>(k) / (samples - 1);
        worst = std::max(worst, projector.project(poly.at(u)).best.distance);
    }
    return worst;
}

CompositeBezier::CompositeBezier(std::vector<BezierSegment> segments)
    : segments_(std::move(segments)) {
    if (segments_.empty()) {
        throw DomainError("composite curve needs at least one segment");
    }
    for (std::size_t k = 0; k < segments_.size(); ++k) {
        if (segments_[k].degree() < 1) {
            throw DomainError("segment " + std::to_string(k) + " has degree < 1");
        }
    }
    for (std::size_t k = 0; k + 1 < segments_.size(); ++k) {
        const auto& a = segments_[k];
        const auto& b = segments_[k + 1];
        const double scale = 1.0 + norm(a.back());
        if (distance(a.back(), b.front()) > 1e-12 * scale) {
            throw DomainError("C0 junction violated between segments " + std::to_string(k) +
                              " and " + std::to_string(k + 1));
        }
        const auto pa = a.control_points();
        const auto pb = b.control_points();
        const Vec3 ta = pa[pa.size() - 1] - pa[pa.size() - 2];
        const Vec3 tb = pb[1] - pb[0];
        if (squared_norm(ta) == 0.0 || squared_norm(tb) == 0.0) {
            throw DomainError("degenerate end tangent at junction " + std::to_string(k));
        }
        const double angle = std::atan2(norm(cross(ta, tb)), dot(ta, tb));
        if (angle > kTangentTolerance) {
            throw DomainError("C1 junction violated between segments " + std::to_string(k) +
                              " and " + std::to_string(k + 1) + " (tangent angle " +
                              std::to_string(angle) + " rad)");
        }
    }
}

std::pair<std::size_t, double> CompositeBezier::locate(double u) const {
    if (!(u >= 0.0 && u <= param_max())) {
        throw DomainError("global parameter " + std::to_string(u) + " outside [0, " +
                          std::to_string(segments_.size()) + "]");
    }
    const std::size_t k = std::min(static_cast<std::size_t>(u), segments_.size() - 1);
    return {k, std::clamp(u - static_cast<double>(k), 0.0, 1.0)};
}

Point3 CompositeBezier::eval(double u) const {
    const auto [k, t] = locate(u);
    return knotcert::eval(segments_[k], t);
}

CurveJet CompositeBezier::eval_jet(double u) const {
    const auto [k, t] = locate(u);
    return knotcert::eval_jet(segments_[k], t);
}

double CompositeBezier::control_radius() const {
    Point3 centroid;
    std::size_t count = 0;
    for (const auto& s : segments_) {
        for (const auto& p : s.control_points()) {
            centroid += p;
            ++count;
        }
    }
    centroid = centroid / static_cast<double>(count);
    double radius = 0.0;
    for (const auto& s : segments_) {
        for (const auto& p : s.control_points()) {
            radius = std::max(radius, distance(p, centroid));
        }
    }
    return radius;
}

}  // namespace knotcert
