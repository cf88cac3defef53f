#include "knotcert/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "knotcert/errors.hpp"

namespace knotcert {

namespace {

void require_radius(double r) {
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw DomainError("pipe radius must be finite and positive");
    }
}

double grid_param(int k, int grid_size) {
    return k == grid_size - 1 ? 1.0 : static_cast<double>(k) / (grid_size - 1);
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Sign changes of the Bernstein coefficients of g(u) = (C(u) - c) . n certify
// the number of plane crossings; returns -1 when they do not decide it.
int bernstein_plane_hits(const BezierSegment& seg, const Disc& disc, double t) {
    const auto pts = seg.control_points();
    std::vector<double> g(pts.size());
    for (std::size_t j = 0; j < pts.size(); ++j) {
        g[j] = dot(pts[j] - disc.center, disc.normal);
    }
    const bool at_start = t == 0.0;
    const bool at_end = t == 1.0;
    if ((at_start && g.front() != 0.0) || (at_end && g.back() != 0.0)) {
        return -1;
    }
    if (!at_start && g.front() == 0.0) {
        return -1;
    }
    if (!at_end && g.back() == 0.0) {
        return -1;
    }
    int changes = 0;
    int last = 0;
    for (double v : g) {
        const int s = sign_of(v);
        if (s == 0) {
            continue;
        }
        if (last != 0 && s != last) {
            ++changes;
        }
        last = s;
    }
    // Interior t: exactly one crossing in (0,1). End t: the end root and none inside.
    if (!at_start && !at_end && changes == 1) {
        return 1;
    }
    if ((at_start || at_end) && changes == 0) {
        return 1;
    }
    return -1;
}

// Sampled count of points where the curve meets the disc, t itself included.
int sampled_curve_hits(const BezierSegment& seg, const Disc& disc, double t, int samples) {
    std::vector<double> params;
    params.reserve(samples + 2);
    for (int k = 0; k <= samples; ++k) {
        params.push_back(static_cast<double>(k) / samples);
    }
    params.push_back(t);
    std::sort(params.begin(), params.end());
    params.erase(std::unique(params.begin(), params.end()), params.end());

    std::vector<Point3> pts(params.size());
    std::vector<double> g(params.size());
    for (std::size_t k = 0; k < params.size(); ++k) {
        pts[k] = params[k] == t ? disc.center : eval(seg, params[k]);
        g[k] = params[k] == t ? 0.0 : dot(pts[k] - disc.center, disc.normal);
    }
    int hits = 0;
    for (std::size_t k = 0; k < params.size(); ++k) {
        if (g[k] == 0.0 && distance(pts[k], disc.center) <= disc.radius) {
            ++hits;
        }
        if (k + 1 < params.size() && g[k] * g[k + 1] < 0.0) {
            const double lambda = g[k] / (g[k] - g[k + 1]);
            if (distance(lerp(pts[k], pts[k + 1], lambda), disc.center) <= disc.radius) {
                ++hits;
            }
        }
    }
    return hits;
}

}  // namespace

Condition1Result check_condition1(const Polyline& poly, const BezierSegment& seg, double r,
                                  int samples_per_edge, int coarse_samples) {
    require_radius(r);
    if (samples_per_edge < 0) {
        throw DomainError("samples_per_edge must be nonnegative");
    }
    const CurveProjector projector(seg, coarse_samples);
    Condition1Result result;
    result.pass = true;
    const std::size_t edges = poly.edge_count();
    for (std::size_t j = 0; j < edges; ++j) {
        const Point3& a = poly.vertex(j);
        const Point3& b = poly.vertex(j + 1);
        // Vertex j (skipped for the first edge) and interior samples.
        for (int k = j == 0 ? 1 : 0; k <= samples_per_edge; ++k) {
            const Point3 q = k == 0 ? a : lerp(a, b, static_cast<double>(k) / (samples_per_edge + 1));
            const Projection p = projector.project(q).best;
            ++result.samples;
            result.max_distance = std::max(result.max_distance, p.distance);
            result.max_tangential = std::max(result.max_tangential, p.tangential);
            if (p.tangential > orthogonality_tolerance(q)) {
                result.orthogonal = false;
            }
            if (!(p.distance < r)) {
                result.pass = false;
            }
        }
    }
    result.pass = result.pass && result.orthogonal;
    result.clearance = r - result.max_distance;
    return result;
}

Condition2Result check_condition2(const Polyline& poly, const BezierSegment& seg, int grid_size) {
    Condition2Result result;
    result.total_curvature = total_curvature(poly).total;
    result.max_theta = derivative_angle_profile(seg, poly, grid_size).max_theta;
    result.value = result.total_curvature + result.max_theta;
    result.margin = std::numbers::pi / 2 - result.value;
    result.pass = result.margin > kMarginTolerance;
    return result;
}

ConditionReport check_conditions(const Polyline& poly, const BezierSegment& seg, double r,
                                 const VerifyOptions& options) {
    ConditionReport report;
    report.condition1 =
        check_condition1(poly, seg, r, options.samples_per_edge, options.coarse_samples);
    report.condition2 = check_condition2(poly, seg, options.grid);
    report.sub_interval = seg.interval();
    return report;
}

Disc normal_disc(const BezierSegment& seg, double t, double r) {
    require_radius(r);
    const CurveJet jet = eval_jet(seg, t);
    const double speed = norm(jet.d1);
    if (!(speed > 0.0)) {
        throw RegularityError("no normal disc where the derivative vanishes, t = " +
                              std::to_string(t));
    }
    return {jet.point, jet.d1 / speed, r};
}

std::vector<DiscHit> disc_polyline_intersections(const Disc& disc, const Polyline& poly) {
    const std::size_t n = poly.size();
    std::vector<double> side(n);
    for (std::size_t j = 0; j < n; ++j) {
        side[j] = dot(poly.vertex(j) - disc.center, disc.normal);
    }
    std::vector<DiscHit> hits;
    const std::size_t edges = poly.edge_count();
    for (std::size_t j = 0; j < edges; ++j) {
        const double da = side[j];
        const double db = side[j + 1];
        const Point3& a = poly.vertex(j);
        const Point3& b = poly.vertex(j + 1);
        if (da == 0.0 && db == 0.0) {
            throw DegenerateIncidenceError("polyline edge " + std::to_string(j) +
                                               " lies in the disc plane",
                                           j);
        }
        DiscHit hit;
        hit.edge = j;
        if (da == 0.0) {
            hit.point = a;
            hit.fraction = 0.0;
        } else if (db == 0.0) {
            if (j + 1 != edges) {
                continue;
            }
            hit.point = b;
            hit.fraction = 1.0;
        } else if ((da < 0.0) != (db < 0.0)) {
            hit.fraction = da / (da - db);
            hit.point = lerp(a, b, hit.fraction);
        } else {
            continue;
        }
        if (distance(hit.point, disc.center) <= disc.radius) {
            hits.push_back(hit);
        }
    }
    return hits;
}

std::vector<DiscHit> disc_polyline_intersections(const BezierSegment& seg, double t, double r,
                                                 const Polyline& poly) {
    return disc_polyline_intersections(normal_disc(seg, t, r), poly);
}

UniquenessReport verify_unique_disc_intersections(const BezierSegment& seg, const Polyline& poly,
                                                  double r, int grid_size, int curve_samples) {
    require_radius(r);
    if (grid_size < 2 || curve_samples < 2) {
        throw DomainError("uniqueness check needs grid_size >= 2 and curve_samples >= 2");
    }
    UniquenessReport report;
    report.grid_size = grid_size;
    for (int k = 0; k < grid_size; ++k) {
        const double t = grid_param(k, grid_size);
        const Disc disc = normal_disc(seg, t, r);
        int poly_hits = -1;
        try {
            poly_hits = static_cast<int>(disc_polyline_intersections(disc, poly).size());
        } catch (const DegenerateIncidenceError&) {
            poly_hits = -1;
        }
        int curve_hits = bernstein_plane_hits(seg, disc, t);
        if (curve_hits < 0) {
            curve_hits = sampled_curve_hits(seg, disc, t, curve_samples);
        }
        report.unique_polyline += poly_hits == 1;
        report.unique_curve += curve_hits == 1;
        if (poly_hits != 1 || curve_hits != 1) {
            report.violations.push_back({t, poly_hits, curve_hits});
        }
    }
    return report;
}

bool CorrespondenceTable::strictly_monotone() const {
    for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
        if (!(rows[k + 1].polyline_position > rows[k].polyline_position)) {
            return false;
        }
    }
    return true;
}

double CorrespondenceTable::max_offset() const {
    double worst = 0.0;
    for (const auto& row : rows) {
        worst = std::max(worst, distance(row.curve_point, row.polyline_point));
    }
    return worst;
}

CorrespondenceTable correspondence_h(const BezierSegment& seg, const Polyline& poly, double r,
                                     int grid_size) {
    require_radius(r);
    if (grid_size < 2) {
        throw DomainError("correspondence needs grid_size >= 2");
    }
    std::vector<double> arclength(poly.size(), 0.0);
    for (std::size_t j = 0; j < poly.edge_count(); ++j) {
        arclength[j + 1] = arclength[j] + norm(poly.edge(j));
    }
    CorrespondenceTable table;
    table.grid_size = grid_size;
    table.rows.reserve(grid_size);
    for (int k = 0; k < grid_size; ++k) {
        const double t = grid_param(k, grid_size);
        const Disc disc = normal_disc(seg, t, r);
        const auto hits = disc_polyline_intersections(disc, poly);
        if (hits.size() != 1) {
            throw InconsistencyError("normal disc at t = " + std::to_string(t) + " meets the polyline " +
                                     std::to_string(hits.size()) + " times");
        }
        const DiscHit& h = hits.front();
        const double position = arclength[h.edge] + h.fraction * norm(poly.edge(h.edge));
        table.rows.push_back({t, disc.center, h.point, position});
    }
    return table;
}

CompositeVerification verify_pairs(const std::vector<SubPair>& pairs, std::size_t segments,
                                   double r, const VerifyOptions& options) {
    require_radius(r);
    CompositeVerification result;
    result.r = r;
    result.options = options;
    result.iterations.assign(segments, 0);
    result.pairs.reserve(pairs.size());
    for (const SubPair& pair : pairs) {
        SubPairReport report;
        report.segment = pair.segment;
        report.index = pair.index;
        report.conditions = check_conditions(*pair.polyline, *pair.curve, r, options);
        if (report.conditions.pass()) {
            report.uniqueness = verify_unique_disc_intersections(
                *pair.curve, *pair.polyline, r, options.grid, options.curve_disc_samples);
            if (report.uniqueness->all_unique()) {
                try {
                    const CorrespondenceTable table =
                        correspondence_h(*pair.curve, *pair.polyline, r, options.grid);
                    report.correspondence_monotone = table.strictly_monotone();
                    report.max_offset = table.max_offset();
                } catch (const InconsistencyError&) {
                    report.correspondence_monotone = false;
                }
            }
        }
        result.worst_clearance =
            std::min(result.worst_clearance, report.conditions.condition1.clearance);
        result.worst_condition2_margin =
            std::min(result.worst_condition2_margin, report.conditions.condition2.margin);
        result.failed_pairs += !report.pass();
        result.pairs.push_back(std::move(report));
    }
    result.pass = !result.pairs.empty() && result.failed_pairs == 0;
    return result;
}

CompositeVerification verify_composite(const CompositeBezier& curve,
                                       const std::vector<SubdivisionResult>& subdivisions,
                                       double r, const VerifyOptions& options) {
    if (subdivisions.size() != curve.segment_count()) {
        throw DomainError("one subdivision result per curve segment is required");
    }
    std::vector<SubPair> pairs;
    for (std::size_t s = 0; s < subdivisions.size(); ++s) {
        const SubdivisionResult& sub = subdivisions[s];
        if (sub.sub_segments.size() != sub.sub_polygons.size()) {
            throw DomainError("subdivision result has mismatched pieces");
        }
        for (std::size_t k = 0; k < sub.sub_segments.size(); ++k) {
            pairs.push_back({s, k, &sub.sub_segments[k], &sub.sub_polygons[k]});
        }
    }
    CompositeVerification result = verify_pairs(pairs, curve.segment_count(), r, options);
    for (std::size_t s = 0; s < subdivisions.size(); ++s) {
        result.iterations[s] = subdivisions[s].iterations;
    }
    return result;
}

}  // namespace knotcert
