#include "knotcert/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "knotcert/errors.hpp"
#include "knotcert/isotopy.hpp"
#include "knotcert/projection.hpp"

namespace knotcert {

namespace {

double on_curve_tolerance(const Point3& p) { return 1e-9 * (1.0 + norm(p)); }

// Interior vertices split the polyline only when they match a dyadic curve point this closely.
constexpr double kSplitTolerance = 1e-12;

// de Casteljau split at an arbitrary local parameter.
std::pair<BezierSegment, BezierSegment> split_at(const BezierSegment& seg, double t) {
    const auto pts = seg.control_points();
    const std::size_t n = pts.size() - 1;
    std::vector<Point3> work(pts.begin(), pts.end());
    std::vector<Point3> left(n + 1);
    std::vector<Point3> right(n + 1);
    left[0] = work[0];
    right[n] = work[n];
    for (std::size_t level = 1; level <= n; ++level) {
        for (std::size_t j = 0; j + level <= n; ++j) {
            work[j] = lerp(work[j], work[j + 1], t);
        }
        left[level] = work[0];
        right[n - level] = work[n - level];
    }
    const ParamInterval& iv = seg.interval();
    const double mid = iv.to_global(t);
    return {BezierSegment(std::move(left), {iv.lo, mid}),
            BezierSegment(std::move(right), {mid, iv.hi})};
}

// Level and index when [a, b] is a dyadic interval of [0, 1].
std::optional<std::pair<int, std::size_t>> dyadic_interval(double a, double b) {
    for (int level = 0; level <= 40; ++level) {
        const double width = std::ldexp(1.0, -level);
        if (b - a == width) {
            const double index = a / width;
            if (index == std::floor(index)) {
                return std::make_pair(level, static_cast<std::size_t>(index));
            }
            return std::nullopt;
        }
    }
    return std::nullopt;
}

BezierSegment piece_between(const BezierSegment& seg, double a, double b) {
    if (const auto d = dyadic_interval(a, b)) {
        return dyadic_piece(seg, d->first, d->second);
    }
    BezierSegment right = a > 0.0 ? split_at(seg, a).second : seg;
    if (b < 1.0) {
        right = split_at(right, (b - a) / (1.0 - a)).first;
    }
    return BezierSegment({right.control_points().begin(), right.control_points().end()}, {a, b});
}

// Dyadic parameter j / 2^20 matching t, if any.
std::optional<double> snap_dyadic(double t) {
    const double scaled = std::round(std::ldexp(t, 20));
    const double snapped = std::ldexp(scaled, -20);
    if (std::abs(snapped - t) <= 1e-9) {
        return snapped;
    }
    return std::nullopt;
}

// Curve point at dyadic t, bit-identical to the subdivision vertex there.
Point3 dyadic_point(const BezierSegment& seg, double t) {
    if (t == 0.0) {
        return seg.front();
    }
    int level = 20;
    auto index = static_cast<std::size_t>(std::ldexp(t, level));
    while (level > 0 && index % 2 == 0) {
        index /= 2;
        --level;
    }
    return dyadic_piece(seg, level, index).front();
}

}  // namespace

int Approximation::extra_iterations() const {
    int extra = 0;
    for (std::size_t k = 0; k < iterations.size(); ++k) {
        extra = std::max(extra, iterations[k] - start_iterations[k]);
    }
    return extra;
}

std::vector<Point3> Approximation::polyline() const {
    std::vector<Point3> out;
    for (const auto& sub : subdivisions) {
        for (const auto& poly : sub.sub_polygons) {
            const auto v = poly.vertices();
            out.insert(out.end(), out.empty() ? v.begin() : v.begin() + 1, v.end());
        }
    }
    return out;
}

PipeSpec analyze(const CompositeBezier& curve, const PipeOptions& options) {
    return pipe_radius(curve, options);
}

std::vector<SegmentBound> segment_bounds(const CompositeBezier& curve, double r) {
    std::vector<SegmentBound> bounds;
    for (const auto& seg : curve.segments()) {
        SegmentBound b;
        try {
            b.report = n_star(r, bound_inputs(seg));
        } catch (const BoundInfeasibleError& e) {
            b.infeasible = e.what();
        }
        bounds.push_back(std::move(b));
    }
    return bounds;
}

BezierSegment dyadic_piece(const BezierSegment& seg, int level, std::size_t index) {
    if (level < 0 || level >= 63 || index >= (std::size_t{1} << level)) {
        throw DomainError("dyadic piece index out of range");
    }
    BezierSegment piece = seg;
    for (int bit = level - 1; bit >= 0; --bit) {
        auto halves = subdivide_once(piece);
        piece = ((index >> bit) & 1U) ? std::move(halves.second) : std::move(halves.first);
    }
    return piece;
}

Approximation approximate(const CompositeBezier& curve, const ApproximateOptions& options) {
    if (options.retry_cap < 0) {
        throw DomainError("retry cap must be nonnegative");
    }
    Approximation result;
    result.retry_cap = options.retry_cap;
    result.pipe = analyze(curve, options.pipe);
    result.radius_override = options.radius.has_value();
    result.r = options.radius ? *options.radius : result.pipe.r;
    if (!std::isfinite(result.r)) {
        throw DomainError("pipe radius is unbounded for this curve; an explicit radius is required");
    }
    if (!(result.r > 0.0)) {
        throw DomainError("pipe radius must be positive");
    }
    result.bounds = segment_bounds(curve, result.r);
    for (std::size_t k = 0; k < curve.segment_count(); ++k) {
        if (options.iterations) {
            if (*options.iterations < 0) {
                throw DomainError("iteration override must be nonnegative");
            }
            result.start_iterations.push_back(*options.iterations);
        } else if (result.bounds[k].report) {
            result.start_iterations.push_back(result.bounds[k].report->N_star);
        } else {
            throw BoundInfeasibleError("segment " + std::to_string(k) + ": " +
                                       result.bounds[k].infeasible);
        }
    }
    result.iterations = result.start_iterations;

    for (int retry = 0;; ++retry) {
        result.subdivisions.clear();
        for (std::size_t k = 0; k < curve.segment_count(); ++k) {
            result.subdivisions.push_back(
                subdivide_iter(curve.segment(k), result.iterations[k], options.segment_cap));
        }
        ++result.attempts;
        result.verification =
            verify_composite(curve, result.subdivisions, result.r, options.verify);
        if (result.verification.pass || retry == options.retry_cap) {
            break;
        }
        std::vector<bool> failing(curve.segment_count(), false);
        for (const auto& pair : result.verification.pairs) {
            if (!pair.pass()) {
                failing[pair.segment] = true;
            }
        }
        for (std::size_t k = 0; k < failing.size(); ++k) {
            result.iterations[k] += failing[k] ? 1 : 0;
        }
    }

    if (result.verification.pass && options.spot_checks > 0) {
        result.spot_check = spot_check_isotopy(curve, result, options.seed, options.spot_checks);
    }
    return result;
}

ExternalVerification verify_external(const CompositeBezier& curve,
                                     const std::vector<Point3>& polyline, double r,
                                     const VerifyOptions& options) {
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw DomainError("verification needs a finite positive radius");
    }
    if (polyline.size() < 2) {
        throw DomainError("polyline needs at least 2 vertices");
    }
    ExternalVerification out;
    out.r = r;
    std::vector<Point3> verts = polyline;
    if (distance(verts.front(), curve.front()) > on_curve_tolerance(curve.front())) {
        throw DomainError("polyline does not start at the curve start");
    }
    if (distance(verts.back(), curve.back()) > on_curve_tolerance(curve.back())) {
        throw DomainError("polyline does not end at the curve end");
    }

    // Vertex index of each segment boundary.
    std::vector<std::size_t> boundary{0};
    for (std::size_t k = 1; k < curve.segment_count(); ++k) {
        const Point3& junction = curve.segment(k).front();
        std::size_t j = boundary.back() + 1;
        while (j + 1 < verts.size() && distance(verts[j], junction) > on_curve_tolerance(junction)) {
            ++j;
        }
        if (j + 1 >= verts.size()) {
            throw DomainError("polyline misses the junction before segment " + std::to_string(k));
        }
        boundary.push_back(j);
    }
    boundary.push_back(verts.size() - 1);

    for (std::size_t k = 0; k < curve.segment_count(); ++k) {
        const BezierSegment& seg = curve.segment(k);
        const CurveProjector projector(seg, options.coarse_samples);
        const std::size_t first = boundary[k];
        const std::size_t last = boundary[k + 1];
        if (last <= first) {
            throw DomainError("segment " + std::to_string(k) + " has no polyline edge");
        }
        // Split at interior vertices lying on the curve at dyadic parameters.
        std::vector<std::pair<std::size_t, double>> cuts{{first, 0.0}};
        for (std::size_t j = first + 1; j < last; ++j) {
            const Projection p = projector.project(verts[j]).best;
            if (p.distance > on_curve_tolerance(verts[j])) {
                continue;
            }
            const auto t = snap_dyadic(p.t);
            if (t && *t > cuts.back().second && *t < 1.0 &&
                distance(dyadic_point(seg, *t), verts[j]) <= kSplitTolerance * (1.0 + norm(verts[j]))) {
                cuts.emplace_back(j, *t);
            }
        }
        cuts.emplace_back(last, 1.0);
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            BezierSegment piece = piece_between(seg, cuts[c].second, cuts[c + 1].second);
            std::vector<Point3> pv(verts.begin() + cuts[c].first,
                                   verts.begin() + cuts[c + 1].first + 1);
            pv.front() = piece.front();
            pv.back() = piece.back();
            out.sub_polylines.emplace_back(std::move(pv), piece.interval());
            out.sub_curves.push_back(std::move(piece));
            out.segment_of.push_back(k);
        }
    }

    std::vector<SubPair> pairs;
    std::vector<std::size_t> index_in_segment(curve.segment_count(), 0);
    for (std::size_t j = 0; j < out.sub_curves.size(); ++j) {
        const std::size_t s = out.segment_of[j];
        pairs.push_back({s, index_in_segment[s]++, &out.sub_curves[j], &out.sub_polylines[j]});
    }
    out.verification = verify_pairs(pairs, curve.segment_count(), r, options);
    return out;
}

IsotopySpotCheck spot_check_isotopy(const CompositeBezier& curve, const Approximation& result,
                                    std::uint64_t seed, int points) {
    IsotopySpotCheck check;
    check.seed = seed;
    check.points = points;
    const CompositeIsotopy isotopy = build_isotopy(result.subdivisions, result.verification);
    const double r = result.r;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    auto nearest_distance = [&](const Point3& v) {
        double best = kInfinity;
        for (std::size_t k = 0; k < isotopy.size(); ++k) {
            const IsotopyField& f = isotopy.field(k);
            if (f.may_contain(v)) {
                best = std::min(best, CurveProjector(f.segment(), 32).project(v).best.distance);
            }
        }
        return best;
    };

    for (int i = 0; i < points; ++i) {
        const double u = unit(rng) * curve.param_max();
        const Point3 c = curve.eval(u);
        const Vec3 dir{gauss(rng), gauss(rng), gauss(rng)};
        const double len = norm(dir);
        const Point3 near = c + dir * (unit(rng) * 2.0 * r / (len > 0.0 ? len : 1.0));
        const std::size_t k = std::min(isotopy.size() - 1,
                                       static_cast<std::size_t>(unit(rng) * isotopy.size()));
        const double t = unit(rng);
        try {
            check.identity_max =
                std::max(check.identity_max, distance(isotopy.apply(near, 0.0), near));
            if (nearest_distance(near) >= r) {
                for (double s : {0.25, 0.5, 1.0}) {
                    check.exterior_max =
                        std::max(check.exterior_max, distance(isotopy.apply(near, s), near));
                }
            }
            const IsotopyField& field = isotopy.field(k);
            const Point3 on_curve = eval(field.segment(), t);
            check.endpoint_max = std::max(
                check.endpoint_max, distance(isotopy.apply(on_curve, 1.0), field.image_of(t)));
        } catch (const Error&) {
            ++check.errors;
        }
    }
    check.pass = check.errors == 0 && check.identity_max == 0.0 && check.exterior_max == 0.0 &&
                 check.endpoint_max <= 1e-9;
    return check;
}

}  // namespace knotcert
