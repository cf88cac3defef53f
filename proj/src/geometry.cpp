#include "knotcert/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "knotcert/errors.hpp"

namespace knotcert {

namespace {

constexpr double kInvPhi = 0.6180339887498949;

// Golden-section minimization of a unimodal f on [a, b].
template <typename F>
double golden_minimize(F&& f, double a, double b, double tol) {
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Indices of discrete local maxima of values, largest first, at most `keep`.
std::vector<int> top_local_maxima(const std::vector<double>& values, std::size_t keep) {
    const int n = static_cast<int>(values.size());
    std::vector<int> peaks;
    for (int k = 0; k < n; ++k) {
        const bool left_ok = k == 0 || values[k] >= values[k - 1];
        const bool right_ok = k == n - 1 || values[k] >= values[k + 1];
        if (left_ok && right_ok) {
            peaks.push_back(k);
        }
    }
    std::sort(peaks.begin(), peaks.end(), [&](int a, int b) { return values[a] > values[b]; });
    if (peaks.size() > keep) {
        peaks.resize(keep);
    }
    return peaks;
}

double hodograph_scale(const BezierSegment& seg) {
    double scale = 0.0;
    const auto pts = seg.control_points();
    for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
        scale = std::max(scale, norm(pts[j + 1] - pts[j]));
    }
    return scale * seg.degree();
}

// Minimum-norm point of the affine hull of a small subset, if its barycentric
// coordinates are (numerically) nonnegative.
bool subset_min_norm(std::span<const Point3> pts, const int* idx, int count, double& out) {
    constexpr double kBaryTol = -1e-12;
    const Point3& p0 = pts[idx[0]];
    if (count == 1) {
        out = norm(p0);
        return true;
    }
    if (count == 2) {
        const Vec3 e = pts[idx[1]] - p0;
        const double ee = dot(e, e);
        if (ee == 0.0) {
            return false;
        }
        const double mu = -dot(p0, e) / ee;
        if (mu < kBaryTol || mu > 1.0 - kBaryTol) {
            return false;
        }
        out = norm(p0 + e * mu);
        return true;
    }
    if (count == 3) {
        const Vec3 e1 = pts[idx[1]] - p0;
        const Vec3 e2 = pts[idx[2]] - p0;
        const double g11 = dot(e1, e1);
        const double g12 = dot(e1, e2);
        const double g22 = dot(e2, e2);
        const double det = g11 * g22 - g12 * g12;
        if (!(det > 1e-14 * g11 * g22)) {
            return false;
        }
        const double b1 = -dot(p0, e1);
        const double b2 = -dot(p0, e2);
        const double mu1 = (b1 * g22 - b2 * g12) / det;
        const double mu2 = (g11 * b2 - g12 * b1) / det;
        if (mu1 < kBaryTol || mu2 < kBaryTol || 1.0 - mu1 - mu2 < kBaryTol) {
            return false;
        }
        out = norm(p0 + e1 * mu1 + e2 * mu2);
        return true;
    }
    // Tetrahedron: the affine hull is all of R^3, so the question is whether
    // the origin lies inside.
    const Vec3 e1 = pts[idx[1]] - p0;
    const Vec3 e2 = pts[idx[2]] - p0;
    const Vec3 e3 = pts[idx[3]] - p0;
    const double det = dot(e1, cross(e2, e3));
    if (!(std::abs(det) > 1e-14 * norm(e1) * norm(e2) * norm(e3))) {
        return false;
    }
    const Vec3 rhs = -p0;
    const double mu1 = dot(rhs, cross(e2, e3)) / det;
    const double mu2 = dot(e1, cross(rhs, e3)) / det;
    const double mu3 = dot(e1, cross(e2, rhs)) / det;
    if (mu1 < kBaryTol || mu2 < kBaryTol || mu3 < kBaryTol || 1.0 - mu1 - mu2 - mu3 < kBaryTol) {
        return false;
    }
    out = 0.0;
    return true;
}

// Frank-Wolfe with a support-function lower bound; used for large point sets.
double hull_distance_lower_bound(std::span<const Point3> pts) {
    Point3 x = pts[0];
    for (const auto& p : pts) {
        if (squared_norm(p) < squared_norm(x)) {
            x = p;
        }
    }
    double lower = 0.0;
    for (int iter = 0; iter < 500; ++iter) {
        const double xn = norm(x);
        if (xn == 0.0) {
            return 0.0;
        }
        const Vec3 dir = x / xn;
        std::size_t best = 0;
        double support = dot(pts[0], dir);
        for (std::size_t j = 1; j < pts.size(); ++j) {
            const double v = dot(pts[j], dir);
            if (v < support) {
                support = v;
                best = j;
            }
        }
        lower = std::max(lower, support);
        if (xn - lower <= 1e-12 * xn) {
            break;
        }
        const Vec3 step = pts[best] - x;
        const double ss = squared_norm(step);
        if (ss == 0.0) {
            break;
        }
        const double gamma = std::clamp(-dot(x, step) / ss, 0.0, 1.0);
        x = x + step * gamma;
    }
    return std::max(lower, 0.0);
}

double min_norm_point_distance(std::span<const Point3> pts) {
    const int n = static_cast<int>(pts.size());
    if (n > 12) {
        return hull_distance_lower_bound(pts);
    }
    double best = kInfinity;
    int idx[4];
    double value = 0.0;
    for (int a = 0; a < n; ++a) {
        idx[0] = a;
        if (subset_min_norm(pts, idx, 1, value)) best = std::min(best, value);
        for (int b = a + 1; b < n; ++b) {
            idx[1] = b;
            if (subset_min_norm(pts, idx, 2, value)) best = std::min(best, value);
            for (int c = b + 1; c < n; ++c) {
                idx[2] = c;
                if (subset_min_norm(pts, idx, 3, value)) best = std::min(best, value);
                for (int d = c + 1; d < n; ++d) {
                    idx[3] = d;
                    if (subset_min_norm(pts, idx, 4, value)) {
                        return 0.0;
                    }
                }
            }
        }
    }
    return best;
}

}  // namespace

double angle_between(const Vec3& u, const Vec3& v) {
    if (!is_finite(u) || !is_finite(v)) {
        throw DomainError("angle_between: non-finite vector");
    }
    if (squared_norm(u) == 0.0 || squared_norm(v) == 0.0) {
        throw DomainError("angle_between: zero vector");
    }
    return std::atan2(norm(cross(u, v)), dot(u, v));
}

TotalCurvature total_curvature(const Polyline& poly) {
    TotalCurvature result;
    for (std::size_t j = 0; j + 2 < poly.size(); ++j) {
        const double a = angle_between(poly.edge(j), poly.edge(j + 1));
        result.exterior_angles.push_back(a);
        result.total += a;
    }
    return result;
}

double spherical_chain_slack(std::span<const Vec3> vectors) {
    if (vectors.size() < 3) {
        throw DomainError("spherical_chain_slack needs at least 3 vectors");
    }
    double chain = 0.0;
    for (std::size_t j = 0; j + 1 < vectors.size(); ++j) {
        chain += angle_between(vectors[j], vectors[j + 1]);
    }
    return chain - angle_between(vectors.front(), vectors.back());
}

AngleProfile derivative_angle_profile(const BezierSegment& seg, const Polyline& poly,
                                      int grid_size) {
    if (grid_size < 2) {
        throw DomainError("derivative_angle_profile needs grid_size >= 2");
    }
    const std::size_t edges = poly.edge_count();
    const double speed_floor = 1e-14 * std::max(hodograph_scale(seg), 1e-300);

    std::vector<double> params;
    params.reserve(grid_size + edges);
    for (int k = 0; k < grid_size; ++k) {
        params.push_back(static_cast<double>(k) / (grid_size - 1));
    }
    for (std::size_t j = 1; j < edges; ++j) {
        params.push_back(static_cast<double>(j) / static_cast<double>(edges));
    }
    std::sort(params.begin(), params.end());
    params.erase(std::unique(params.begin(), params.end()), params.end());

    AngleProfile profile;
    profile.samples.reserve(params.size());
    for (double t : params) {
        const Vec3 d = eval_jet(seg, t).d1;
        if (!(norm(d) > speed_floor)) {
            throw RegularityError("derivative vanishes at local parameter " + std::to_string(t));
        }
        const double scaled = t * static_cast<double>(edges);
        std::size_t j = std::min(static_cast<std::size_t>(scaled), edges - 1);
        double theta = angle_between(d, poly.edge(j));
        // At a breakpoint L' is two-sided; keep the larger angle.
        if (static_cast<double>(j) == scaled && j > 0) {
            theta = std::max(theta, angle_between(d, poly.edge(j - 1)));
        }
        profile.samples.push_back({t, theta});
        profile.max_theta = std::max(profile.max_theta, theta);
    }
    return profile;
}

double curvature_at(const BezierSegment& seg, double t) {
    const CurveJet jet = eval_jet(seg, t);
    const double speed = norm(jet.d1);
    if (speed == 0.0) {
        throw RegularityError("derivative vanishes at local parameter " + std::to_string(t));
    }
    return norm(cross(jet.d1, jet.d2)) / (speed * speed * speed);
}

CurvatureMax max_curvature(const BezierSegment& seg, int samples) {
    if (samples < 2) {
        throw DomainError("max_curvature needs at least 2 samples");
    }
    std::vector<double> kappa(samples);
    for (int k = 0; k < samples; ++k) {
        kappa[k] = curvature_at(seg, static_cast<double>(k) / (samples - 1));
    }
    CurvatureMax best;
    for (int k : top_local_maxima(kappa, 4)) {
        const double lo = static_cast<double>(std::max(k - 1, 0)) / (samples - 1);
        const double hi = static_cast<double>(std::min(k + 1, samples - 1)) / (samples - 1);
        const double t = golden_minimize([&](double s) { return -curvature_at(seg, s); }, lo, hi,
                                         1e-10);
        for (double cand : {t, static_cast<double>(k) / (samples - 1)}) {
            const double value = curvature_at(seg, cand);
            if (value > best.kappa) {
                best = {value, cand};
            }
        }
    }
    return best;
}

CurvatureReport curvature_report(const BezierSegment& seg, const Polyline& poly) {
    const CurvatureMax km = max_curvature(seg);
    TotalCurvature tc = total_curvature(poly);
    return {km.kappa, km.argmax_t, tc.total, std::move(tc.exterior_angles)};
}

double origin_hull_distance(std::span<const Point3> points) {
    if (points.empty()) {
        throw DomainError("origin_hull_distance needs at least one point");
    }
    return min_norm_point_distance(points);
}

double min_derivative_norm(const BezierSegment& seg) {
    const BezierSegment hodo = hodograph(seg);
    if (hodo.degree() == 0) {
        const double value = norm(hodo.front());
        if (value == 0.0) {
            throw RegularityError("constant derivative is zero");
        }
        return value;
    }

    struct Piece {
        BezierSegment seg;
        double lower;
    };
    std::vector<Piece> pieces{{hodo, origin_hull_distance(hodo.control_points())}};
    double upper = std::min(norm(hodo.front()), norm(hodo.back()));
    double lower = pieces.front().lower;

    for (int depth = 1; depth <= 12 && lower < upper; ++depth) {
        std::vector<Piece> next;
        for (const auto& piece : pieces) {
            if (piece.lower > upper) {
                continue;
            }
            auto [l, r] = subdivide_once(piece.seg);
            upper = std::min(upper, norm(l.back()));
            const double ll = origin_hull_distance(l.control_points());
            const double rl = origin_hull_distance(r.control_points());
            next.push_back({std::move(l), ll});
            next.push_back({std::move(r), rl});
        }
        std::erase_if(next, [&](const Piece& p) { return p.lower > upper; });
        double new_lower = kInfinity;
        for (const auto& p : next) {
            new_lower = std::min(new_lower, p.lower);
        }
        pieces = std::move(next);
        const bool stable = lower > 0.0 && std::abs(new_lower - lower) <= 1e-6 * new_lower;
        lower = new_lower;
        if (stable) {
            break;
        }
    }
    if (!(lower > 0.0)) {
        throw RegularityError("cannot certify a nonzero derivative: hodograph hull contains the origin");
    }
    return std::min(lower, upper);
}

SeparationResult min_separation_distance(const CompositeBezier& curve, int grid) {
    if (grid < 4) {
        throw DomainError("min_separation_distance needs grid >= 4");
    }
    const double umax = curve.param_max();
    std::vector<double> u(grid);
    std::vector<Point3> pts(grid);
    for (int i = 0; i < grid; ++i) {
        u[i] = umax * static_cast<double>(i) / (grid - 1);
        pts[i] = curve.eval(u[i]);
    }
    std::vector<double> step(grid, 0.0);
    for (int i = 0; i < grid; ++i) {
        const double back = i > 0 ? distance(pts[i], pts[i - 1]) : 0.0;
        const double fwd = i + 1 < grid ? distance(pts[i], pts[i + 1]) : 0.0;
        step[i] = std::max(back, fwd);
    }
    std::vector<double> arc(grid, 0.0);
    for (int i = 1; i < grid; ++i) {
        arc[i] = arc[i - 1] + distance(pts[i], pts[i - 1]);
    }
    auto dist = [&](int i, int j) { return distance(pts[i], pts[j]); };

    SeparationResult result;
    result.grid = grid;

    struct Candidate {
        int i;
        int j;
        double d;
    };
    std::vector<Candidate> candidates;
    for (int i = 0; i < grid; ++i) {
        for (int j = i + 2; j < grid; ++j) {
            const double d = dist(i, j);
            // Neighbouring samples along the curve, not a return of the curve to itself.
            const double exclusion = 8.0 * std::max(step[i], step[j]);
            if (arc[j] - arc[i] <= exclusion) {
                result.exclusion_arc = std::max(result.exclusion_arc, exclusion);
                continue;
            }
            bool is_min = true;
            for (int di = -1; di <= 1 && is_min; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    const int a = i + di;
                    const int b = j + dj;
                    if ((di == 0 && dj == 0) || a < 0 || b < 0 || a >= grid || b >= grid) {
                        continue;
                    }
                    if (dist(a, b) < d) {
                        is_min = false;
                        break;
                    }
                }
            }
            if (is_min) {
                candidates.push_back({i, j, d});
            }
        }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) { return a.d < b.d; });
    if (candidates.size() > 32) {
        candidates.resize(32);
    }

    for (const auto& c : candidates) {
        const double s_lo = u[std::max(c.i - 1, 0)];
        const double s_hi = u[std::min(c.i + 1, grid - 1)];
        const double t_lo = u[std::max(c.j - 1, 0)];
        const double t_hi = u[std::min(c.j + 1, grid - 1)];
        double s = u[c.i];
        double t = u[c.j];
        for (int round = 0; round < 60; ++round) {
            const Point3 ct = curve.eval(t);
            const double s_new = golden_minimize(
                [&](double x) { return squared_norm(curve.eval(x) - ct); }, s_lo, s_hi, 1e-13);
            const Point3 cs = curve.eval(s_new);
            const double t_new = golden_minimize(
                [&](double x) { return squared_norm(curve.eval(x) - cs); }, t_lo, t_hi, 1e-13);
            const bool done = std::abs(s_new - s) < 1e-12 && std::abs(t_new - t) < 1e-12;
            s = s_new;
            t = t_new;
            if (done) {
                break;
            }
        }
        double d = distance(curve.eval(s), curve.eval(t));
        if (c.d < d) {  // never worse than the sampled pair
            d = c.d;
            s = u[c.i];
            t = u[c.j];
        }
        if (d < result.d_min) {
            result.d_min = d;
            result.s = s;
            result.t = t;
        }
    }
    if (result.d_min < 1e-9) {
        throw SelfIntersectionError("curve is not simple: points at global parameters " +
                                    std::to_string(result.s) + " and " +
                                    std::to_string(result.t) + " are " +
                                    std::to_string(result.d_min) + " apart");
    }
    return result;
}

double end_radius(const CompositeBezier& curve, int samples) {
    if (samples < 3) {
        throw DomainError("end_radius needs at least 3 samples");
    }
    const double umax = curve.param_max();
    std::vector<double> u(samples);
    std::vector<Point3> pts(samples);
    for (int i = 0; i < samples; ++i) {
        u[i] = umax * static_cast<double>(i) / (samples - 1);
        pts[i] = curve.eval(u[i]);
    }

    double best = kInfinity;
    auto scan = [&](bool from_start) {
        const Point3 e = from_start ? curve.front() : curve.back();
        std::vector<double> g(samples);
        for (int k = 0; k < samples; ++k) {
            // index 0 is the endpoint itself
            g[k] = distance(pts[from_start ? k : samples - 1 - k], e);
        }
        for (int k = 1; k < samples; ++k) {
            const bool left_ok = g[k] <= g[k - 1];
            const bool right_ok = k == samples - 1 || g[k] <= g[k + 1];
            if (!(left_ok && right_ok)) {
                continue;
            }
            const int i = from_start ? k : samples - 1 - k;
            const double lo = u[std::max(i - 1, 0)];
            const double hi = u[std::min(i + 1, samples - 1)];
            const double t = golden_minimize(
                [&](double x) { return squared_norm(curve.eval(x) - e); }, lo, hi, 1e-13);
            best = std::min({best, distance(curve.eval(t), e), g[k]});
        }
    };
    scan(true);
    scan(false);
    return best;
}

PipeSpec pipe_radius(const CompositeBezier& curve, const PipeOptions& options) {
    if (!(options.radius_scale > 0.0) || !std::isfinite(options.radius_scale)) {
        throw DomainError("radius scale must be positive and finite");
    }
    PipeSpec pipe;
    pipe.radius_scale = options.radius_scale;
    pipe.kappa_safety = options.kappa_safety;
    for (const auto& seg : curve.segments()) {
        min_derivative_norm(seg);  // regularity gate
        pipe.kappa_max_raw = std::max(pipe.kappa_max_raw, max_curvature(seg).kappa);
    }
    pipe.kappa_max = pipe.kappa_max_raw * options.kappa_safety;
    pipe.separation = min_separation_distance(curve, options.separation_grid);
    pipe.d_min = pipe.separation.d_min;
    pipe.r_end = end_radius(curve);
    const double curvature_radius = pipe.kappa_max > 0.0 ? 1.0 / pipe.kappa_max : kInfinity;
    pipe.r = std::min({curvature_radius, pipe.d_min, pipe.r_end});
    if (pipe.r < kInfinity) {
        pipe.r *= options.radius_scale;
    }
    return pipe;
}

}  // namespace knotcert
