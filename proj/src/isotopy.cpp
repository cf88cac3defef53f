#include "knotcert/isotopy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "knotcert/errors.hpp"

namespace knotcert {

namespace {

constexpr double kAmbiguityTolerance = 1e-9;
constexpr double kRimTolerance = 1e-12;

void require_in_disc(const Point3& x, const Disc& disc, bool interior, const char* name) {
    const Vec3 w = x - disc.center;
    const double off_plane = std::abs(dot(w, disc.normal));
    if (off_plane > orthogonality_tolerance(x)) {
        throw DomainError(std::string(name) + " is not in the disc plane");
    }
    const double d = norm(w);
    if (interior ? !(d < disc.radius) : d > disc.radius * (1.0 + 1e-12)) {
        throw DomainError(std::string(name) + (interior ? " must lie inside the disc"
                                                        : " lies outside the disc"));
    }
}

// Fraction of the way from p to the boundary along the ray through v.
double boundary_fraction(const Point3& p, const Disc& disc, const Point3& v) {
    Vec3 d = v - p;
    d = d - disc.normal * dot(d, disc.normal);
    const Vec3 w = p - disc.center;
    const double a = squared_norm(d);
    const double b = dot(w, d);
    const double c = squared_norm(w) - disc.radius * disc.radius;  // negative: p interior
    double disc_val = b * b - a * c;
    if (disc_val < 0.0) {
        if (disc_val < -1e-12 * std::max(1.0, b * b)) {
            throw InconsistencyError("ray from an interior point misses the disc boundary");
        }
        disc_val = 0.0;
    }
    const double root = std::sqrt(disc_val);
    // Positive root of a x^2 + 2 b x + c, in the cancellation-free form.
    const double to_boundary = b >= 0.0 ? -c / (b + root) : (root - b) / a;
    return 1.0 / to_boundary;
}

}  // namespace

Point3 push_map(const Point3& p, const Point3& q, const Disc& disc, const Point3& v) {
    require_in_disc(p, disc, true, "p");
    require_in_disc(q, disc, true, "q");
    require_in_disc(v, disc, false, "v");
    if (v == p) {
        return q;
    }
    // Rim points (up to rounding) stay fixed bitwise.
    if (p == q || distance(v, disc.center) >= disc.radius * (1.0 - kRimTolerance)) {
        return v;
    }
    const double lambda = boundary_fraction(p, disc, v);
    if (lambda >= 1.0) {
        return v;
    }
    // v = (1 - lambda) p + lambda b  maps to  (1 - lambda) q + lambda b.
    return v + (q - p) * (1.0 - lambda);
}

Point3 disc_isotopy(const Point3& p, const Point3& q, const Disc& disc, const Point3& v, double s) {
    if (!(s >= 0.0 && s <= 1.0)) {
        throw DomainError("isotopy time must lie in [0, 1]");
    }
    if (s == 0.0) {
        require_in_disc(v, disc, false, "v");
        return v;
    }
    return push_map(p, s == 1.0 ? q : lerp(p, q, s), disc, v);
}

IsotopyField::IsotopyField(BezierSegment seg, Polyline poly, double r, int coarse_samples)
    : projector_(std::move(seg), coarse_samples), poly_(std::move(poly)), r_(r) {
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw DomainError("isotopy field needs a finite positive radius");
    }
    const auto pts = projector_.segment().control_points();
    box_lo_ = box_hi_ = pts.front();
    for (const auto& p : pts) {
        box_lo_ = {std::min(box_lo_.x, p.x), std::min(box_lo_.y, p.y), std::min(box_lo_.z, p.z)};
        box_hi_ = {std::max(box_hi_.x, p.x), std::max(box_hi_.y, p.y), std::max(box_hi_.z, p.z)};
    }
}

bool IsotopyField::may_contain(const Point3& v) const {
    return v.x > box_lo_.x - r_ && v.x < box_hi_.x + r_ && v.y > box_lo_.y - r_ &&
           v.y < box_hi_.y + r_ && v.z > box_lo_.z - r_ && v.z < box_hi_.z + r_;
}

std::optional<SectionLocation> IsotopyField::locate(const Point3& v) const {
    if (!may_contain(v)) {
        return std::nullopt;
    }
    const ProjectionResult pr = projector_.project(v);
    const Projection& best = pr.best;
    if (!(best.distance < r_) || best.tangential > orthogonality_tolerance(v)) {
        return std::nullopt;
    }
    if (pr.runner_up && pr.runner_up->distance - best.distance <= kAmbiguityTolerance &&
        pr.runner_up->tangential <= orthogonality_tolerance(v)) {
        throw AmbiguityError("two nearest parameters at distance " + std::to_string(best.distance),
                             best.t, pr.runner_up->t);
    }
    return SectionLocation{best.t, best.foot, best.distance, best.tangential};
}

Point3 IsotopyField::image_of(double t) const {
    const auto hits = disc_polyline_intersections(segment(), t, r_, poly_);
    if (hits.size() != 1) {
        throw InconsistencyError("normal disc at t = " + std::to_string(t) + " meets the polyline " +
                                 std::to_string(hits.size()) + " times");
    }
    return hits.front().point;
}

Point3 IsotopyField::apply_at(const SectionLocation& loc, const Point3& v, double s) const {
    const Disc disc = normal_disc(segment(), loc.t, r_);
    const Point3 q = image_of(loc.t);
    return disc_isotopy(disc.center, q, disc, v, s);
}

Point3 IsotopyField::apply(const Point3& v, double s) const {
    if (!(s >= 0.0 && s <= 1.0)) {
        throw DomainError("isotopy time must lie in [0, 1]");
    }
    if (s == 0.0) {
        return v;
    }
    const auto loc = locate(v);
    return loc ? apply_at(*loc, v, s) : v;
}

Point3 ambient_map(const IsotopyField& field, const Point3& v, double s) {
    return field.apply(v, s);
}

CompositeIsotopy::CompositeIsotopy(std::vector<IsotopyField> fields) : fields_(std::move(fields)) {}

std::vector<std::size_t> CompositeIsotopy::claims(const Point3& v) const {
    std::vector<std::size_t> found;
    for (std::size_t k = 0; k < fields_.size(); ++k) {
        if (fields_[k].locate(v)) {
            found.push_back(k);
        }
    }
    return found;
}

Point3 CompositeIsotopy::apply(const Point3& v, double s) const {
    if (!(s >= 0.0 && s <= 1.0)) {
        throw DomainError("isotopy time must lie in [0, 1]");
    }
    if (s == 0.0) {
        return v;
    }
    std::optional<std::size_t> owner;
    std::optional<SectionLocation> owner_loc;
    for (std::size_t k = 0; k < fields_.size(); ++k) {
        const auto loc = fields_[k].locate(v);
        if (!loc) {
            continue;
        }
        if (owner && k > *owner + 1) {
            throw DisjointnessError("point claimed by pipe sections " + std::to_string(*owner) +
                                    " and " + std::to_string(k));
        }
        if (!owner) {
            owner = k;
            owner_loc = loc;
        }
    }
    return owner ? fields_[*owner].apply_at(*owner_loc, v, s) : v;
}

CompositeIsotopy build_isotopy(const std::vector<SubdivisionResult>& subdivisions,
                               const CompositeVerification& verification) {
    if (!verification.pass) {
        throw InconsistencyError("isotopy requires a passed verification");
    }
    std::vector<IsotopyField> fields;
    for (const auto& sub : subdivisions) {
        for (std::size_t k = 0; k < sub.sub_segments.size(); ++k) {
            fields.emplace_back(sub.sub_segments[k], sub.sub_polygons[k], verification.r,
                                verification.options.coarse_samples);
        }
    }
    if (fields.size() != verification.pairs.size()) {
        throw InconsistencyError("verification does not match the subdivision");
    }
    return CompositeIsotopy(std::move(fields));
}

Point3 compose_isotopy(const CompositeIsotopy& isotopy, const Point3& v, double s) {
    return isotopy.apply(v, s);
}

std::vector<std::vector<Point3>> sample_frames(const CompositeIsotopy& isotopy,
                                               const CompositeBezier& curve, int steps,
                                               int curve_samples) {
    if (steps < 2) {
        throw DomainError("sample_frames needs steps >= 2");
    }
    if (curve_samples < 2) {
        throw DomainError("sample_frames needs curve_samples >= 2");
    }
    std::vector<Point3> base(curve_samples);
    for (int k = 0; k < curve_samples; ++k) {
        const double u = k == curve_samples - 1
                             ? curve.param_max()
                             : curve.param_max() * static_cast<double>(k) / (curve_samples - 1);
        base[k] = curve.eval(u);
    }
    std::vector<std::vector<Point3>> frames;
    frames.reserve(steps);
    for (int i = 0; i < steps; ++i) {
        const double s = i == steps - 1 ? 1.0 : static_cast<double>(i) / (steps - 1);
        std::vector<Point3> frame(curve_samples);
        for (int k = 0; k < curve_samples; ++k) {
            frame[k] = isotopy.apply(base[k], s);
        }
        frames.push_back(std::move(frame));
    }
    return frames;
}

}  // namespace knotcert
