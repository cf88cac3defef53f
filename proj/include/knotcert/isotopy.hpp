#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "knotcert/curve.hpp"
#include "knotcert/projection.hpp"
#include "knotcert/verify.hpp"

namespace knotcert {

// Homeomorphism of the disc sending each segment [p, b] (b on the boundary)
// linearly onto [q, b]. Fixes the boundary pointwise.
Point3 push_map(const Point3& p, const Point3& q, const Disc& disc, const Point3& v);

// Straight-line time extension: push_map(p, (1-s)p + sq, v). Identity at s = 0.
Point3 disc_isotopy(const Point3& p, const Point3& q, const Disc& disc, const Point3& v, double s);

// Where a point sits in one pipe section.
struct SectionLocation {
    double t = 0.0;          // local parameter of the disc containing the point
    Point3 center;           // C(t)
    double distance = 0.0;
    double tangential = 0.0;
};

// Isotopy supported on the pipe section of radius r around one sub-curve,
// moving the sub-curve onto its sub-polygon. Build only from a verified pair.
class IsotopyField {
public:
    IsotopyField(BezierSegment seg, Polyline poly, double r,
                 int coarse_samples = CurveProjector::kDefaultCoarseSamples);

    const BezierSegment& segment() const { return projector_.segment(); }
    const Polyline& polyline() const { return poly_; }
    double radius() const { return r_; }

    // Cheap rejection: v farther than r from the control-point box.
    bool may_contain(const Point3& v) const;

    // Disc containing v, if v lies inside the open section (distance below r,
    // orthogonal foot point). Throws AmbiguityError on two equally near feet.
    std::optional<SectionLocation> locate(const Point3& v) const;

    // L~(t): the point where the normal disc at t meets the sub-polygon.
    Point3 image_of(double t) const;

    Point3 apply(const Point3& v, double s) const;

private:
    Point3 apply_at(const SectionLocation& loc, const Point3& v, double s) const;

    CurveProjector projector_;
    Polyline poly_;
    double r_;
    Point3 box_lo_;
    Point3 box_hi_;

    friend class CompositeIsotopy;
};

Point3 ambient_map(const IsotopyField& field, const Point3& v, double s);

// Composition of the per-sub-curve fields in parameter order. Supports are
// disjoint apart from shared junction discs, where every field is the identity.
class CompositeIsotopy {
public:
    explicit CompositeIsotopy(std::vector<IsotopyField> fields);

    std::size_t size() const { return fields_.size(); }
    const IsotopyField& field(std::size_t k) const { return fields_[k]; }

    // Indices of fields whose section contains v.
    std::vector<std::size_t> claims(const Point3& v) const;

    Point3 apply(const Point3& v, double s) const;

private:
    std::vector<IsotopyField> fields_;
};

// Fields for every sub-pair of a passed verification. Throws
// InconsistencyError when the verification did not pass.
CompositeIsotopy build_isotopy(const std::vector<SubdivisionResult>& subdivisions,
                               const CompositeVerification& verification);

Point3 compose_isotopy(const CompositeIsotopy& isotopy, const Point3& v, double s);

// Frames s = 0, 1/(steps-1), ..., 1 of the curve moved by the isotopy, each
// sampled at curve_samples global parameters.
std::vector<std::vector<Point3>> sample_frames(const CompositeIsotopy& isotopy,
                                               const CompositeBezier& curve, int steps,
                                               int curve_samples);

}  // namespace knotcert
