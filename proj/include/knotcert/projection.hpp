#pragma once

#include <optional>
#include <vector>

#include "knotcert/curve.hpp"

namespace knotcert {

struct Projection {
    double t = 0.0;             // local parameter of the foot point
    Point3 foot;                // C(t)
    double distance = 0.0;      // |q - C(t)|
    double tangential = 0.0;    // |(q - C(t)) . C'(t)| / |C'(t)|
};

struct ProjectionResult {
    Projection best;
    // Best competing local minimum away from `best`, when one exists.
    std::optional<Projection> runner_up;
};

// Nearest-parameter search on one segment: coarse sampling, then a bracketed
// safeguarded Newton solve of (C(t) - q) . C'(t) = 0 around each candidate.
class CurveProjector {
public:
    static constexpr int kDefaultCoarseSamples = 256;

    explicit CurveProjector(BezierSegment seg, int coarse_samples = kDefaultCoarseSamples);

    const BezierSegment& segment() const { return seg_; }
    ProjectionResult project(const Point3& q) const;

private:
    Projection refine(const Point3& q, int k) const;

    BezierSegment seg_;
    std::vector<double> params_;
    std::vector<Point3> samples_;
};

}  // namespace knotcert
