#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "knotcert/bounds.hpp"
#include "knotcert/curve.hpp"
#include "knotcert/geometry.hpp"
#include "knotcert/verify.hpp"

namespace knotcert {

inline constexpr const char* kToolVersion = "0.1.0";

struct ApproximateOptions {
    PipeOptions pipe;
    std::optional<double> radius;      // overrides the computed pipe radius
    std::optional<int> iterations;     // overrides N* on every segment
    int retry_cap = 3;
    VerifyOptions verify;
    std::size_t segment_cap = kDefaultSegmentCap;
    std::uint64_t seed = 1;
    int spot_checks = 32;              // isotopy spot checks after a pass; 0 disables
};

// Either a bound report or the reason none exists for this segment.
struct SegmentBound {
    std::optional<BoundReport> report;
    std::string infeasible;
};

struct IsotopySpotCheck {
    std::uint64_t seed = 0;
    int points = 0;
    double identity_max = 0.0;      // max |T(v,0) - v|
    double exterior_max = 0.0;      // max |T(v,s) - v| over points at distance >= r
    double endpoint_max = 0.0;      // max |T(C(t),1) - L~(t)|
    int errors = 0;                 // ambiguity or disjointness failures
    bool pass = false;
};

struct Approximation {
    PipeSpec pipe;
    double r = 0.0;
    bool radius_override = false;
    std::vector<SegmentBound> bounds;
    std::vector<int> start_iterations;  // N* (or override) per segment
    std::vector<int> iterations;        // iterations used in the final attempt
    int attempts = 0;
    int retry_cap = 0;
    std::vector<SubdivisionResult> subdivisions;
    CompositeVerification verification;
    std::optional<IsotopySpotCheck> spot_check;

    bool pass() const { return verification.pass; }
    // Largest increment over the starting count on any segment.
    int extra_iterations() const;
    // Concatenated sub-polygons, junction vertices not repeated.
    std::vector<Point3> polyline() const;
};

// Pipe radius and a-priori counts only.
PipeSpec analyze(const CompositeBezier& curve, const PipeOptions& options = {});
std::vector<SegmentBound> segment_bounds(const CompositeBezier& curve, double r);

// Subdivide each segment N* times (or the override), verify, and add one
// iteration to every failing segment until all pass or retry_cap retries are used.
Approximation approximate(const CompositeBezier& curve, const ApproximateOptions& options = {});

// Verifies an externally supplied polyline. The polyline must pass through
// every segment junction and may be split further at vertices lying on the
// curve at dyadic parameters.
struct ExternalVerification {
    double r = 0.0;
    std::vector<BezierSegment> sub_curves;
    std::vector<Polyline> sub_polylines;
    std::vector<std::size_t> segment_of;
    CompositeVerification verification;
};

ExternalVerification verify_external(const CompositeBezier& curve,
                                     const std::vector<Point3>& polyline, double r,
                                     const VerifyOptions& options = {});

// Piece `index` of the uniform 2^level split, bit-identical to subdivide_iter.
BezierSegment dyadic_piece(const BezierSegment& seg, int level, std::size_t index);

IsotopySpotCheck spot_check_isotopy(const CompositeBezier& curve, const Approximation& result,
                                    std::uint64_t seed, int points);

}  // namespace knotcert
