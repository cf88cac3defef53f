#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "knotcert/curve.hpp"

namespace knotcert::corpus {

// (0,0,0), (1,1,0), (2,0,0): curvature 1 at t = 1/2, hodograph (2,2,0), (2,-2,0).
BezierSegment quadratic();

// Random segment with coordinates in [-1, 1], kept only when its derivative
// lower bound exceeds min_sigma.
BezierSegment random_segment(std::mt19937_64& rng, int degree, double min_sigma = 0.2);

// Random simple regular composite curve: 1..3 segments of degree 3..8 whose
// control points follow a jittered helix, joined C^1. Verified simple and
// regular before it is returned.
CompositeBezier random_composite(std::mt19937_64& rng);

// The fixed corpus used by the acceptance checks.
std::vector<CompositeBezier> composite_corpus(std::size_t count, std::uint64_t seed);

}  // namespace knotcert::corpus
