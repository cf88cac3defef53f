#include "corpus.hpp"

#include <cmath>
#include <numbers>

#include "knotcert/errors.hpp"
#include "knotcert/geometry.hpp"

namespace knotcert::corpus {

BezierSegment quadratic() { return BezierSegment({{0, 0, 0}, {1, 1, 0}, {2, 0, 0}}); }

BezierSegment random_segment(std::mt19937_64& rng, int degree, double min_sigma) {
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    for (;;) {
        std::vector<Point3> pts(degree + 1);
        for (auto& p : pts) {
            p = {coord(rng), coord(rng), coord(rng)};
        }
        BezierSegment seg(std::move(pts));
        try {
            if (min_derivative_norm(seg) > min_sigma) {
                return seg;
            }
        } catch (const RegularityError&) {
        }
    }
}

namespace {

struct Helix {
    double radius;
    double pitch;
    Point3 at(double angle) const {
        return {radius * std::cos(angle), radius * std::sin(angle), pitch * angle};
    }
};

std::vector<BezierSegment> helix_segments(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> segment_count(1, 3);
    std::uniform_int_distribution<int> degree_dist(3, 8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Helix helix{1.0 + unit(rng), 0.2 + 0.4 * unit(rng)};
    const double jitter = 0.03;

    std::vector<BezierSegment> segments;
    double angle = 2.0 * std::numbers::pi * unit(rng);
    const int count = segment_count(rng);
    for (int k = 0; k < count; ++k) {
        const int n = degree_dist(rng);
        const double sweep = 0.6 + 0.6 * unit(rng);  // helix radians per segment
        std::vector<Point3> pts(n + 1);
        int first_free = 0;
        if (!segments.empty()) {
            const BezierSegment& prev = segments.back();
            const int m = prev.degree();
            pts[0] = prev.back();
            const Vec3 end_tangent = prev.back() - prev.control_point(m - 1);
            pts[1] = pts[0] + end_tangent * (static_cast<double>(m) / n);
            first_free = 2;
        }
        for (int j = first_free; j <= n; ++j) {
            const double a = angle + sweep * static_cast<double>(j) / n;
            Point3 p = helix.at(a);
            if (j != 0 && j != n) {
                p = p + Vec3{jitter * (2 * unit(rng) - 1), jitter * (2 * unit(rng) - 1),
                             jitter * (2 * unit(rng) - 1)} *
                            (sweep * helix.radius / n);
            }
            pts[j] = p;
        }
        segments.emplace_back(std::move(pts));
        angle += sweep;
    }
    return segments;
}

}  // namespace

CompositeBezier random_composite(std::mt19937_64& rng) {
    for (;;) {
        try {
            CompositeBezier curve(helix_segments(rng));
            for (const auto& seg : curve.segments()) {
                min_derivative_norm(seg);
            }
            min_separation_distance(curve);
            return curve;
        } catch (const Error&) {
        }
    }
}

std::vector<CompositeBezier> composite_corpus(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<CompositeBezier> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        out.push_back(random_composite(rng));
    }
    return out;
}

}  // namespace knotcert::corpus
