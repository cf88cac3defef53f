#include "knotcert/projection.hpp"

#include <algorithm>
#include <cmath>

#include "knotcert/errors.hpp"

namespace knotcert {

namespace {

Projection make_projection(const BezierSegment& seg, const Point3& q, double t) {
    const CurveJet jet = eval_jet(seg, t);
    const Vec3 diff = q - jet.point;
    const double speed = norm(jet.d1);
    Projection p;
    p.t = t;
    p.foot = jet.point;
    p.distance = norm(diff);
    p.tangential = speed > 0.0 ? std::abs(dot(diff, jet.d1)) / speed : p.distance;
    return p;
}

double stationarity(const BezierSegment& seg, const Point3& q, double t) {
    const CurveJet jet = eval_jet(seg, t);
    return dot(jet.point - q, jet.d1);
}

}  // namespace

CurveProjector::CurveProjector(BezierSegment seg, int coarse_samples) : seg_(std::move(seg)) {
    if (coarse_samples < 2) {
        throw DomainError("projector needs at least 2 coarse samples");
    }
    params_.resize(coarse_samples);
    samples_.resize(coarse_samples);
    for (int k = 0; k < coarse_samples; ++k) {
        params_[k] = static_cast<double>(k) / (coarse_samples - 1);
        samples_[k] = eval(seg_, params_[k]);
    }
}

Projection CurveProjector::refine(const Point3& q, int k) const {
    const int last = static_cast<int>(params_.size()) - 1;
    double lo = params_[std::max(k - 1, 0)];
    double hi = params_[std::min(k + 1, last)];

    Projection best = make_projection(seg_, q, params_[k]);
    auto consider = [&](double t) {
        Projection p = make_projection(seg_, q, t);
        if (p.distance < best.distance) {
            best = p;
        }
    };
    consider(lo);
    consider(hi);

    const double g_lo = stationarity(seg_, q, lo);
    const double g_hi = stationarity(seg_, q, hi);
    if (g_lo < 0.0 && g_hi > 0.0) {
        double t = params_[k];
        for (int iter = 0; iter < 100; ++iter) {
            const CurveJet jet = eval_jet(seg_, t);
            const Vec3 diff = jet.point - q;
            const double g = dot(diff, jet.d1);
            if (g == 0.0) {
                break;
            }
            if (g < 0.0) {
                lo = t;
            } else {
                hi = t;
            }
            const double slope = squared_norm(jet.d1) + dot(diff, jet.d2);
            double next = slope > 0.0 ? t - g / slope : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) {
                next = 0.5 * (lo + hi);
            }
            const bool converged = std::abs(next - t) <= 1e-16 || hi - lo <= 1e-16;
            t = next;
            if (converged) {
                break;
            }
        }
        consider(t);
    }
    return best;
}

ProjectionResult CurveProjector::project(const Point3& q) const {
    const int count = static_cast<int>(samples_.size());
    std::vector<double> d2(count);
    for (int k = 0; k < count; ++k) {
        d2[k] = squared_norm(samples_[k] - q);
    }

    // Discrete local minima of the sampled squared distance, best first.
    std::vector<int> minima;
    for (int k = 0; k < count; ++k) {
        const bool left_ok = k == 0 || d2[k] <= d2[k - 1];
        const bool right_ok = k == count - 1 || d2[k] <= d2[k + 1];
        if (left_ok && right_ok) {
            minima.push_back(k);
        }
    }
    std::sort(minima.begin(), minima.end(), [&](int a, int b) { return d2[a] < d2[b]; });

    // Plateaus produce runs of adjacent minima; keep one per run.
    std::vector<int> picked;
    for (int k : minima) {
        const bool near_existing = std::any_of(picked.begin(), picked.end(),
                                               [&](int p) { return std::abs(p - k) <= 2; });
        if (!near_existing) {
            picked.push_back(k);
        }
        if (picked.size() == 3) {
            break;
        }
    }

    std::vector<Projection> refined;
    refined.reserve(picked.size());
    for (int k : picked) {
        refined.push_back(refine(q, k));
    }
    std::sort(refined.begin(), refined.end(),
              [](const Projection& a, const Projection& b) { return a.distance < b.distance; });

    ProjectionResult result;
    result.best = refined.front();
    for (std::size_t j = 1; j < refined.size(); ++j) {
        if (std::abs(refined[j].t - result.best.t) > 1e-6) {
            result.runner_up = refined[j];
            break;
        }
    }
    return result;
}

}  // namespace knotcert
