#include "knotcert/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "knotcert/errors.hpp"
#include "knotcert/geometry.hpp"

namespace knotcert {

namespace {

// ceil() that ignores rounding noise just above an integer.
int tolerant_ceil(double x) { return static_cast<int>(std::ceil(x - 1e-9)); }

double hodograph_factor(const BoundInputs& in) {
    return in.n_inf_hodo * static_cast<double>(in.n - 1) * in.d2p_prime;
}

void require_valid(const BoundInputs& in) {
    if (in.n < 1) {
        throw DomainError("bound inputs: degree must be >= 1");
    }
    for (double v : {in.n_inf_hodo, in.n_inf_curve, in.d2p_prime, in.d2p, in.sigma, in.m_const}) {
        if (!std::isfinite(v) || v < 0.0) {
            throw DomainError("bound inputs must be finite and nonnegative");
        }
    }
    if (!(in.sigma > 0.0)) {
        throw DomainError("bound inputs: sigma must be positive");
    }
}

}  // namespace

double n_infinity(int k) {
    if (k < 1) {
        throw DomainError("n_infinity needs degree >= 1, got " + std::to_string(k));
    }
    const double lo = static_cast<double>(k / 2);
    const double hi = static_cast<double>((k + 1) / 2);
    return lo * hi / (2.0 * k);
}

BoundInputs bound_inputs(const BezierSegment& seg) {
    BoundInputs in;
    in.n = seg.degree();
    if (in.n < 1) {
        throw DomainError("bound inputs need degree >= 1");
    }
    const BezierSegment hodo = hodograph(seg);
    in.n_inf_hodo = in.n >= 2 ? n_infinity(in.n - 1) : 0.0;
    in.n_inf_curve = n_infinity(in.n);
    in.d2p_prime = hodo.control_points().size() >= 3 ? second_difference_norm(hodo.control_points()) : 0.0;
    in.d2p = seg.control_points().size() >= 3 ? second_difference_norm(seg.control_points()) : 0.0;
    in.sigma = min_derivative_norm(seg);
    in.m_const = 0.0;
    for (const auto& p : hodo.control_points()) {
        in.m_const = std::max(in.m_const, norm(p));
    }
    return in;
}

double b_prime_dist(int i, const BoundInputs& in) {
    if (i < 0) {
        throw DomainError("b_prime_dist needs i >= 0");
    }
    return std::ldexp(hodograph_factor(in), -2 * i);
}

double condition2_angle(int n) {
    if (n < 2) {
        throw DomainError("condition 2 angle threshold needs degree >= 2");
    }
    return std::numbers::pi / (2.0 * (n - 1));
}

AngleBound angle_bound(double nu, const BoundInputs& in) {
    require_valid(in);
    if (!(nu > 0.0 && nu <= std::numbers::pi / 2)) {
        throw DomainError("angle bound needs 0 < nu <= pi/2");
    }
    AngleBound ab;
    const double k = hodograph_factor(in);
    if (k > 0.0) {
        ab.n1 = 0.5 * std::log2(k / in.sigma);
        ab.n1_rounded = std::max(0, static_cast<int>(std::ceil(ab.n1)));
    } else {
        ab.n1 = -std::numeric_limits<double>::infinity();
        ab.n1_rounded = 0;
    }
    ab.b_dist = b_prime_dist(ab.n1_rounded, in);
    const double denom = (1.0 - std::cos(nu)) * (in.sigma - ab.b_dist);
    if (!(denom > 0.0)) {
        throw BoundInfeasibleError("angle bound infeasible: sigma = " + std::to_string(in.sigma) +
                                   " does not exceed B'_dist(" + std::to_string(ab.n1_rounded) +
                                   ") = " + std::to_string(ab.b_dist));
    }
    ab.f = 2.0 * in.m_const / denom;
    const double exponent = std::max(ab.n1, ab.f > 0.0 ? std::log2(ab.f) : ab.n1);
    ab.iterations = std::isfinite(exponent) ? std::max(0, tolerant_ceil(exponent)) : 0;
    return ab;
}

int iterations_for_angle(double nu, const BoundInputs& in) { return angle_bound(nu, in).iterations; }

Condition2Bound condition2_bound(const BoundInputs& in) {
    Condition2Bound cb;
    cb.angle_branch = iterations_for_angle(condition2_angle(in.n), in) + 1;
    const double k = hodograph_factor(in);
    if (k > 0.0) {
        cb.derivative_branch = std::max(0, tolerant_ceil(0.5 * std::log2(k / in.sigma) + 1.0));
    }
    cb.iterations = std::max(cb.angle_branch, cb.derivative_branch);
    return cb;
}

int iterations_for_condition2(const BoundInputs& in) { return condition2_bound(in).iterations; }

int iterations_for_radius(double r, const BoundInputs& in) {
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw DomainError("iterations_for_radius needs a finite positive radius");
    }
    const double base = in.n_inf_curve * in.d2p;
    int i = 0;
    while (i < 62 && std::ldexp(base, -2 * i) > 0.5 * r) {
        ++i;
    }
    return i;
}

BoundReport n_star(double r, const BoundInputs& in) {
    require_valid(in);
    BoundReport report;
    report.inputs = in;
    report.r = r;
    if (in.n == 1) {
        // A line is its own control polygon.
        iterations_for_radius(r, in);
        return report;
    }
    report.nu = condition2_angle(in.n);
    report.angle = angle_bound(report.nu, in);
    report.N_of_nu = report.angle.iterations;
    report.condition2 = condition2_bound(in);
    report.N_prime = iterations_for_radius(r, in);
    report.N_star = std::max(report.condition2.iterations, report.N_prime);
    report.old_bound = std::max(report.N_of_nu, report.N_prime) + 2;
    if (report.N_star > report.old_bound) {
        throw InconsistencyError("N* exceeds the earlier bound");
    }
    return report;
}

}  // namespace knotcert
