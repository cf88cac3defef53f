#pragma once

#include "knotcert/curve.hpp"

namespace knotcert {

// Constants feeding the a-priori subdivision counts of one segment.
struct BoundInputs {
    int n = 1;                  // degree
    double n_inf_hodo = 0.0;    // N_inf(n-1)
    double n_inf_curve = 0.0;   // N_inf(n)
    double d2p_prime = 0.0;     // second-difference norm of hodograph control points
    double d2p = 0.0;           // second-difference norm of curve control points
    double sigma = 1.0;         // lower bound on min |C'|
    double m_const = 1.0;       // max hodograph control-point norm (stand-in for M)
};

// Reads every constant off a segment (sigma via min_derivative_norm).
BoundInputs bound_inputs(const BezierSegment& seg);

// floor(k/2) ceil(k/2) / (2k): polygon-to-curve distance constant for degree k.
double n_infinity(int k);

// Hodograph polygon distance bound after i subdivisions:
// 4^-i * N_inf(n-1) * (n-1) * |D2 P'|.
double b_prime_dist(int i, const BoundInputs& in);

// Angle threshold for Condition 2 via exterior angles: pi / (2(n-1)).
double condition2_angle(int n);

struct AngleBound {
    double n1 = 0.0;        // 1/2 log2(K / sigma), -inf when K = 0
    int n1_rounded = 0;     // max(0, ceil(n1)), the index fed to b_prime_dist
    double b_dist = 0.0;    // b_prime_dist(n1_rounded)
    double f = 0.0;         // 2M / ((1 - cos nu)(sigma - b_dist))
    int iterations = 0;     // ceil(max(n1, log2 f)), clamped at 0
};

// Subdivisions after which every exterior angle is below nu, 0 < nu <= pi/2.
// Throws BoundInfeasibleError when sigma - b_dist <= 0.
AngleBound angle_bound(double nu, const BoundInputs& in);
int iterations_for_angle(double nu, const BoundInputs& in);

struct Condition2Bound {
    int angle_branch = 0;       // N(pi/(2(n-1))) + 1
    int derivative_branch = 0;  // ceil(1/2 log2(K / sigma) + 1), clamped at 0
    int iterations = 0;         // max of the two
};

Condition2Bound condition2_bound(const BoundInputs& in);
int iterations_for_condition2(const BoundInputs& in);

// Smallest i with 4^-i * N_inf(n) * |D2 P| <= r / 2.
int iterations_for_radius(double r, const BoundInputs& in);

struct BoundReport {
    BoundInputs inputs;
    double r = 0.0;
    double nu = 0.0;
    AngleBound angle;           // evaluated at nu
    int N_of_nu = 0;
    Condition2Bound condition2;
    int N_prime = 0;
    int N_star = 0;
    int old_bound = 0;

    double N1() const { return angle.n1; }
    // The exterior-angle term decides both counts.
    bool angle_dominates() const { return N_of_nu >= N_prime; }
};

// N* = max(N(pi/(2(n-1))) + 1, N'(r)) and the earlier max(N(.), N'(r)) + 2.
BoundReport n_star(double r, const BoundInputs& in);

}  // namespace knotcert
