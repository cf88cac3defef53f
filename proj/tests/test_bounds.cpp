#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "corpus.hpp"
#include "knotcert/bounds.hpp"
#include "knotcert/errors.hpp"

using namespace knotcert;

namespace {

constexpr double kPi = std::numbers::pi;

BoundInputs synthetic(int n, double d2p_prime, double sigma, double m, double d2p = 0.0) {
    BoundInputs in;
    in.n = n;
    in.n_inf_hodo = n >= 2 ? n_infinity(n - 1) : 0.0;
    in.n_inf_curve = n_infinity(n);
    in.d2p_prime = d2p_prime;
    in.d2p = d2p;
    in.sigma = sigma;
    in.m_const = m;
    return in;
}

}  // namespace

TEST(n_infinity, examples) {
    EXPECT_EQ(n_infinity(1), 0.0);
    EXPECT_DOUBLE_EQ(n_infinity(2), 0.25);
    EXPECT_DOUBLE_EQ(n_infinity(3), 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(n_infinity(4), 4.0 / 8.0);
    EXPECT_THROW(n_infinity(0), DomainError);
}

TEST(b_prime_dist, examples) {
    const BoundInputs in = synthetic(3, 2.0, 1.0, 1.0);
    EXPECT_DOUBLE_EQ(b_prime_dist(0, in), 1.0);
    for (int i = 0; i < 10; ++i) {
        EXPECT_EQ(b_prime_dist(i + 1, in) * 4.0, b_prime_dist(i, in));
    }
    EXPECT_EQ(b_prime_dist(3, synthetic(3, 0.0, 1.0, 1.0)), 0.0);
    EXPECT_THROW(b_prime_dist(-1, in), DomainError);
}

TEST(iterations_for_angle, flat_hodograph_example) {
    // f = 2 / ((1 - 1/2) * 1) = 4, N = log2 4 = 2.
    const AngleBound ab = angle_bound(kPi / 3, synthetic(3, 0.0, 1.0, 1.0));
    EXPECT_TRUE(std::isinf(ab.n1) && ab.n1 < 0);
    EXPECT_NEAR(ab.f, 4.0, 1e-12);
    EXPECT_EQ(ab.iterations, 2);
}

TEST(iterations_for_angle, infeasible_denominator) {
    // N1 = 1/2 log2(1) = 0, B'_dist(0) = 1 = sigma.
    EXPECT_THROW(iterations_for_angle(kPi / 4, synthetic(3, 2.0, 1.0, 1.0)), BoundInfeasibleError);
}

TEST(iterations_for_angle, monotone_in_nu) {
    const BoundInputs in = synthetic(5, 0.7, 1.3, 2.0);
    int previous = 1 << 30;
    for (int k = 1; k <= 50; ++k) {
        const int n = iterations_for_angle(kPi / 2 * k / 50.0, in);
        EXPECT_LE(n, previous);
        previous = n;
    }
}

TEST(iterations_for_condition2, examples) {
    const BoundInputs flat = synthetic(3, 0.0, 1.0, 1.0);
    const Condition2Bound c = condition2_bound(flat);
    EXPECT_EQ(c.angle_branch, iterations_for_angle(kPi / 4, flat) + 1);
    EXPECT_EQ(c.derivative_branch, 0);
    EXPECT_EQ(c.iterations, c.angle_branch);

    // n = 4: K = N_inf(3) * 3 * 1 = 1, sigma = 1/2.
    const BoundInputs in = synthetic(4, 1.0, 0.5, 1.0);
    const double n1 = 0.5 * std::log2(1.0 / 0.5);
    const int n1_up = static_cast<int>(std::ceil(n1));
    const double b = 1.0 / std::pow(4.0, n1_up);
    const double f = 2.0 / ((1 - std::cos(kPi / 6)) * (0.5 - b));
    const int angle = static_cast<int>(std::ceil(std::max(n1, std::log2(f))));
    const int derivative = static_cast<int>(std::ceil(n1 + 1));
    const Condition2Bound got = condition2_bound(in);
    EXPECT_EQ(got.angle_branch, angle + 1);
    EXPECT_EQ(got.derivative_branch, derivative);
    EXPECT_EQ(got.iterations, std::max(angle + 1, derivative));
}

TEST(iterations_for_radius, examples) {
    EXPECT_EQ(iterations_for_radius(0.1, synthetic(3, 0.0, 1.0, 1.0, 0.0)), 0);
    // 4^-i * (1/3) * 2 <= 1/6 first holds at i = 1.
    EXPECT_EQ(iterations_for_radius(1.0 / 3.0, synthetic(3, 0.0, 1.0, 1.0, 2.0)), 1);
    const BoundInputs in = synthetic(5, 0.0, 1.0, 1.0, 3.0);
    for (double r : {1e-4, 1e-3, 0.01, 0.1, 1.0}) {
        const int a = iterations_for_radius(r, in);
        const int b = iterations_for_radius(2 * r, in);
        EXPECT_LE(b, a);
        EXPECT_GE(b, a - 1);
    }
    EXPECT_THROW(iterations_for_radius(0.0, in), DomainError);
}

TEST(n_star, example_chain) {
    // n = 3 with N(pi/3) = 2 inputs and a radius giving N'(r) = 1.
    const BoundInputs in = synthetic(3, 0.0, 1.0, 1.0, 2.0);
    const BoundReport rep = n_star(1.0 / 3.0, in);
    EXPECT_EQ(rep.N_prime, 1);
    EXPECT_EQ(rep.N_of_nu, iterations_for_angle(kPi / 4, in));
    EXPECT_EQ(rep.N_star, std::max(rep.N_of_nu + 1, 1));
    EXPECT_EQ(rep.old_bound, std::max(rep.N_of_nu, 1) + 2);
    EXPECT_LE(rep.N_star, rep.old_bound);
}

TEST(n_star, radius_dominated) {
    const BoundInputs in = synthetic(3, 0.0, 1.0, 1.0, 2.0);
    const BoundReport rep = n_star(1e-6, in);
    EXPECT_GT(rep.N_prime, rep.condition2.iterations);
    EXPECT_EQ(rep.N_star, rep.N_prime);
    EXPECT_EQ(rep.old_bound, rep.N_prime + 2);
}

TEST(n_star, random_inputs_respect_old_bound) {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> degree(2, 10);
    std::uniform_real_distribution<double> logu(-3.0, 3.0);
    int checked = 0;
    while (checked < 10000) {
        const BoundInputs in = synthetic(degree(rng), std::pow(10.0, logu(rng)),
                                         std::pow(10.0, logu(rng)), std::pow(10.0, logu(rng)),
                                         std::pow(10.0, logu(rng)));
        const double r = std::pow(10.0, logu(rng));
        try {
            const BoundReport rep = n_star(r, in);
            EXPECT_LE(rep.N_star, rep.old_bound);
            if (rep.angle_dominates()) {
                EXPECT_EQ(rep.N_star, rep.old_bound - 1);
            }
            EXPECT_LE(n_star(2 * r, in).N_star, rep.N_star);
            ++checked;
        } catch (const BoundInfeasibleError&) {
        }
    }
}

TEST(n_star, line_needs_no_subdivision) {
    const BoundReport rep = n_star(0.5, bound_inputs(BezierSegment({{0, 0, 0}, {1, 0, 0}})));
    EXPECT_EQ(rep.N_star, 0);
    EXPECT_EQ(rep.old_bound, 0);
}

TEST(bound_inputs, quadratic) {
    const BoundInputs in = bound_inputs(corpus::quadratic());
    EXPECT_EQ(in.n, 2);
    EXPECT_DOUBLE_EQ(in.n_inf_hodo, 0.0);
    EXPECT_DOUBLE_EQ(in.n_inf_curve, 0.25);
    EXPECT_EQ(in.d2p_prime, 0.0);
    EXPECT_DOUBLE_EQ(in.d2p, 2.0);
    EXPECT_NEAR(in.sigma, 2.0, 1e-5);
    EXPECT_DOUBLE_EQ(in.m_const, std::sqrt(8.0));
}
