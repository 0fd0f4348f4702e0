// test_limits.cpp
#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "primbip/limits.hpp"

using namespace primbip;

namespace {

// Smaller root of F(., lambda) by plain bisection: F > 0 below q1 and F < 0 on (q1, 1).
double bisect_F(double theta, double lambda) {
    double lo = 1e-300, hi = 1.0 - 1e-7;
    for (int i = 0; i < 2000 && hi - lo > 1e-16; ++i) {
        const double mid = 0.5 * (lo + hi);
        (branching_F(theta, lambda, mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

const std::vector<double> kLambdas{1.1, 1.5, 2.0, 5.0, 20.0};
const std::vector<double> kThetas{0.1, 0.3, 0.5, 0.7};

// Reference values computed in 50-digit arithmetic.
constexpr double kQ2Half = 0.20318786997997995;  // root of q = exp(2 (q - 1))
constexpr double kSublinear07 = 0.60435607626104;  // sqrt(0.7) / (sqrt(0.7) + sqrt(0.3))

} // namespace

TEST(ThetaParams, Relations) {
    for (double t : {0.05, 0.1, 0.3, 0.5, 0.7, 0.95}) {
        const auto tp = ThetaParams::from(t);
        EXPECT_NEAR(tp.gamma * std::sqrt(t), std::sqrt(1 - t), 1e-14);
        EXPECT_NEAR(tp.alpha * tp.alpha * t * (1 - t), 1.0, 1e-12);
    }
    EXPECT_THROW(ThetaParams::from(0.0), std::invalid_argument);
    EXPECT_THROW(ThetaParams::from(1.0), std::invalid_argument);
}

TEST(SublinearLimit, Values) {
    EXPECT_DOUBLE_EQ(sublinear_limit(0.5), 0.5);
    EXPECT_NEAR(sublinear_limit(0.1), 0.25, 1e-15);
    EXPECT_NEAR(sublinear_limit(0.7), kSublinear07, 1e-14);
    for (double t : {0.1, 0.3, 0.7})
        EXPECT_NEAR(sublinear_limit(t), std::sqrt(t) / (std::sqrt(t) + std::sqrt(1 - t)), 1e-14);
    EXPECT_THROW(sublinear_limit(1.2), std::invalid_argument);
}

TEST(Extinction, Subcritical) {
    for (double t : kThetas) {
        const auto q = extinction_probabilities(t, 0.5);
        EXPECT_EQ(q.q1, 1.0);
        EXPECT_EQ(q.q2, 1.0);
        EXPECT_EQ(extinction_probabilities(t, 1.0).q1, 1.0);
    }
    EXPECT_THROW(extinction_probabilities(0.5, 0.0), std::invalid_argument);
    EXPECT_THROW(extinction_probabilities(0.5, -1.0), std::invalid_argument);
}

TEST(Extinction, SymmetricReference) {
    const auto q = extinction_probabilities(0.5, 2.0);
    EXPECT_NEAR(q.q1, kQ2Half, 1e-13);
    EXPECT_NEAR(q.q2, kQ2Half, 1e-13);
    EXPECT_NEAR(bisect_F(0.5, 2.0), kQ2Half, 1e-12);
    EXPECT_NEAR(q.q1, 0.2031878, 1e-6);
}

TEST(Extinction, MatchesBisectionAndResidualsSmall) {
    for (double t : kThetas)
        for (double l : kLambdas) {
            const auto q = extinction_probabilities(t, l);
            EXPECT_NEAR(q.q1, bisect_F(t, l), 1e-10) << t << " " << l;
            EXPECT_LT(extinction_residual(t, q), 1e-12);
            EXPECT_NEAR(q.q2, std::exp(l / ThetaParams::from(t).gamma * (q.q1 - 1.0)), 1e-14);
            EXPECT_GT(q.q1, 0.0);
            EXPECT_LT(q.q1, 1.0);
        }
}

TEST(Extinction, SmallestRootSelected) {
    for (double t : kThetas)
        for (double l : kLambdas) {
            const double q1 = extinction_probabilities(t, l).q1;
            for (double x = 1e-3; x < q1 - 1e-9; x += 1e-3) ASSERT_GT(branching_F(t, l, x), 0.0);
        }
}

TEST(Extinction, LargeLambda) { EXPECT_LT(extinction_probabilities(0.5, 50.0).q1, 1e-10); }

TEST(Extinction, MonotoneInLambda) {
    for (double t : kThetas) {
        double p1 = 1.0, p2 = 1.0, pl = 0.0;
        for (double l = 1.01; l < 30.0; l *= 1.1) {
            const auto q = extinction_probabilities(t, l);
            EXPECT_LT(q.q1, p1);
            EXPECT_LT(q.q2, p2);
            const double e = ell_rho(t, l).ell;
            EXPECT_GT(e, pl);
            p1 = q.q1;
            p2 = q.q2;
            pl = e;
        }
    }
}

TEST(Extinction, NearCriticalRatio) {
    for (double t : {0.1, 0.3, 0.7}) {
        const auto q = extinction_probabilities(t, 1.0 + 1e-4);
        EXPECT_NEAR((q.q1 - 1.0) / (q.q2 - 1.0), ThetaParams::from(t).gamma, 1e-2);
        EXPECT_NEAR(q.u1 / q.u2, ThetaParams::from(t).gamma, 1e-2);
    }
}

TEST(EllRho, SymmetricReference) {
    const auto pt = ell_rho(0.5, 2.0);
    EXPECT_NEAR(pt.ell, 1.0 - kQ2Half, 1e-13);
    EXPECT_NEAR(pt.rho, 0.5, 1e-14);
    const double lhs = pt.rho * pt.ell;
    const double rhs = 0.5 * (1.0 - std::exp(-2.0 * 2.0 * (1 - pt.rho) * pt.ell));
    EXPECT_NEAR(lhs, 0.3984061, 1e-6);
    EXPECT_NEAR(lhs, rhs, 1e-12);
}

TEST(EllRho, ResidualsAndDecomposition) {
    for (double t : kThetas)
        for (double l : kLambdas) {
            const auto pt = ell_rho(t, l);
            const auto q = extinction_probabilities(t, l);
            EXPECT_LT(giant_system_residual(t, pt), 1e-10);
            EXPECT_NEAR(pt.ell, t * (1 - q.q1) + (1 - t) * (1 - q.q2), 1e-14);
            EXPECT_NEAR(pt.rho * pt.ell, t * (1 - q.q1), 1e-14);
        }
}

TEST(EllRho, NearCriticalAndErrors) {
    EXPECT_LT(ell_rho(0.3, 1.001).ell, 0.01);
    EXPECT_THROW(ell_rho(0.3, 1.0), std::invalid_argument);
    EXPECT_THROW(ell_rho(0.3, 0.5), std::invalid_argument);
    const auto edge = ell_rho(0.3, 1.0 + 1e-7);
    EXPECT_EQ(edge.ell, 0.0);
    EXPECT_EQ(edge.rho, sublinear_limit(0.3));
}

TEST(EllInverse, RoundTrip) {
    EXPECT_NEAR(ell_inverse(0.5, 0.7968121), 2.0, 1e-5);
    const auto grid = default_curve_grid(512);
    for (double t : kThetas)
        for (double s : grid) ASSERT_LT(std::abs(ell_rho(t, ell_inverse(t, s)).ell - s), 1e-9) << t << " " << s;
    EXPECT_THROW(ell_inverse(0.5, 0.0), std::invalid_argument);
    EXPECT_THROW(ell_inverse(0.5, 1.0), std::invalid_argument);
}

TEST(EllInverse, BoundaryRho) {
    for (double t : {0.1, 0.3, 0.7})
        EXPECT_NEAR(ell_rho(t, ell_inverse(t, 1e-4)).rho, sublinear_limit(t), 5e-3);
}

TEST(Curve, EndpointsAndRange) {
    const auto lo1 = linear_limit_curve(0.1, {1e-3, 0.999});
    EXPECT_NEAR(lo1[0].rho, 0.25, 0.01);
    EXPECT_NEAR(lo1[1].rho, 0.10, 0.01);
    const auto lo7 = linear_limit_curve(0.7, {1e-3, 0.999});
    EXPECT_NEAR(lo7[0].rho, 0.604, 0.01);
    EXPECT_NEAR(lo7[1].rho, 0.70, 0.01);
    for (double t : {0.1, 0.3, 0.7}) {
        const auto tab = linear_limit_curve(t, default_curve_grid(128));
        const double a = std::min(t, sublinear_limit(t)), b = std::max(t, sublinear_limit(t));
        for (std::size_t i = 0; i < tab.size(); ++i) {
            EXPECT_GE(tab[i].rho, a - 1e-12);
            EXPECT_LE(tab[i].rho, b + 1e-12);
            if (i > 0) { EXPECT_GT(tab[i].lambda, tab[i - 1].lambda); }
        }
    }
}

TEST(Curve, SymmetricIsFlat) {
    for (const auto& r : linear_limit_curve(0.5, default_curve_grid(64))) EXPECT_NEAR(r.rho, 0.5, 1e-9);
}

TEST(Curve, GridValidationAndCsv) {
    EXPECT_THROW(linear_limit_curve(0.5, {0.5, 0.4}), std::invalid_argument);
    EXPECT_THROW(linear_limit_curve(0.5, {0.0}), std::invalid_argument);
    const auto g = default_curve_grid(3);
    EXPECT_EQ(g, (std::vector<double>{0.25, 0.5, 0.75}));
    std::ostringstream os;
    write_curve_csv(os, linear_limit_curve(0.5, {0.5}));
    EXPECT_EQ(os.str().substr(0, 13), "s,lambda,rho\n");
    EXPECT_NE(os.str().find("0.5,"), std::string::npos);
}

TEST(BranchingSim, Subcritical) {
    const auto r = simulate_two_type_bp(0.5, 0.5, 500, 10000, 1);
    EXPECT_GE(r.frequency, 0.99);
}

TEST(BranchingSim, ZeroHorizon) {
    EXPECT_EQ(simulate_two_type_bp(0.5, 2.0, 0, 100, 1).frequency, 0.0);
}

TEST(BranchingSim, SupercriticalMatchesSolver) {
    const double q1 = extinction_probabilities(0.3, 1.5).q1;
    const auto r = simulate_two_type_bp(0.3, 1.5, 200, 20000, 5);
    const double sd = std::sqrt(q1 * (1 - q1) / 20000.0);
    EXPECT_NEAR(r.frequency, q1, 4 * sd);
}

TEST(BranchingSim, Reproducible) {
    EXPECT_EQ(simulate_two_type_bp(0.4, 1.3, 100, 500, 9).extinct, simulate_two_type_bp(0.4, 1.3, 100, 500, 9).extinct);
}
