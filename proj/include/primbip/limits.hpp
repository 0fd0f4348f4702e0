// limits.hpp
//
// Limit objects of the colour ratio: the two-type Poisson branching process
// with offspring means lambda*gamma (black -> white) and lambda/gamma
// (white -> black), its extinction probabilities, the giant-component
// fractions ell(lambda), rho(lambda), and the curve s -> rho(ell^{-1}(s)).
//
// Solvers work with survival probabilities u = 1 - q, which keeps full
// relative precision near criticality where q -> 1.
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "primbip/rng.hpp"

namespace primbip {

struct ThetaParams {
    double theta;
    double gamma; // sqrt((1 - theta) / theta)
    double alpha; // (theta (1 - theta))^{-1/2}

    static ThetaParams from(double theta) {
        if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta must lie in (0,1)");
        return {theta, std::sqrt((1.0 - theta) / theta), 1.0 / std::sqrt(theta * (1.0 - theta))};
    }
};

// 1 / (1 + gamma_theta) = sqrt(theta) / (sqrt(theta) + sqrt(1 - theta)).
inline double sublinear_limit(double theta) {
    const ThetaParams tp = ThetaParams::from(theta);
    return 1.0 / (1.0 + tp.gamma);
}

// Below this distance from criticality the solvers return the lambda -> 1+ limits.
inline constexpr double kNearCritical = 1e-6;

struct ExtinctionPair {
    double lambda = 0.0;
    double q1 = 1.0; // started from one black
    double q2 = 1.0; // started from one white
    double u1 = 0.0; // 1 - q1
    double u2 = 0.0; // 1 - q2
    std::size_t iterations = 0;
};

// F(x, lambda) = lambda gamma (exp(lambda/gamma (x - 1)) - 1) - log x; q1 is its
// smaller root in (0, 1) when lambda > 1.
inline double branching_F(double theta, double lambda, double x) {
    const ThetaParams tp = ThetaParams::from(theta);
    return lambda * tp.gamma * std::expm1(lambda / tp.gamma * (x - 1.0)) - std::log(x);
}

// Max residual of x = exp(lambda gamma (y - 1)), y = exp(lambda/gamma (x - 1)).
inline double extinction_residual(double theta, const ExtinctionPair& q) {
    const ThetaParams tp = ThetaParams::from(theta);
    const double r1 = q.q1 - std::exp(q.lambda * tp.gamma * (q.q2 - 1.0));
    const double r2 = q.q2 - std::exp(q.lambda / tp.gamma * (q.q1 - 1.0));
    return std::max(std::abs(r1), std::abs(r2));
}

inline ExtinctionPair extinction_probabilities(double theta, double lambda) {
    const ThetaParams tp = ThetaParams::from(theta);
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be positive and finite");
    ExtinctionPair out;
    out.lambda = lambda;
    if (lambda <= 1.0 + kNearCritical) return out;

    const double a = lambda * tp.gamma; // black -> white offspring mean
    const double c = lambda / tp.gamma; // white -> black offspring mean
    // Survival of a black ancestor solves u = g(u) with
    // g(u) = 1 - exp(-a (1 - exp(-c u))); g is concave, g(0) = 0, g'(0) = lambda^2.
    auto g = [&](double u) { return -std::expm1(-a * -std::expm1(-c * u)); };
    auto dg = [&](double u) {
        const double v = -std::expm1(-c * u);
        return a * c * std::exp(-a * v) * std::exp(-c * u);
    };

    // Monotone iteration from q = 0 (u = 1) descends onto the largest root;
    // Newton from above that root is monotone too, since g - id is concave.
    double u = 1.0;
    std::size_t it = 0;
    for (; it < 64; ++it) {
        const double next = g(u);
        const double step = u - next;
        u = next;
        if (std::abs(step) < 1e-14) break;
    }
    for (std::size_t k = 0; k < 200; ++k, ++it) {
        const double h = g(u) - u;
        const double dh = dg(u) - 1.0;
        if (h == 0.0 || !(dh < 0.0)) break;
        const double next = u - h / dh;
        if (!(next > 0.0) || !(next <= u)) break;
        const double step = u - next;
        u = next;
        if (step <= 1e-17 * u) break;
    }
    out.iterations = it;
    out.u1 = u;
    out.q2 = std::exp(-c * out.u1);
    out.u2 = -std::expm1(-c * out.u1);
    out.q1 = std::exp(-a * out.u2);
    return out;
}

struct LimitPoint {
    double lambda = 0.0;
    double ell = 0.0;
    double rho = 0.0;
};

// Residual of rho ell = theta (1 - exp(-alpha lambda (1 - rho) ell)) and
// (1 - rho) ell = (1 - theta)(1 - exp(-alpha lambda rho ell)).
inline double giant_system_residual(double theta, const LimitPoint& pt) {
    const ThetaParams tp = ThetaParams::from(theta);
    const double al = tp.alpha * pt.lambda;
    const double r1 = pt.rho * pt.ell + theta * std::expm1(-al * (1.0 - pt.rho) * pt.ell);
    const double r2 = (1.0 - pt.rho) * pt.ell + (1.0 - theta) * std::expm1(-al * pt.rho * pt.ell);
    return std::max(std::abs(r1), std::abs(r2));
}

inline LimitPoint ell_rho(double theta, double lambda) {
    const ThetaParams tp = ThetaParams::from(theta);
    if (!(lambda > 1.0)) throw std::invalid_argument("ell_rho: lambda must exceed 1");
    LimitPoint pt;
    pt.lambda = lambda;
    if (lambda <= 1.0 + kNearCritical) {
        pt.ell = 0.0;
        pt.rho = 1.0 / (1.0 + tp.gamma);
        return pt;
    }
    const ExtinctionPair q = extinction_probabilities(theta, lambda);
    const double black = theta * q.u1;
    pt.ell = black + (1.0 - theta) * q.u2;
    pt.rho = black / pt.ell;
    return pt;
}

// lambda with ell(lambda) = s: bracket [1 + 1e-9, 2], doubled until it
// straddles s, then bisection.
inline double ell_inverse(double theta, double s) {
    (void)ThetaParams::from(theta);
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("ell_inverse: s must lie in (0,1)");
    double lo = 1.0 + 1e-9;
    double hi = 2.0;
    while (ell_rho(theta, hi).ell < s) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw std::domain_error("ell_inverse: s too close to 1");
    }
    for (int i = 0; i < 400; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double e = ell_rho(theta, mid).ell;
        if (std::abs(e - s) <= 1e-14) return mid;
        (e < s ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct CurveRow {
    double s;
    double lambda;
    double rho;
};
using CurveTable = std::vector<CurveRow>;

// `points` equally spaced values in (0,1), endpoints excluded.
inline std::vector<double> default_curve_grid(std::size_t points = 512) {
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i) g[i] = static_cast<double>(i + 1) / static_cast<double>(points + 1);
    return g;
}

inline CurveTable linear_limit_curve(double theta, const std::vector<double>& grid) {
    (void)ThetaParams::from(theta);
    CurveTable t;
    t.reserve(grid.size());
    double prev = 0.0;
    for (double s : grid) {
        if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("curve grid must lie in (0,1)");
        if (!t.empty() && !(s > prev)) throw std::invalid_argument("curve grid must be strictly increasing");
        prev = s;
        const double lambda = ell_inverse(theta, s);
        t.push_back({s, lambda, ell_rho(theta, lambda).rho});
    }
    return t;
}

// 17 significant digits.
inline std::string format_double(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

inline void write_curve_csv(std::ostream& os, const CurveTable& t) {
    os << "s,lambda,rho\n";
    for (const auto& r : t) os << format_double(r.s) << ',' << format_double(r.lambda) << ',' << format_double(r.rho) << '\n';
}

struct BranchingSimResult {
    std::size_t trials = 0;
    std::size_t extinct = 0;
    double frequency = 0.0;
};

// Total population beyond which a line is counted as surviving; its
// extinction probability from there is at most q1^cap.
inline constexpr std::uint64_t kBranchingSurvivalCap = 10000;

// Simulates Z_0 = (1, 0): every black has Poisson(lambda gamma) white
// children, every white Poisson(lambda / gamma) black children. Counts the
// trials that reach (0, 0) within max_generations.
inline BranchingSimResult simulate_two_type_bp(double theta, double lambda, std::size_t max_generations,
                                               std::size_t trials, std::uint64_t seed) {
    const ThetaParams tp = ThetaParams::from(theta);
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    const double to_white = lambda * tp.gamma;
    const double to_black = lambda / tp.gamma;
    BranchingSimResult res;
    res.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        Stream rng(seed, "bp", t);
        std::uint64_t blacks = 1, whites = 0;
        for (std::size_t gen = 0; gen < max_generations; ++gen) {
            std::uint64_t nb = 0, nw = 0;
            if (whites > 0) nb = std::poisson_distribution<std::uint64_t>(to_black * static_cast<double>(whites))(rng);
            if (blacks > 0) nw = std::poisson_distribution<std::uint64_t>(to_white * static_cast<double>(blacks))(rng);
            blacks = nb;
            whites = nw;
            if (blacks == 0 && whites == 0) {
                ++res.extinct;
                break;
            }
            if (blacks + whites > kBranchingSurvivalCap) break;
        }
    }
    res.frequency = trials == 0 ? 0.0 : static_cast<double>(res.extinct) / static_cast<double>(trials);
    return res;
}

} // namespace primbip
