// stats.hpp
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>

namespace primbip {

struct SummaryStats {
    double mean = 0.0;
    double std = 0.0; // sample standard deviation
    double ci_low = 0.0;
    double ci_high = 0.0;
    double theory = 0.0;
    double abs_err = 0.0;
    std::size_t trials = 0;
};

// Samples are reduced in index order, so the result does not depend on the
// order in which trials finished.
inline SummaryStats summarize(const std::vector<double>& samples, double theory) {
    if (samples.empty()) throw std::invalid_argument("summarize: no samples");
    SummaryStats s;
    s.trials = samples.size();
    double sum = 0.0;
    for (double x : samples) sum += x;
    s.mean = sum / static_cast<double>(s.trials);
    if (s.trials > 1) {
        double ss = 0.0;
        for (double x : samples) ss += (x - s.mean) * (x - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(s.trials - 1));
    }
    const double half = 1.959963984540054 * s.std / std::sqrt(static_cast<double>(s.trials));
    s.ci_low = s.mean - half;
    s.ci_high = s.mean + half;
    s.theory = theory;
    s.abs_err = std::abs(s.mean - theory);
    return s;
}

struct ChiSquareResult {
    double statistic = 0.0;
    std::size_t dof = 0;
    double p_value = 1.0;
    bool degenerate = false; // all mass on one value: nothing to test
};

// Pearson goodness of fit of counts[0..trials] against Bin(trials, p).
// Adjacent cells are pooled from both tails until every cell expects >= min_expected.
inline ChiSquareResult binomial_chi_square(const std::vector<std::uint64_t>& counts, std::uint64_t trials, double p,
                                           double min_expected = 5.0) {
    if (counts.size() != trials + 1) throw std::invalid_argument("binomial_chi_square: need trials+1 cells");
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    ChiSquareResult r;
    if (total == 0) return r;
    std::vector<double> expected(trials + 1, 0.0);
    if (p <= 0.0 || p >= 1.0 || trials == 0) {
        const std::size_t at = (p >= 1.0) ? trials : 0;
        expected[at] = static_cast<double>(total);
        r.degenerate = true;
        r.p_value = counts[at] == total ? 1.0 : 0.0;
        return r;
    }
    const boost::math::binomial_distribution<double> law(static_cast<double>(trials), p);
    for (std::uint64_t i = 0; i <= trials; ++i)
        expected[i] = static_cast<double>(total) * boost::math::pdf(law, static_cast<double>(i));

    struct Cell { double obs, exp; };
    std::vector<Cell> cells;
    for (std::uint64_t i = 0; i <= trials; ++i) cells.push_back({static_cast<double>(counts[i]), expected[i]});
    // Pool the right tail, then the left tail.
    while (cells.size() > 1 && cells.back().exp < min_expected) {
        const Cell last = cells.back();
        cells.pop_back();
        cells.back().obs += last.obs;
        cells.back().exp += last.exp;
    }
    while (cells.size() > 1 && cells.front().exp < min_expected) {
        const Cell first = cells.front();
        cells.erase(cells.begin());
        cells.front().obs += first.obs;
        cells.front().exp += first.exp;
    }
    if (cells.size() < 2) {
        r.degenerate = true;
        return r;
    }
    for (const Cell& c : cells) r.statistic += (c.obs - c.exp) * (c.obs - c.exp) / c.exp;
    r.dof = cells.size() - 1;
    const boost::math::chi_squared_distribution<double> chi(static_cast<double>(r.dof));
    r.p_value = boost::math::cdf(boost::math::complement(chi, r.statistic));
    return r;
}

} // namespace primbip
