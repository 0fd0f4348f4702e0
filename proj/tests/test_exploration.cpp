// test_exploration.cpp
#include <algorithm>
#include <set>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "primbip/exploration.hpp"
#include "primbip/harness.hpp"

using namespace primbip;

namespace {

Graph path_graph(std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
    Graph g(n);
    for (auto [a, b] : edges) g.add_edge(a, b);
    return g;
}

struct Case {
    GraphSpec spec;
    WeightOracle weights;
    PrimTrace trace;
    PercolatedGraph graph;
};

Case make_case(const GraphSpec& spec, double p) {
    auto w = WeightOracle::implicit(spec);
    auto tr = run_prim(spec, w, StartPolicy::uniform_all());
    auto pg = percolate(spec, w, p);
    return {spec, std::move(w), std::move(tr), std::move(pg)};
}

// 2x2 graph realising exactly {b0w0, b0w1, b1w1} at p = 0.5.
Case hand_case() {
    const GraphSpec spec{2, 2, 0};
    auto w = WeightOracle::explicit_table(2, 2, {0.1, 0.2, 0.9, 0.3});
    auto tr = run_prim(spec, w, StartPolicy::fixed(VertexId::black(0)));
    auto pg = percolate(spec, w, 0.5);
    return {spec, std::move(w), std::move(tr), std::move(pg)};
}

} // namespace

TEST(IsGeo, SmallExamples) {
    const Graph single(1);
    EXPECT_TRUE(is_geo(single, {0}));
    EXPECT_TRUE(is_geo_by_definition(single, {0}));

    const Graph path = path_graph(3, {{0, 1}, {1, 2}});
    EXPECT_TRUE(is_geo(path, {0, 1, 2}));
    EXPECT_TRUE(is_geo_by_definition(path, {0, 1, 2}));
    // a and c share a component but {a, c} is not connected.
    EXPECT_FALSE(is_geo(path, {0, 2, 1}));
    EXPECT_FALSE(is_geo_by_definition(path, {0, 2, 1}));

    const Graph ab_c = path_graph(3, {{0, 1}});
    EXPECT_FALSE(is_geo(ab_c, {0, 2, 1}));
    EXPECT_FALSE(is_geo_by_definition(ab_c, {0, 2, 1}));
    EXPECT_TRUE(is_geo(ab_c, {0, 1, 2}));
    EXPECT_TRUE(is_geo(ab_c, {2, 1, 0}));
}

TEST(IsGeo, RejectsNonBijection) {
    const Graph g(3);
    EXPECT_THROW(is_geo(g, {0, 0, 1}), std::invalid_argument);
    EXPECT_THROW(is_geo(g, {0, 1}), std::invalid_argument);
    EXPECT_THROW(explore_in_order(g, {0, 1, 5}), std::invalid_argument);
    EXPECT_THROW(is_geo_by_definition(g, {2, 2, 2}), std::invalid_argument);
}

// The two checkers agree on every ordering of every graph on 4 vertices.
TEST(IsGeo, CheckersAgreeExhaustively) {
    const std::vector<std::pair<std::uint32_t, std::uint32_t>> all{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (unsigned mask = 0; mask < 64; ++mask) {
        Graph g(4);
        for (unsigned i = 0; i < 6; ++i)
            if (mask >> i & 1u) g.add_edge(all[i].first, all[i].second);
        Ordering pi{0, 1, 2, 3};
        do {
            const bool a = is_geo(g, pi), b = is_geo_by_definition(g, pi);
            ASSERT_EQ(a, b) << "mask " << mask;
            // A GEO is a fixed point of the exploration, and conversely here.
            EXPECT_EQ(explore_in_order(g, pi) == pi, a);
        } while (std::next_permutation(pi.begin(), pi.end()));
    }
}

TEST(ExploreInOrder, EmptyGraphKeepsOrder) {
    const Graph g(5);
    const Ordering pi{3, 1, 4, 0, 2};
    EXPECT_EQ(explore_in_order(g, pi), pi);
}

TEST(ExploreInOrder, NonGeoIsReordered) {
    const Graph g = path_graph(3, {{0, 1}});
    EXPECT_EQ(explore_in_order(g, {0, 2, 1}), (Ordering{0, 1, 2}));
}

TEST(ExploreInOrder, PrimOrderIsFixedPoint) {
    for (std::uint32_t nb = 1; nb <= 8; ++nb)
        for (std::uint32_t nw = 1; nw <= 8; ++nw)
            for (std::uint64_t s = 0; s < 10; ++s)
                for (double p : {0.1, 0.3, 0.7, 0.9}) {
                    const Case c = make_case({nb, nw, s}, p);
                    const Ordering pi = prim_ordering(c.trace);
                    ASSERT_EQ(explore_in_order(c.graph.graph, pi), pi);
                    ASSERT_TRUE(is_geo(c.graph.graph, pi));
                    ASSERT_TRUE(is_geo_by_definition(c.graph.graph, pi));
                }
}

TEST(TwoNeighbourhood, HandTrace) {
    const Case c = hand_case();
    ASSERT_EQ(c.trace.tau_b, (std::vector<std::uint32_t>{0, 1, 4}));
    const auto x = two_neighbourhood_exploration(c.graph, c.trace, {true});
    EXPECT_EQ(x.O_w[1], 2);
    EXPECT_EQ(x.O_b[1], 1);
    EXPECT_EQ(x.O_w[2], 0);
    EXPECT_EQ(x.O_b[2], 0);
    EXPECT_EQ(x.K_w[1], 2);
    EXPECT_EQ(x.K_b[1], 1);
    EXPECT_EQ(x.K_w[2], 0);
    EXPECT_EQ(x.K_b[2], 0);
    EXPECT_EQ(x.R[2], 2);
    EXPECT_EQ(x.J_w[2], 0);
    EXPECT_EQ(x.I_b[2], 1);
    EXPECT_EQ(x.sigma_b[1], 0u);
    EXPECT_EQ(x.sigma_b[2], 1u);
    EXPECT_EQ(x.O_w_sets[1], (std::vector<std::uint32_t>{2, 3}));
    EXPECT_EQ(x.O_b_sets[1], (std::vector<std::uint32_t>{1}));
    EXPECT_TRUE(check_counting_identities(x).ok);
}

TEST(TwoNeighbourhood, EmptyGraph) {
    const Case c = make_case({6, 5, 3}, 0.0);
    const auto x = two_neighbourhood_exploration(c.graph, c.trace);
    for (std::uint32_t k = 1; k <= 6; ++k) {
        EXPECT_EQ(x.O_w[k], 0);
        EXPECT_EQ(x.O_b[k], 0);
        EXPECT_EQ(x.I_b[k], k);
        EXPECT_EQ(x.A_b[k], 0);
    }
    EXPECT_TRUE(check_counting_identities(x).ok);
    EXPECT_EQ(x.lead_ranks.size(), 11u);
}

TEST(TwoNeighbourhood, CompleteGraph) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const Case c = make_case({5, 7, s}, 1.0);
        const auto x = two_neighbourhood_exploration(c.graph, c.trace);
        for (std::uint32_t k = 1; k <= 5; ++k) {
            EXPECT_LE(x.J_w[k], 1);
            EXPECT_EQ(x.I_b[k], 1);
        }
        EXPECT_EQ(x.lead_ranks, (std::vector<std::size_t>{1}));
        EXPECT_TRUE(check_counting_identities(x).ok);
    }
}

TEST(TwoNeighbourhood, IdentityFirstStep) {
    const Case c = make_case({10, 12, 1}, 0.2);
    const auto x = two_neighbourhood_exploration(c.graph, c.trace);
    EXPECT_EQ(x.I_b[1], 1);
}

TEST(TwoNeighbourhood, CouplingAndStructure) {
    for (std::uint32_t nb = 1; nb <= 7; ++nb)
        for (std::uint32_t nw = 1; nw <= 7; ++nw)
            for (std::uint64_t s = 0; s < 8; ++s)
                for (double p : {0.1, 0.3, 0.7, 0.9}) {
                    const Case c = make_case({nb, nw, s}, p);
                    const auto x = two_neighbourhood_exploration(c.graph, c.trace, {true});
                    // sigma^b(k) = sigma(tau^b_k).
                    for (std::uint32_t k = 1; k <= nb; ++k)
                        ASSERT_EQ(x.sigma_b[k], c.spec.global(c.trace.at_rank(c.trace.tau_b[k])));
                    // Monotone pools, bounded discoveries, prefix sums.
                    for (std::uint32_t k = 1; k <= nb; ++k) {
                        EXPECT_LE(x.O_w[k], x.K_w[k]);
                        EXPECT_LE(x.O_b[k], x.K_b[k]);
                        if (k > 1) { EXPECT_LE(x.K_w[k], x.K_w[k - 1]); }
                        if (k > 1) { EXPECT_LE(x.K_b[k], x.K_b[k - 1]); }
                        EXPECT_EQ(x.S_w[k], x.S_w[k - 1] + x.O_w[k]);
                        EXPECT_GE(x.A_w[k], 0);
                        EXPECT_GE(x.A_b[k], 0);
                    }
                    // Discovered sets are disjoint and avoid leads and roots.
                    std::set<std::uint32_t> ws(x.white_leads.begin(), x.white_leads.end());
                    std::set<std::uint32_t> bs(x.roots.begin(), x.roots.end());
                    std::size_t wcount = ws.size(), bcount = bs.size();
                    for (std::uint32_t k = 1; k <= nb; ++k) {
                        ws.insert(x.O_w_sets[k].begin(), x.O_w_sets[k].end());
                        bs.insert(x.O_b_sets[k].begin(), x.O_b_sets[k].end());
                        wcount += x.O_w_sets[k].size();
                        bcount += x.O_b_sets[k].size();
                    }
                    EXPECT_EQ(ws.size(), wcount);
                    EXPECT_EQ(bs.size(), bcount);
                    const auto rep = check_counting_identities(x);
                    ASSERT_TRUE(rep.ok) << rep.violations.front();
                }
}

// k -> sigma(tau^b_k) is a GEO for the black contraction.
TEST(TwoNeighbourhood, BlackContractionGeo) {
    for (std::uint64_t s = 0; s < 100; ++s)
        for (double p : {0.2, 0.5}) {
            const Case c = make_case({6, 5, s}, p);
            const Graph h = black_contraction(c.graph);
            Ordering order;
            for (std::uint32_t k = 1; k <= 6; ++k) order.push_back(c.spec.global(c.trace.at_rank(c.trace.tau_b[k])));
            EXPECT_TRUE(is_geo(h, order));
            EXPECT_TRUE(is_geo_by_definition(h, order));
        }
}

TEST(TwoNeighbourhood, IdentitiesAtCriticalScale) {
    for (std::uint64_t s = 0; s < 5; ++s)
        for (std::uint32_t n : {500u, 2000u}) {
            const GraphSpec spec{n / 2, n - n / 2, s};
            const Case c = make_case(spec, critical_p(spec));
            const auto x = two_neighbourhood_exploration(c.graph, c.trace);
            const auto rep = check_counting_identities(x);
            ASSERT_TRUE(rep.ok) << rep.violations.front();
        }
}

TEST(TwoNeighbourhood, MismatchedInputsRejected) {
    const Case c = make_case({5, 5, 1}, 0.4);
    const Case other = make_case({5, 5, 2}, 0.4);
    EXPECT_THROW(two_neighbourhood_exploration(c.graph, other.trace), std::invalid_argument);
    const Case wrong_size = make_case({4, 6, 1}, 0.4);
    EXPECT_THROW(two_neighbourhood_exploration(c.graph, wrong_size.trace), std::invalid_argument);
    const auto partial = run_prim(c.spec, c.weights, StartPolicy::uniform_all(), 3);
    EXPECT_THROW(two_neighbourhood_exploration(c.graph, partial), std::invalid_argument);
}

TEST(CountingIdentities, DetectsTampering) {
    const Case c = make_case({8, 8, 4}, 0.3);
    auto x = two_neighbourhood_exploration(c.graph, c.trace);
    ASSERT_TRUE(check_counting_identities(x).ok);
    x.A_w[3] += 1;
    const auto rep = check_counting_identities(x);
    EXPECT_FALSE(rep.ok);
    EXPECT_NE(rep.violations.front().find("k=3"), std::string::npos);
}

TEST(ExplorationCsv, HeaderAndRows) {
    const Case c = hand_case();
    const auto x = two_neighbourhood_exploration(c.graph, c.trace);
    std::ostringstream os;
    write_exploration_csv(os, x);
    EXPECT_EQ(os.str(), "k,tau_b,O_w,O_b,K_w,K_b,S_w,S_b,A_w,A_b,R,J_w,I_b\n"
                        "1,1,2,1,2,1,2,1,0,1,0,0,1\n"
                        "2,4,0,0,0,0,2,1,0,0,2,0,1\n");
}
