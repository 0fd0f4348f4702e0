// exploration.hpp
//
// Graph exploration orders (GEO), exploration of a graph in a prescribed
// order, and the 2-neighbourhood exploration of black vertices in Prim order
// together with its bookkeeping quantities.
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "primbip/graph_model.hpp"
#include "primbip/percolation.hpp"
#include "primbip/prim.hpp"

namespace primbip {

// Simple undirected graph on vertices 0..n-1.
struct Graph {
    std::vector<std::vector<std::uint32_t>> adj;

    Graph() = default;
    explicit Graph(std::size_t n) : adj(n) {}

    std::size_t size() const noexcept { return adj.size(); }
    void add_edge(std::uint32_t a, std::uint32_t b) {
        adj.at(a).push_back(b);
        adj.at(b).push_back(a);
    }
    bool has_edge(std::uint32_t a, std::uint32_t b) const {
        const auto& row = adj.at(a);
        return std::find(row.begin(), row.end(), b) != row.end();
    }
};

// G(n_b, n_w, p) on global ids, with the p it was cut at.
struct PercolatedGraph {
    GraphSpec spec;
    double p = 0.0;
    Graph graph;
};

inline PercolatedGraph percolate(const GraphSpec& spec, const WeightOracle& oracle, double p) {
    PercolatedGraph g{spec, p, Graph(spec.n())};
    for (const EdgeId& e : realized_edges(spec, oracle, p)) g.graph.add_edge(e.black, spec.n_b + e.white);
    for (auto& row : g.graph.adj) std::sort(row.begin(), row.end());
    return g;
}

// rank - 1 -> vertex.
using Ordering = std::vector<std::uint32_t>;

inline std::vector<std::uint32_t> inverse_ordering(const Graph& g, const Ordering& pi) {
    if (pi.size() != g.size()) throw std::invalid_argument("ordering size does not match graph");
    std::vector<std::uint32_t> rank(g.size(), 0);
    for (std::size_t i = 0; i < pi.size(); ++i) {
        if (pi[i] >= g.size() || rank[pi[i]] != 0) throw std::invalid_argument("ordering is not a bijection");
        rank[pi[i]] = static_cast<std::uint32_t>(i + 1);
    }
    return rank;
}

inline Ordering prim_ordering(const PrimTrace& trace) {
    require_complete(trace, "prim_ordering");
    const GraphSpec spec{trace.n_b, trace.n_w, 0};
    Ordering pi;
    pi.reserve(trace.n());
    for (const VertexId& v : trace.sigma) pi.push_back(spec.global(v));
    return pi;
}

inline std::vector<std::uint32_t> component_labels(const Graph& g) {
    DisjointSets ds(g.size());
    for (std::uint32_t v = 0; v < g.size(); ++v)
        for (std::uint32_t u : g.adj[v]) ds.unite(v, u);
    std::vector<std::uint32_t> label(g.size());
    for (std::uint32_t v = 0; v < g.size(); ++v) label[v] = ds.find(v);
    return label;
}

// GEO test through the two structural properties: every component occupies
// an interval of ranks, and every vertex other than the component's lowest
// rank has a neighbour of lower rank (which yields a rank-increasing path
// from the lowest-ranked vertex).
inline bool is_geo(const Graph& g, const Ordering& pi) {
    const auto rank = inverse_ordering(g, pi);
    if (g.size() == 0) return true;
    const auto label = component_labels(g);
    std::vector<char> closed(g.size(), 0);
    for (std::size_t i = 0; i < pi.size(); ++i) {
        const std::uint32_t v = pi[i];
        if (closed[label[v]]) return false;
        if (i > 0 && label[pi[i - 1]] != label[v]) {
            closed[label[pi[i - 1]]] = 1;
            if (closed[label[v]]) return false;
        }
        if (i > 0 && label[pi[i - 1]] == label[v]) {
            bool has_lower = false;
            for (std::uint32_t u : g.adj[v])
                if (rank[u] < rank[v]) {
                    has_lower = true;
                    break;
                }
            if (!has_lower) return false;
        }
    }
    return true;
}

// GEO test straight from the definition: for i <= j in one component some
// i' <= i makes [[i', j]] connected. Cubic-ish; meant for small graphs.
inline bool is_geo_by_definition(const Graph& g, const Ordering& pi) {
    const auto rank = inverse_ordering(g, pi);
    const std::size_t n = g.size();
    if (n == 0) return true;
    const auto label = component_labels(g);
    // connected[a][b]: induced subgraph on ranks a..b (0-based) is connected.
    std::vector<std::vector<char>> connected(n, std::vector<char>(n, 0));
    for (std::size_t a = 0; a < n; ++a) {
        DisjointSets ds(n);
        std::size_t pieces = 0;
        for (std::size_t b = a; b < n; ++b) {
            const std::uint32_t v = pi[b];
            ++pieces;
            for (std::uint32_t u : g.adj[v]) {
                const std::size_t ru = rank[u] - 1;
                if (ru >= a && ru < b && ds.unite(v, u)) --pieces;
            }
            connected[a][b] = pieces == 1;
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            if (label[pi[i]] != label[pi[j]]) continue;
            bool ok = false;
            for (std::size_t ip = 0; ip <= i && !ok; ++ip) ok = connected[ip][j];
            if (!ok) return false;
        }
    return true;
}

// Explores g, always taking the lowest pi-rank vertex of the current
// 1-neighbourhood, or the lowest pi-rank unvisited vertex when that is empty.
inline Ordering explore_in_order(const Graph& g, const Ordering& pi) {
    const auto rank = inverse_ordering(g, pi);
    const std::size_t n = g.size();
    Ordering out;
    out.reserve(n);
    std::vector<char> visited(n, 0), queued(n, 0);
    std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> frontier; // ranks
    std::size_t cursor = 0;                                                                   // next unvisited in pi
    while (out.size() < n) {
        std::uint32_t v;
        if (!frontier.empty()) {
            v = pi[frontier.top() - 1];
            frontier.pop();
        } else {
            while (visited[pi[cursor]]) ++cursor;
            v = pi[cursor];
        }
        visited[v] = 1;
        out.push_back(v);
        for (std::uint32_t u : g.adj[v])
            if (!visited[u] && !queued[u]) {
                queued[u] = 1;
                frontier.push(rank[u]);
            }
    }
    return out;
}

// Black contraction: two blacks adjacent iff they share a white neighbour.
inline Graph black_contraction(const PercolatedGraph& pg) {
    const GraphSpec& spec = pg.spec;
    Graph h(spec.n_b);
    for (std::uint32_t w = spec.n_b; w < spec.n(); ++w) {
        const auto& nb = pg.graph.adj[w];
        for (std::size_t i = 0; i < nb.size(); ++i)
            for (std::size_t j = i + 1; j < nb.size(); ++j)
                if (!h.has_edge(nb[i], nb[j])) h.add_edge(nb[i], nb[j]);
    }
    return h;
}

// Per-step quantities of the 2-neighbourhood exploration, indexed by the
// black step k = 1..n_b; index 0 holds the k = 0 conventions (all zero).
struct ExplorationTrace {
    std::uint32_t n_b = 0;
    std::uint32_t n_w = 0;
    double p = 0.0;
    std::vector<std::uint32_t> sigma_b; // global ids of sigma^b(k); [0] unused
    std::vector<std::uint32_t> tau_b;   // Prim rank of the k-th black
    std::vector<std::int64_t> O_w, O_b, K_w, K_b, S_w, S_b, A_w, A_b, R, J_w, I_b;
    std::vector<std::size_t> lead_ranks;

    // Filled when ExplorationOptions::keep_sets is set.
    std::vector<std::vector<std::uint32_t>> O_w_sets, O_b_sets;
    std::vector<std::uint32_t> white_leads; // global ids of all white lead vertices
    std::vector<std::uint32_t> roots;       // global ids of all root vertices

    std::size_t steps() const noexcept { return n_b; }
};

struct ExplorationOptions {
    bool keep_sets = false;
};

namespace detail {

// Counts of inserted positions, prefix queries.
class Fenwick {
public:
    explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {}
    void add(std::size_t pos) {
        for (; pos < tree_.size(); pos += pos & (~pos + 1)) ++tree_[pos];
    }
    std::int64_t prefix(std::size_t pos) const {
        std::int64_t s = 0;
        for (pos = std::min(pos, tree_.size() - 1); pos > 0; pos -= pos & (~pos + 1)) s += tree_[pos];
        return s;
    }

private:
    std::vector<std::int64_t> tree_;
};

} // namespace detail

// Runs the 2-neighbourhood exploration of the black vertices of `pg` in the
// Prim order of `trace` and records the discovered sets O^w_k, O^b_k, the
// pools K^w_k, K^b_k, and the derived walks. The choice of sigma^b(k) is made
// by the exploration itself; tau_b comes from the Prim trace.
inline ExplorationTrace two_neighbourhood_exploration(const PercolatedGraph& pg, const PrimTrace& trace,
                                                      ExplorationOptions opts = {}) {
    const GraphSpec& spec = pg.spec;
    require_complete(trace, "two_neighbourhood_exploration");
    if (trace.n_b != spec.n_b || trace.n_w != spec.n_w || pg.graph.size() != spec.n())
        throw std::invalid_argument("two_neighbourhood_exploration: trace and graph sizes differ");
    // The graph must be the percolation of the same weights the trace used.
    for (std::size_t i = 1; i < trace.n(); ++i) {
        const PrimEdge& e = trace.edges[i - 1];
        const bool present = pg.graph.has_edge(e.edge.black, spec.n_b + e.edge.white);
        if (present != (e.weight <= pg.p))
            throw std::invalid_argument("two_neighbourhood_exploration: graph does not match the Prim weights");
    }

    const std::uint32_t nb = spec.n_b;
    const std::size_t n = spec.n();
    const auto rank = trace.rank_of();
    const auto& adj = pg.graph.adj;

    ExplorationTrace x;
    x.n_b = nb;
    x.n_w = spec.n_w;
    x.p = pg.p;
    x.tau_b = trace.tau_b;
    x.sigma_b.assign(nb + 1, 0);
    for (auto* v : {&x.O_w, &x.O_b, &x.K_w, &x.K_b, &x.S_w, &x.S_b, &x.A_w, &x.A_b, &x.R, &x.J_w, &x.I_b})
        v->assign(nb + 1, 0);
    x.lead_ranks = primbip::lead_ranks(trace, pg.p);
    if (opts.keep_sets) {
        x.O_w_sets.assign(nb + 1, {});
        x.O_b_sets.assign(nb + 1, {});
    }

    // Lead vertices (lowest rank of their component) and roots (lowest-rank
    // black of a component containing a black).
    std::vector<char> is_lead(n + 1, 0); // by rank
    for (std::size_t r : x.lead_ranks) is_lead[r] = 1;
    std::vector<char> is_root(n, 0); // by global id
    {
        const auto label = component_labels(pg.graph);
        std::vector<std::uint32_t> root_rank(n, 0);
        for (std::uint32_t b = 0; b < nb; ++b) {
            auto& rr = root_rank[label[b]];
            if (rr == 0 || rank[b] < rr) rr = rank[b];
        }
        for (std::uint32_t b = 0; b < nb; ++b)
            if (root_rank[label[b]] == rank[b]) is_root[b] = 1;
    }
    if (opts.keep_sets) {
        for (std::size_t r : x.lead_ranks) {
            const std::uint32_t g = spec.global(trace.at_rank(r));
            if (g >= nb) x.white_leads.push_back(g);
        }
        for (std::uint32_t b = 0; b < nb; ++b)
            if (is_root[b]) x.roots.push_back(b);
    }

    // Availability: a white leaves the pool once discovered or once its rank
    // is passed; blacks likewise.
    std::vector<char> w_gone(n, 0), b_gone(n, 0);
    std::int64_t K_w = spec.n_w, K_b = nb;
    detail::Fenwick w_disc_ranks(n), b_disc_ranks(n);
    std::int64_t w_disc_total = 0, b_disc_total = 0;
    std::size_t passed = 0;   // ranks <= passed have been absorbed into Sigma(tau^b_k)
    std::int64_t J_w = 0, I_b = 0;
    std::vector<std::uint32_t> pending_O_w; // O^w_{k-1}, removed from the pool at step k

    // Algorithm state: visited blacks and the frontier N^2(visited).
    std::vector<char> visited(n, 0), queued(n, 0);
    std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> frontier; // ranks
    std::size_t cursor = 1; // scans ranks for the lowest unvisited black
    std::vector<std::uint32_t> stamp(n, 0);

    for (std::uint32_t k = 1; k <= nb; ++k) {
        // Choose sigma^b(k).
        std::uint32_t v = 0;
        bool chosen = false;
        while (!frontier.empty()) {
            const std::uint32_t r = frontier.top();
            frontier.pop();
            const std::uint32_t cand = spec.global(trace.at_rank(r));
            if (!visited[cand]) {
                v = cand;
                chosen = true;
                break;
            }
        }
        if (!chosen) {
            for (;; ++cursor) {
                const std::uint32_t cand = spec.global(trace.at_rank(cursor));
                if (cand < nb && !visited[cand]) {
                    v = cand;
                    break;
                }
            }
        }
        visited[v] = 1;
        x.sigma_b[k] = v;

        // Absorb Sigma(tau^b_k) into the removed sets.
        const std::size_t tk = trace.tau_b[k];
        while (passed < tk) {
            ++passed;
            const std::uint32_t g = spec.global(trace.at_rank(passed));
            if (g < nb) {
                if (!b_gone[g]) { b_gone[g] = 1; --K_b; }
                if (is_root[g]) ++I_b;
            } else {
                if (!w_gone[g]) { w_gone[g] = 1; --K_w; }
                if (is_lead[passed]) ++J_w;
            }
        }
        for (std::uint32_t g : pending_O_w)
            if (!w_gone[g]) { w_gone[g] = 1; --K_w; }
        pending_O_w.clear();
        x.K_w[k] = K_w;
        x.K_b[k] = K_b;

        // A^w(k): whites from O^w_1..O^w_{k-1} ranked after tau^b_k.
        x.A_w[k] = w_disc_total - w_disc_ranks.prefix(tk);

        // O^w_k = N(sigma^b(k)) cap K^w_k.
        std::int64_t ow = 0;
        for (std::uint32_t u : adj[v]) {
            if (w_gone[u]) continue;
            ++ow;
            pending_O_w.push_back(u);
            w_disc_ranks.add(rank[u]);
            ++w_disc_total;
            if (opts.keep_sets) x.O_w_sets[k].push_back(u);
        }

        // O^b_k = N^2(sigma^b(k)) cap K^b_k; also grows the frontier N^2(visited).
        std::int64_t obk = 0;
        for (std::uint32_t u : adj[v])
            for (std::uint32_t b2 : adj[u]) {
                if (b2 == v || stamp[b2] == k) continue;
                stamp[b2] = k;
                if (!visited[b2] && !queued[b2]) {
                    queued[b2] = 1;
                    frontier.push(rank[b2]);
                }
                if (b_gone[b2]) continue;
                ++obk;
                b_gone[b2] = 1;
                --K_b;
                b_disc_ranks.add(rank[b2]);
                ++b_disc_total;
                if (opts.keep_sets) x.O_b_sets[k].push_back(b2);
            }

        x.O_w[k] = ow;
        x.O_b[k] = obk;
        x.S_w[k] = x.S_w[k - 1] + ow;
        x.S_b[k] = x.S_b[k - 1] + obk;
        x.J_w[k] = J_w;
        x.I_b[k] = I_b;
        x.R[k] = static_cast<std::int64_t>(tk - k) - J_w;
        // A^b(k): blacks from O^b_1..O^b_k ranked after tau^b_k.
        x.A_b[k] = b_disc_total - b_disc_ranks.prefix(tk);
    }
    return x;
}

struct IdentityReport {
    bool ok = true;
    std::vector<std::string> violations;
};

// Checks, for every k in [n_b]:
//   A^w(k) = S^w_{k-1} - R(k)
//   A^b(k) = S^b_k - k + I^b(k)
//   I^b(k) - 1 = -min(0, min_{1<=j<=k-1} (S^b_j - j))
//   n_w - K^w_k = S^w_{k-1} + J^w(k)
//   n_b - K^b_k = S^b_{k-1} + I^b(k)
inline IdentityReport check_counting_identities(const ExplorationTrace& x) {
    IdentityReport rep;
    auto fail = [&](std::uint32_t k, const std::string& what) {
        rep.ok = false;
        rep.violations.push_back("k=" + std::to_string(k) + ": " + what);
    };
    std::int64_t running_min = 0; // min over j in {0} u [k-1] of S^b_j - j
    for (std::uint32_t k = 1; k <= x.n_b; ++k) {
        const std::int64_t kk = k;
        if (x.A_w[k] != x.S_w[k - 1] - x.R[k]) fail(k, "A^w(k) != S^w_{k-1} - R(k)");
        if (x.A_b[k] != x.S_b[k] - kk + x.I_b[k]) fail(k, "A^b(k) != S^b_k - k + I^b(k)");
        if (x.I_b[k] - 1 != -running_min) fail(k, "I^b(k) - 1 != -inf_j (S^b_j - j)");
        if (std::int64_t{x.n_w} - x.K_w[k] != x.S_w[k - 1] + x.J_w[k]) fail(k, "n_w - K^w_k != S^w_{k-1} + J^w(k)");
        if (std::int64_t{x.n_b} - x.K_b[k] != x.S_b[k - 1] + x.I_b[k]) fail(k, "n_b - K^b_k != S^b_{k-1} + I^b(k)");
        running_min = std::min(running_min, x.S_b[k] - kk);
    }
    return rep;
}

// One row per k: k,tau_b,O_w,O_b,K_w,K_b,S_w,S_b,A_w,A_b,R,J_w,I_b
inline void write_exploration_csv(std::ostream& os, const ExplorationTrace& x) {
    os << "k,tau_b,O_w,O_b,K_w,K_b,S_w,S_b,A_w,A_b,R,J_w,I_b\n";
    for (std::uint32_t k = 1; k <= x.n_b; ++k) {
        os << k << ',' << x.tau_b[k] << ',' << x.O_w[k] << ',' << x.O_b[k] << ',' << x.K_w[k] << ',' << x.K_b[k]
           << ',' << x.S_w[k] << ',' << x.S_b[k] << ',' << x.A_w[k] << ',' << x.A_b[k] << ',' << x.R[k] << ','
           << x.J_w[k] << ',' << x.I_b[k] << '\n';
    }
}

} // namespace primbip
