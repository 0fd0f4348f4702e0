// percolation.hpp
//
// Bond percolation G(n_b, n_w, p): the subgraph of edges with weight <= p.
// Components are extracted two ways: union-find on the realised edges, and as
// runs of consecutive Prim ranks cut wherever a Prim edge exceeds p.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "primbip/graph_model.hpp"
#include "primbip/prim.hpp"
#include "primbip/rng.hpp"

namespace primbip {

inline void check_probability(double p, const char* where) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(where) + ": p must lie in [0,1]");
}

// Every edge with U_e <= p, by exhaustive filtering. Coupled to the oracle.
inline std::vector<EdgeId> realized_edges(const GraphSpec& spec, const WeightOracle& oracle, double p) {
    check_probability(p, "realized_edges");
    if (!oracle.matches(spec)) throw std::invalid_argument("realized_edges: oracle dimensions do not match spec");
    std::vector<EdgeId> out;
    for (std::uint32_t b = 0; b < spec.n_b; ++b)
        for (std::uint32_t w = 0; w < spec.n_w; ++w)
            if (oracle(b, w) <= p) out.push_back({b, w});
    return out;
}

// A draw of G(n_b, n_w, p) by geometric skip-sampling along each black row:
// O(#edges + n_b) work. Uses its own substream per row, so it is NOT coupled
// to the Prim weights of the same seed.
inline std::vector<EdgeId> sample_percolation_edges(const GraphSpec& spec, double p) {
    check_probability(p, "sample_percolation_edges");
    spec.validate();
    std::vector<EdgeId> out;
    if (p <= 0.0) return out;
    for (std::uint32_t b = 0; b < spec.n_b; ++b) {
        if (p >= 1.0) {
            for (std::uint32_t w = 0; w < spec.n_w; ++w) out.push_back({b, w});
            continue;
        }
        Stream rng(spec.seed, "perc", b);
        std::geometric_distribution<std::uint64_t> gap(p);
        std::uint64_t w = gap(rng);
        while (w < spec.n_w) {
            out.push_back({b, static_cast<std::uint32_t>(w)});
            w += 1 + gap(rng);
        }
    }
    return out;
}

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0u); }

    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        return true;
    }

    std::size_t size_of(std::uint32_t x) { return size_[find(x)]; }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::size_t> size_;
};

// A set family over global vertex ids. Canonical form: each block sorted,
// blocks ordered by their smallest element.
using Partition = std::vector<std::vector<std::uint32_t>>;

inline void canonicalize(Partition& part) {
    for (auto& block : part) std::sort(block.begin(), block.end());
    std::sort(part.begin(), part.end());
}

inline Partition components_bruteforce(const std::vector<EdgeId>& edges, const GraphSpec& spec) {
    spec.validate();
    DisjointSets ds(spec.n());
    for (const EdgeId& e : edges) {
        if (!spec.contains(e)) throw std::invalid_argument("components_bruteforce: edge outside graph");
        ds.unite(e.black, spec.n_b + e.white);
    }
    std::vector<std::int64_t> slot(spec.n(), -1);
    Partition part;
    for (std::uint32_t v = 0; v < spec.n(); ++v) {
        const std::uint32_t r = ds.find(v);
        if (slot[r] < 0) {
            slot[r] = static_cast<std::int64_t>(part.size());
            part.emplace_back();
        }
        part[static_cast<std::size_t>(slot[r])].push_back(v);
    }
    canonicalize(part);
    return part;
}

// Components of G(n_b, n_w, p) as Prim-rank intervals [J_{j-1}+1, J_j].
struct ComponentIntervals {
    double p = 0.0;
    std::vector<std::size_t> thresholds; // J_1 < ... < J_m = n

    std::size_t count() const noexcept { return thresholds.size(); }
    // Inclusive rank range of the j-th component, 1 <= j <= m.
    std::pair<std::size_t, std::size_t> interval(std::size_t j) const {
        const std::size_t lo = j == 1 ? 1 : thresholds.at(j - 2) + 1;
        return {lo, thresholds.at(j - 1)};
    }
};

inline void require_complete(const PrimTrace& trace, const char* where) {
    if (!trace.complete()) throw std::invalid_argument(std::string(where) + ": needs a full Prim trace");
}

inline ComponentIntervals intervals_from_prim(const PrimTrace& trace, double p) {
    check_probability(p, "intervals_from_prim");
    require_complete(trace, "intervals_from_prim");
    ComponentIntervals ci;
    ci.p = p;
    const std::size_t n = trace.n();
    for (std::size_t i = 1; i < n; ++i)
        if (trace.prim_weight(i) > p) ci.thresholds.push_back(i);
    ci.thresholds.push_back(n);
    return ci;
}

// Ranks that open a new interval: 1 and every j+1 with U_{e_j} > p.
inline std::vector<std::size_t> lead_ranks(const PrimTrace& trace, double p) {
    std::vector<std::size_t> out{1};
    for (std::size_t j = 1; j < trace.length(); ++j)
        if (trace.prim_weight(j) > p) out.push_back(j + 1);
    return out;
}

inline Partition interval_partition(const ComponentIntervals& ci, const PrimTrace& trace) {
    const GraphSpec spec{trace.n_b, trace.n_w, 0};
    Partition part;
    part.reserve(ci.count());
    for (std::size_t j = 1; j <= ci.count(); ++j) {
        const auto [lo, hi] = ci.interval(j);
        auto& block = part.emplace_back();
        for (std::size_t k = lo; k <= hi; ++k) block.push_back(spec.global(trace.at_rank(k)));
    }
    canonicalize(part);
    return part;
}

inline bool verify_interval_representation(const PrimTrace& trace, double p, const GraphSpec& spec,
                                           const WeightOracle& oracle) {
    require_complete(trace, "verify_interval_representation");
    const Partition by_prim = interval_partition(intervals_from_prim(trace, p), trace);
    return by_prim == components_bruteforce(realized_edges(spec, oracle, p), spec);
}

struct GiantStats {
    std::size_t size = 0;
    std::size_t c_b = 0;
    std::size_t c_w = 0;
    std::size_t second_size = 0;
    std::size_t k_minus = 0;
    std::size_t k_plus = 0;
};

// Largest interval; on equal sizes the lowest k_minus wins.
inline GiantStats giant_stats(const ComponentIntervals& ci, const PrimTrace& trace) {
    require_complete(trace, "giant_stats");
    GiantStats g;
    std::size_t best_j = 0;
    for (std::size_t j = 1; j <= ci.count(); ++j) {
        const auto [lo, hi] = ci.interval(j);
        const std::size_t len = hi - lo + 1;
        if (len > g.size) {
            g.second_size = g.size;
            g.size = len;
            best_j = j;
        } else if (len > g.second_size) {
            g.second_size = len;
        }
    }
    const auto [lo, hi] = ci.interval(best_j);
    g.k_minus = lo;
    g.k_plus = hi;
    g.c_b = trace.black_prefix[hi] - trace.black_prefix[lo - 1];
    g.c_w = g.size - g.c_b;
    return g;
}

// Component statistics straight from an edge list (no ranks available).
inline GiantStats giant_stats_from_edges(const std::vector<EdgeId>& edges, const GraphSpec& spec) {
    DisjointSets ds(spec.n());
    for (const EdgeId& e : edges) ds.unite(e.black, spec.n_b + e.white);
    std::vector<std::size_t> blacks(spec.n(), 0), total(spec.n(), 0);
    for (std::uint32_t v = 0; v < spec.n(); ++v) {
        const std::uint32_t r = ds.find(v);
        ++total[r];
        if (v < spec.n_b) ++blacks[r];
    }
    GiantStats g;
    std::size_t best_root = 0;
    for (std::uint32_t r = 0; r < spec.n(); ++r) {
        if (total[r] > g.size) {
            g.second_size = g.size;
            g.size = total[r];
            best_root = r;
        } else if (total[r] > g.second_size) {
            g.second_size = total[r];
        }
    }
    g.c_b = blacks[best_root];
    g.c_w = g.size - g.c_b;
    return g;
}

inline double critical_p(const GraphSpec& spec, double lambda = 1.0) {
    return std::min(1.0, lambda / std::sqrt(static_cast<double>(spec.n_b) * static_cast<double>(spec.n_w)));
}

} // namespace primbip
