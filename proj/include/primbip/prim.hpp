// prim.hpp
//
// Prim's algorithm (equivalently invasion percolation) on K_{n_b,n_w} with
// early stopping. Dense variant: every outside vertex keeps its cheapest edge
// into the current tree, and adding a vertex only touches the opposite colour.
// A run of m steps costs O(m * n) time and O(n) memory.
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "primbip/graph_model.hpp"
#include "primbip/rng.hpp"

namespace primbip {

struct StartPolicy {
    enum class Kind : std::uint8_t { UniformAll, UniformBlack, UniformWhite, Fixed };

    Kind kind = Kind::UniformAll;
    VertexId vertex{};

    static constexpr StartPolicy uniform_all() noexcept { return {Kind::UniformAll, {}}; }
    static constexpr StartPolicy uniform_black() noexcept { return {Kind::UniformBlack, {}}; }
    static constexpr StartPolicy uniform_white() noexcept { return {Kind::UniformWhite, {}}; }
    static constexpr StartPolicy fixed(VertexId v) noexcept { return {Kind::Fixed, v}; }
};

struct PrimEdge {
    EdgeId edge;
    double weight;
};

// Ranks are 1-based throughout, as in the Prim sequence sigma(1..L).
struct PrimTrace {
    std::uint32_t n_b = 0;
    std::uint32_t n_w = 0;
    std::vector<VertexId> sigma;             // sigma[k-1] = sigma(k)
    std::vector<PrimEdge> edges;             // edges[k-1] = e_k, joins sigma(k+1) to the tree
    std::vector<std::uint32_t> black_prefix; // black_prefix[k] = |Sigma^b(k)|, black_prefix[0] = 0
    std::vector<std::uint32_t> tau_b;        // tau_b[k] = rank of the k-th black vertex, tau_b[0] = 0

    std::size_t n() const noexcept { return std::size_t{n_b} + n_w; }
    std::size_t length() const noexcept { return sigma.size(); }
    bool complete() const noexcept { return sigma.size() == n(); }

    const VertexId& at_rank(std::size_t k) const { return sigma.at(k - 1); }
    // U_{e_i}, 1 <= i < length().
    double prim_weight(std::size_t i) const { return edges.at(i - 1).weight; }
    std::size_t blacks_seen() const noexcept { return tau_b.size() - 1; }

    // Global-id -> rank table for a complete trace (blacks first, then whites).
    std::vector<std::uint32_t> rank_of() const {
        std::vector<std::uint32_t> r(n(), 0);
        for (std::size_t k = 1; k <= sigma.size(); ++k) {
            const VertexId v = sigma[k - 1];
            r[v.is_black() ? v.index : n_b + v.index] = static_cast<std::uint32_t>(k);
        }
        return r;
    }

    double total_weight() const noexcept {
        double s = 0.0;
        for (const auto& e : edges) s += e.weight;
        return s;
    }
};

inline VertexId choose_start(const GraphSpec& spec, StartPolicy policy) {
    spec.validate();
    Stream rng(spec.seed, "start");
    switch (policy.kind) {
    case StartPolicy::Kind::UniformAll: {
        const auto i = static_cast<std::uint32_t>(rng.below(spec.n()));
        return spec.vertex(i);
    }
    case StartPolicy::Kind::UniformBlack:
        return VertexId::black(static_cast<std::uint32_t>(rng.below(spec.n_b)));
    case StartPolicy::Kind::UniformWhite:
        return VertexId::white(static_cast<std::uint32_t>(rng.below(spec.n_w)));
    case StartPolicy::Kind::Fixed:
        if (!spec.contains(policy.vertex))
            throw std::invalid_argument("StartPolicy::Fixed vertex " + to_string(policy.vertex) + " not in graph");
        return policy.vertex;
    }
    throw std::invalid_argument("unknown start policy");
}

namespace detail {

// Outside vertices of one colour class, kept compact (swap-remove) so that
// scans shrink as the tree grows. best is +inf until a tree neighbour exists.
// block_min holds the minimum of each run of kBlock entries, so a removal
// only touches two blocks instead of the whole class.
struct Frontier {
    static constexpr std::size_t kBlock = 256;

    std::vector<std::uint32_t> id;      // vertex index within its colour
    std::vector<double> best;           // weight of the cheapest edge into the tree
    std::vector<std::uint32_t> partner; // opposite-colour endpoint of that edge
    std::vector<std::uint32_t> slot;    // vertex index -> position in id
    std::vector<double> block_min;

    explicit Frontier(std::uint32_t size)
        : id(size), best(size, std::numeric_limits<double>::infinity()), partner(size, 0), slot(size),
          block_min((size + kBlock - 1) / kBlock, std::numeric_limits<double>::infinity()) {
        for (std::uint32_t i = 0; i < size; ++i) id[i] = slot[i] = i;
    }

    std::size_t size() const noexcept { return id.size(); }

    void recompute_block(std::size_t blk) {
        const std::size_t lo = blk * kBlock, hi = std::min(lo + kBlock, best.size());
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = lo; i < hi; ++i) m = best[i] < m ? best[i] : m;
        block_min[blk] = m;
    }

    void remove(std::uint32_t v) {
        const std::uint32_t pos = slot[v];
        const std::uint32_t last = static_cast<std::uint32_t>(id.size() - 1);
        id[pos] = id[last];
        best[pos] = best[last];
        partner[pos] = partner[last];
        slot[id[pos]] = pos;
        id.pop_back();
        best.pop_back();
        partner.pop_back();
        block_min.resize((id.size() + kBlock - 1) / kBlock);
        if (pos < id.size()) recompute_block(pos / kBlock);
        if (!id.empty()) recompute_block((id.size() - 1) / kBlock);
    }

    // Offers the edges to a new tree vertex `from`; ties keep the smaller partner.
    template <class Weight>
    void relax(std::uint32_t from, Weight weight) {
        for (std::size_t i = 0; i < id.size(); ++i) {
            const double u = weight(id[i]);
            if (u < best[i] || (u == best[i] && from < partner[i])) {
                best[i] = u;
                partner[i] = from;
            }
        }
        for (std::size_t blk = 0; blk < block_min.size(); ++blk) recompute_block(blk);
    }

    // Position of the cheapest entry under the (weight, black, white) order, or -1.
    std::ptrdiff_t argmin(bool black_side) const {
        double m = std::numeric_limits<double>::infinity();
        for (const double u : block_min) m = u < m ? u : m;
        if (m == std::numeric_limits<double>::infinity()) return -1;
        std::ptrdiff_t at = -1;
        for (std::size_t blk = 0; blk < block_min.size(); ++blk) {
            if (block_min[blk] != m) continue;
            const std::size_t lo = blk * kBlock, hi = std::min(lo + kBlock, best.size());
            for (std::size_t i = lo; i < hi; ++i)
                if (best[i] == m && (at < 0 || key(i, black_side) < key(static_cast<std::size_t>(at), black_side)))
                    at = static_cast<std::ptrdiff_t>(i);
        }
        return at;
    }

    EdgeKey key(std::size_t i, bool black_side) const {
        return black_side ? EdgeKey{best[i], {id[i], partner[i]}} : EdgeKey{best[i], {partner[i], id[i]}};
    }
};

} // namespace detail

// Runs Prim from the vertex chosen by `policy` for k_max steps (all n when
// k_max is empty). Ties in weight are broken by the (black, white) order of
// the edge, which makes every trace deterministic.
inline PrimTrace run_prim(const GraphSpec& spec, const WeightOracle& oracle, StartPolicy policy,
                          std::optional<std::size_t> k_max = std::nullopt) {
    spec.validate();
    if (!oracle.matches(spec)) throw std::invalid_argument("run_prim: oracle dimensions do not match spec");
    const std::size_t n = spec.n();
    const std::size_t steps = k_max.value_or(n);
    if (steps < 1) throw std::invalid_argument("run_prim: k_max must be >= 1");
    if (steps > n) throw std::invalid_argument("run_prim: k_max exceeds n");

    PrimTrace t;
    t.n_b = spec.n_b;
    t.n_w = spec.n_w;
    t.sigma.reserve(steps);
    t.edges.reserve(steps - 1);
    t.black_prefix.reserve(steps + 1);
    t.black_prefix.push_back(0);
    t.tau_b.push_back(0);

    detail::Frontier blk(spec.n_b), wht(spec.n_w);

    // A new tree vertex only changes the best edges of the opposite colour.
    auto admit = [&](VertexId v) {
        t.sigma.push_back(v);
        const auto k = static_cast<std::uint32_t>(t.sigma.size());
        const std::uint32_t prev = t.black_prefix.back();
        if (v.is_black()) {
            t.black_prefix.push_back(prev + 1);
            t.tau_b.push_back(k);
            blk.remove(v.index);
            if (k == steps) return;
            wht.relax(v.index, [&](std::uint32_t w) { return oracle(v.index, w); });
        } else {
            t.black_prefix.push_back(prev);
            wht.remove(v.index);
            if (k == steps) return;
            blk.relax(v.index, [&](std::uint32_t b) { return oracle(b, v.index); });
        }
    };

    admit(choose_start(spec, policy));

    while (t.sigma.size() < steps) {
        // Cheapest crossing edge over both colour classes.
        const std::ptrdiff_t ib = blk.argmin(true), iw = wht.argmin(false);
        if (ib < 0 && iw < 0) throw std::logic_error("run_prim: no crossing edge");
        const bool take_black =
            iw < 0 || (ib >= 0 && blk.key(static_cast<std::size_t>(ib), true) < wht.key(static_cast<std::size_t>(iw), false));
        const EdgeKey best = take_black ? blk.key(static_cast<std::size_t>(ib), true) : wht.key(static_cast<std::size_t>(iw), false);
        const VertexId next = take_black ? VertexId::black(blk.id[static_cast<std::size_t>(ib)])
                                         : VertexId::white(wht.id[static_cast<std::size_t>(iw)]);
        t.edges.push_back({best.edge, best.weight});
        admit(next);
    }
    return t;
}

// rho^{(n)}_k = |Sigma^b(k)| / k.
inline double colour_ratio(const PrimTrace& trace, std::size_t k) {
    if (k < 1 || k > trace.length())
        throw std::out_of_range("colour_ratio: k=" + std::to_string(k) + " outside [1," +
                                std::to_string(trace.length()) + "]");
    return static_cast<double>(trace.black_prefix[k]) / static_cast<double>(k);
}

inline std::vector<std::pair<std::size_t, double>> ratio_trajectory(const PrimTrace& trace,
                                                                    const std::vector<std::size_t>& ks) {
    std::vector<std::pair<std::size_t, double>> out;
    out.reserve(ks.size());
    for (std::size_t k : ks) out.emplace_back(k, colour_ratio(trace, k));
    return out;
}

} // namespace primbip
