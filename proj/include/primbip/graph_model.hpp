// graph_model.hpp
//
// The weighted complete bipartite graph K_{n_b,n_w}. Edge weights are i.i.d.
// U(0,1) and are never materialised in implicit mode: a weight is a stateless
// hash of (seed, black index, white index).
#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "primbip/rng.hpp"

namespace primbip {

enum class Colour : std::uint8_t { Black, White };

constexpr Colour opposite(Colour c) noexcept { return c == Colour::Black ? Colour::White : Colour::Black; }
constexpr const char* to_string(Colour c) noexcept { return c == Colour::Black ? "black" : "white"; }

struct VertexId {
    Colour colour = Colour::Black;
    std::uint32_t index = 0;

    static constexpr VertexId black(std::uint32_t i) noexcept { return {Colour::Black, i}; }
    static constexpr VertexId white(std::uint32_t i) noexcept { return {Colour::White, i}; }

    constexpr bool is_black() const noexcept { return colour == Colour::Black; }
    friend constexpr bool operator==(const VertexId&, const VertexId&) = default;
};

inline std::string to_string(VertexId v) {
    return (v.is_black() ? "b" : "w") + std::to_string(v.index);
}

struct EdgeId {
    std::uint32_t black = 0;
    std::uint32_t white = 0;

    friend constexpr bool operator==(const EdgeId&, const EdgeId&) = default;
    // Lexicographic (black, white); the tie-break order for equal weights.
    friend constexpr bool operator<(const EdgeId& a, const EdgeId& b) noexcept {
        return a.black != b.black ? a.black < b.black : a.white < b.white;
    }
};

struct GraphSpec {
    std::uint32_t n_b = 1;
    std::uint32_t n_w = 1;
    std::uint64_t seed = 0;

    constexpr std::size_t n() const noexcept { return std::size_t{n_b} + n_w; }

    void validate() const {
        if (n_b < 1 || n_w < 1) throw std::invalid_argument("GraphSpec: n_b and n_w must be >= 1");
    }

    constexpr bool contains(VertexId v) const noexcept {
        return v.is_black() ? v.index < n_b : v.index < n_w;
    }
    constexpr bool contains(EdgeId e) const noexcept { return e.black < n_b && e.white < n_w; }

    // Global numbering used by graph algorithms: blacks first, then whites.
    constexpr std::uint32_t global(VertexId v) const noexcept {
        return v.is_black() ? v.index : n_b + v.index;
    }
    constexpr VertexId vertex(std::uint32_t g) const noexcept {
        return g < n_b ? VertexId::black(g) : VertexId::white(g - n_b);
    }

    // The same graph with colours exchanged.
    constexpr GraphSpec swapped() const noexcept { return {n_w, n_b, seed}; }
};

// n_b / n.
inline double theta_hat(const GraphSpec& spec) {
    return static_cast<double>(spec.n_b) / static_cast<double>(spec.n());
}

class WeightOracle {
public:
    enum class Mode : std::uint8_t { Explicit, Implicit };

    static WeightOracle implicit(const GraphSpec& spec) {
        spec.validate();
        WeightOracle o;
        o.mode_ = Mode::Implicit;
        o.n_b_ = spec.n_b;
        o.n_w_ = spec.n_w;
        o.key_ = derive_key(spec.seed, "weights");
        return o;
    }

    // `weights` is row-major: weights[b * n_w + w].
    static WeightOracle explicit_table(std::uint32_t n_b, std::uint32_t n_w, std::vector<double> weights) {
        if (n_b < 1 || n_w < 1) throw std::invalid_argument("WeightOracle: empty dimensions");
        if (weights.size() != std::size_t{n_b} * n_w)
            throw std::invalid_argument("WeightOracle: table size does not match n_b * n_w");
        for (double u : weights)
            if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("WeightOracle: weights must lie in (0,1)");
        WeightOracle o;
        o.mode_ = Mode::Explicit;
        o.n_b_ = n_b;
        o.n_w_ = n_w;
        o.table_ = std::move(weights);
        return o;
    }

    // Explicit table filled from the implicit hash, for audits that mutate weights.
    static WeightOracle materialize(const GraphSpec& spec) {
        const WeightOracle src = implicit(spec);
        std::vector<double> t(std::size_t{spec.n_b} * spec.n_w);
        for (std::uint32_t b = 0; b < spec.n_b; ++b)
            for (std::uint32_t w = 0; w < spec.n_w; ++w) t[std::size_t{b} * spec.n_w + w] = src(b, w);
        return explicit_table(spec.n_b, spec.n_w, std::move(t));
    }

    Mode mode() const noexcept { return mode_; }
    std::uint32_t n_b() const noexcept { return n_b_; }
    std::uint32_t n_w() const noexcept { return n_w_; }
    bool matches(const GraphSpec& spec) const noexcept { return spec.n_b == n_b_ && spec.n_w == n_w_; }

    // Unchecked lookup; the hot path of Prim.
    double operator()(std::uint32_t black, std::uint32_t white) const noexcept {
        if (transposed_) std::swap(black, white);
        if (mode_ == Mode::Implicit) {
            const std::uint64_t counter = (std::uint64_t{black} << 32) | white;
            return bits_to_open_unit(mix64(key_ + kGolden * (counter + 1)));
        }
        return table_[std::size_t{black} * stride() + white];
    }
    double operator()(EdgeId e) const noexcept { return (*this)(e.black, e.white); }

    double at(EdgeId e) const {
        if (e.black >= n_b_ || e.white >= n_w_)
            throw std::out_of_range("edge (" + std::to_string(e.black) + "," + std::to_string(e.white) +
                                    ") outside K_{" + std::to_string(n_b_) + "," + std::to_string(n_w_) + "}");
        return (*this)(e);
    }

    // Weights of the colour-swapped graph: edge (b, w) there is edge (w, b) here.
    WeightOracle transposed() const {
        WeightOracle o = *this;
        o.transposed_ = !transposed_;
        std::swap(o.n_b_, o.n_w_);
        return o;
    }

    // Explicit mode only.
    void set(EdgeId e, double u) {
        if (mode_ != Mode::Explicit) throw std::logic_error("WeightOracle::set on an implicit oracle");
        if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("WeightOracle: weights must lie in (0,1)");
        (void)at(e);
        std::uint32_t b = e.black, w = e.white;
        if (transposed_) std::swap(b, w);
        table_[std::size_t{b} * stride() + w] = u;
    }

private:
    WeightOracle() = default;

    // Row length of the stored table, in untransposed coordinates.
    std::size_t stride() const noexcept { return transposed_ ? n_b_ : n_w_; }

    Mode mode_ = Mode::Implicit;
    bool transposed_ = false;
    std::uint32_t n_b_ = 0;
    std::uint32_t n_w_ = 0;
    std::uint64_t key_ = 0;
    std::vector<double> table_;
};

// Checked weight lookup.
inline double edge_weight(const WeightOracle& oracle, EdgeId e) { return oracle.at(e); }

// Strict total order on edges: weight first, then (black, white).
struct EdgeKey {
    double weight;
    EdgeId edge;

    friend constexpr bool operator<(const EdgeKey& a, const EdgeKey& b) noexcept {
        if (a.weight != b.weight) return a.weight < b.weight;
        return a.edge < b.edge;
    }
};

} // namespace primbip
