// harness.hpp
//
// Monte Carlo experiments on the colour ratio and the exact property sweeps.
// Every trial draws its graph from a substream keyed by (seed, sizes, trial
// index); results are stored by trial index and reduced in that order, so
// output is byte-identical for any worker count.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "primbip/exploration.hpp"
#include "primbip/graph_model.hpp"
#include "primbip/limits.hpp"
#include "primbip/percolation.hpp"
#include "primbip/prim.hpp"
#include "primbip/rng.hpp"
#include "primbip/stats.hpp"

namespace primbip {

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvariantViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SizePoint {
    std::uint32_t n_b = 1;
    std::uint32_t n_w = 1;

    std::size_t n() const noexcept { return std::size_t{n_b} + n_w; }
    double theta_hat() const noexcept { return static_cast<double>(n_b) / static_cast<double>(n()); }
};

// n_b = round(theta n), kept inside [1, n-1].
inline SizePoint size_from_theta(std::size_t n, double theta) {
    if (n < 2) throw ConfigError("n must be >= 2");
    if (!(theta > 0.0 && theta < 1.0)) throw ConfigError("theta must lie in (0,1)");
    auto nb = static_cast<std::size_t>(std::llround(theta * static_cast<double>(n)));
    nb = std::clamp<std::size_t>(nb, 1, n - 1);
    return {static_cast<std::uint32_t>(nb), static_cast<std::uint32_t>(n - nb)};
}

// kappa_n as a function of n: "pow:a" (n^a), "sqrt", "log:c" (c ln n), or an integer.
class KappaRule {
public:
    enum class Kind { Power, Log, Constant };

    static KappaRule parse(const std::string& text) {
        KappaRule r;
        r.text_ = text;
        auto number = [&](const std::string& s) {
            // Accepts "0.5" or a fraction "2/3".
            const auto slash = s.find('/');
            std::size_t used = 0;
            try {
                if (slash == std::string::npos) {
                    const double v = std::stod(s, &used);
                    if (used != s.size()) throw std::invalid_argument(s);
                    return v;
                }
                const double num = std::stod(s.substr(0, slash));
                const double den = std::stod(s.substr(slash + 1));
                return num / den;
            } catch (const std::exception&) {
                throw ConfigError("bad kappa rule: " + text);
            }
        };
        if (text == "sqrt") {
            r.kind_ = Kind::Power;
            r.param_ = 0.5;
        } else if (text.rfind("pow:", 0) == 0) {
            r.kind_ = Kind::Power;
            r.param_ = number(text.substr(4));
            if (!(r.param_ > 0.0 && r.param_ < 1.0)) throw ConfigError("kappa exponent must lie in (0,1)");
        } else if (text.rfind("log:", 0) == 0) {
            r.kind_ = Kind::Log;
            r.param_ = number(text.substr(4));
            if (!(r.param_ > 0.0)) throw ConfigError("kappa log multiple must be positive");
        } else {
            r.kind_ = Kind::Constant;
            r.param_ = number(text);
            if (r.param_ < 1.0 || r.param_ != std::floor(r.param_)) throw ConfigError("bad kappa rule: " + text);
        }
        return r;
    }

    static KappaRule two_thirds() { return parse("pow:2/3"); }

    std::size_t evaluate(std::size_t n) const {
        const double dn = static_cast<double>(n);
        double v = 0.0;
        switch (kind_) {
        case Kind::Power: v = std::pow(dn, param_); break;
        case Kind::Log: v = param_ * std::log(dn); break;
        case Kind::Constant: v = param_; break;
        }
        const auto k = static_cast<std::size_t>(std::floor(v + 1e-9));
        if (k < 1 || k > n)
            throw ConfigError("kappa rule " + text_ + " gives " + std::to_string(k) + " outside [1," +
                              std::to_string(n) + "]");
        return k;
    }

    const std::string& text() const noexcept { return text_; }

private:
    Kind kind_ = Kind::Power;
    double param_ = 2.0 / 3.0;
    std::string text_ = "pow:2/3";
};

enum class Regime { Sublinear, Linear, Verify, Curve, BP };
enum class OutputFormat { Csv, Json };

inline const char* to_string(Regime r) noexcept {
    switch (r) {
    case Regime::Sublinear: return "sublinear";
    case Regime::Linear: return "linear";
    case Regime::Verify: return "verify";
    case Regime::Curve: return "curve";
    case Regime::BP: return "bp";
    }
    return "?";
}

struct ExperimentConfig {
    std::vector<SizePoint> sizes;
    Regime regime = Regime::Sublinear;
    KappaRule kappa = KappaRule::two_thirds();
    std::vector<double> s_list;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    StartPolicy policy = StartPolicy::uniform_all();
    std::string output;
    OutputFormat format = OutputFormat::Csv;
    unsigned workers = 1; // never affects results

    void validate() const {
        if (sizes.empty()) throw ConfigError("no (n_b, n_w) sizes given");
        if (trials < 1) throw ConfigError("trials must be >= 1");
        for (const SizePoint& sp : sizes)
            if (sp.n_b < 1 || sp.n_w < 1) throw ConfigError("n_b and n_w must be >= 1");
        if (regime == Regime::Linear) {
            if (s_list.empty()) throw ConfigError("linear regime needs at least one s");
            for (double s : s_list)
                if (!(s > 0.0 && s < 1.0)) throw ConfigError("s values must lie in (0,1)");
        }
        if (policy.kind == StartPolicy::Kind::Fixed)
            for (const SizePoint& sp : sizes)
                if (!GraphSpec{sp.n_b, sp.n_w, 0}.contains(policy.vertex))
                    throw ConfigError("fixed start vertex outside graph");
    }
};

inline std::uint64_t trial_seed(std::uint64_t seed, const SizePoint& sp, std::size_t trial) {
    const std::uint64_t sizes_key = (std::uint64_t{sp.n_b} << 32) | sp.n_w;
    return derive_key(derive_key(seed, sizes_key), "trial", trial);
}

// Runs fn(trial) for trial in [0, trials) on `workers` threads. fn must only
// write to per-trial storage.
template <class Fn>
void for_each_trial(std::size_t trials, unsigned workers, Fn&& fn) {
    workers = std::max(1u, workers);
    if (workers == 1 || trials < 2) {
        for (std::size_t t = 0; t < trials; ++t) fn(t);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    const unsigned count = static_cast<unsigned>(std::min<std::size_t>(workers, trials));
    for (unsigned i = 0; i < count; ++i)
        pool.emplace_back([&] {
            for (std::size_t t; (t = next.fetch_add(1)) < trials;) {
                try {
                    fn(t);
                } catch (...) {
                    std::lock_guard lock(error_mu);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

inline unsigned workers_from_env(const char* var = "PRIMBIP_WORKERS") {
    const char* v = std::getenv(var);
    if (v == nullptr || *v == '\0') return 1;
    try {
        const long w = std::stol(v);
        return w < 1 ? 1u : static_cast<unsigned>(w);
    } catch (const std::exception&) {
        return 1;
    }
}

struct ResultRow {
    double theta = 0.0;
    std::size_t n = 0;
    std::string regime;
    double k_or_s = 0.0;
    SummaryStats stats;
};

// Per trial: rho^{(n)}_{kappa_n} after a Prim run stopped at kappa_n.
// Theory: 1 / (1 + gamma) at theta_hat = n_b / n.
inline std::vector<ResultRow> run_sublinear_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<ResultRow> rows;
    for (const SizePoint& sp : cfg.sizes) {
        const std::size_t kappa = cfg.kappa.evaluate(sp.n());
        std::vector<double> samples(cfg.trials);
        for_each_trial(cfg.trials, cfg.workers, [&](std::size_t t) {
            const GraphSpec spec{sp.n_b, sp.n_w, trial_seed(cfg.seed, sp, t)};
            const PrimTrace tr = run_prim(spec, WeightOracle::implicit(spec), cfg.policy, kappa);
            samples[t] = colour_ratio(tr, kappa);
        });
        rows.push_back({sp.theta_hat(), sp.n(), "sublinear", static_cast<double>(kappa),
                        summarize(samples, sublinear_limit(sp.theta_hat()))});
    }
    return rows;
}

// Per trial: one Prim run to floor(max(s) n), then rho at every floor(s n).
// Theory: rho(ell^{-1}(s)) at theta_hat.
inline std::vector<ResultRow> run_linear_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.regime != Regime::Linear && cfg.s_list.empty()) throw ConfigError("linear regime needs s values");
    std::vector<ResultRow> rows;
    for (const SizePoint& sp : cfg.sizes) {
        std::vector<std::size_t> ks;
        for (double s : cfg.s_list) {
            const auto k = static_cast<std::size_t>(std::floor(s * static_cast<double>(sp.n())));
            if (k < 1) throw ConfigError("floor(s n) < 1 for s=" + format_double(s));
            ks.push_back(k);
        }
        const std::size_t k_max = *std::max_element(ks.begin(), ks.end());
        std::vector<std::vector<double>> samples(ks.size(), std::vector<double>(cfg.trials));
        for_each_trial(cfg.trials, cfg.workers, [&](std::size_t t) {
            const GraphSpec spec{sp.n_b, sp.n_w, trial_seed(cfg.seed, sp, t)};
            const PrimTrace tr = run_prim(spec, WeightOracle::implicit(spec), cfg.policy, k_max);
            for (std::size_t i = 0; i < ks.size(); ++i) samples[i][t] = colour_ratio(tr, ks[i]);
        });
        for (std::size_t i = 0; i < ks.size(); ++i) {
            const double s = cfg.s_list[i];
            const double theory = ell_rho(sp.theta_hat(), ell_inverse(sp.theta_hat(), s)).rho;
            rows.push_back({sp.theta_hat(), sp.n(), "linear", s, summarize(samples[i], theory)});
        }
    }
    return rows;
}

inline std::string rows_to_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream os;
    os << "theta,n,regime,k_or_s,trials,mean,std,ci_low,ci_high,theory,abs_err\n";
    for (const auto& r : rows) {
        const auto& s = r.stats;
        os << format_double(r.theta) << ',' << r.n << ',' << r.regime << ',' << format_double(r.k_or_s) << ','
           << s.trials << ',' << format_double(s.mean) << ',' << format_double(s.std) << ','
           << format_double(s.ci_low) << ',' << format_double(s.ci_high) << ',' << format_double(s.theory) << ','
           << format_double(s.abs_err) << '\n';
    }
    return os.str();
}

inline std::string rows_to_json(const std::vector<ResultRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        const auto& s = r.stats;
        arr.push_back({{"theta", r.theta},   {"n", r.n},         {"regime", r.regime},   {"k_or_s", r.k_or_s},
                       {"trials", s.trials}, {"mean", s.mean},   {"std", s.std},         {"ci_low", s.ci_low},
                       {"ci_high", s.ci_high}, {"theory", s.theory}, {"abs_err", s.abs_err}});
    }
    return arr.dump(2) + "\n";
}

inline std::string render_rows(const std::vector<ResultRow>& rows, OutputFormat f) {
    return f == OutputFormat::Json ? rows_to_json(rows) : rows_to_csv(rows);
}

inline StartPolicy policy_from_json(const nlohmann::json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "all" || s == "uniform_all") return StartPolicy::uniform_all();
        if (s == "black" || s == "uniform_black") return StartPolicy::uniform_black();
        if (s == "white" || s == "uniform_white") return StartPolicy::uniform_white();
        throw ConfigError("unknown start policy: " + s);
    }
    if (j.is_object() && j.size() == 1) {
        const auto& [key, val] = *j.items().begin();
        if (!val.is_number_unsigned()) throw ConfigError("fixed start index must be a non-negative integer");
        const auto idx = val.get<std::uint32_t>();
        if (key == "black") return StartPolicy::fixed(VertexId::black(idx));
        if (key == "white") return StartPolicy::fixed(VertexId::white(idx));
    }
    throw ConfigError("start policy must be a name or {\"black\": i} / {\"white\": i}");
}

inline Regime regime_from_string(const std::string& s) {
    static const std::map<std::string, Regime> names{{"sublinear", Regime::Sublinear}, {"linear", Regime::Linear},
                                                     {"verify", Regime::Verify},       {"curve", Regime::Curve},
                                                     {"bp", Regime::BP}};
    const auto it = names.find(s);
    if (it == names.end()) throw ConfigError("unknown regime: " + s);
    return it->second;
}

// JSON mirror of ExperimentConfig:
// {"regime": "linear", "sizes": [{"nb": 14000, "nw": 6000} | {"n": 20000, "theta": 0.7}],
//  "kappa": "pow:2/3", "s": [0.2, 0.5], "trials": 100, "seed": 7,
//  "policy": "uniform_all", "out": "res.csv", "format": "csv"}
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    try {
        if (!j.is_object()) throw ConfigError("config must be a JSON object");
        if (j.contains("regime")) c.regime = regime_from_string(j.at("regime").get<std::string>());
        if (j.contains("sizes"))
            for (const auto& e : j.at("sizes")) {
                if (e.contains("nb") && e.contains("nw"))
                    c.sizes.push_back({e.at("nb").get<std::uint32_t>(), e.at("nw").get<std::uint32_t>()});
                else if (e.contains("n") && e.contains("theta"))
                    c.sizes.push_back(size_from_theta(e.at("n").get<std::size_t>(), e.at("theta").get<double>()));
                else
                    throw ConfigError("each size needs nb/nw or n/theta");
            }
        if (j.contains("kappa")) c.kappa = KappaRule::parse(j.at("kappa").get<std::string>());
        if (j.contains("s")) c.s_list = j.at("s").get<std::vector<double>>();
        if (j.contains("trials")) c.trials = j.at("trials").get<std::size_t>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("policy")) c.policy = policy_from_json(j.at("policy"));
        if (j.contains("out")) c.output = j.at("out").get<std::string>();
        if (j.contains("format")) {
            const auto f = j.at("format").get<std::string>();
            if (f == "csv") c.format = OutputFormat::Csv;
            else if (f == "json") c.format = OutputFormat::Json;
            else throw ConfigError("format must be csv or json");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

// ---------------------------------------------------------------------------
// Colour-swap duality

struct DualReport {
    bool ok = true;
    std::string detail;
};

// Runs Prim on the graph and on its colour-swapped copy (transposed weights,
// same first vertex) and compares sequences, edges and colour bookkeeping.
inline DualReport run_dual_check(const GraphSpec& spec, const WeightOracle& weights,
                                 const WeightOracle& swapped_weights, double p,
                                 StartPolicy policy = StartPolicy::uniform_all()) {
    const VertexId start = choose_start(spec, policy);
    const GraphSpec hat = spec.swapped();
    const VertexId hat_start{opposite(start.colour), start.index};
    const PrimTrace a = run_prim(spec, weights, StartPolicy::fixed(start));
    const PrimTrace b = run_prim(hat, swapped_weights, StartPolicy::fixed(hat_start));

    auto fail = [](std::string why) { return DualReport{false, std::move(why)}; };
    const std::size_t n = spec.n();
    for (std::size_t k = 1; k <= n; ++k) {
        const VertexId u = a.at_rank(k), v = b.at_rank(k);
        if (u.index != v.index || u.colour != opposite(v.colour))
            return fail("sigma differs at rank " + std::to_string(k));
    }
    for (std::size_t i = 1; i < n; ++i) {
        const EdgeId e = a.edges[i - 1].edge, f = b.edges[i - 1].edge;
        if (e.black != f.white || e.white != f.black || a.edges[i - 1].weight != b.edges[i - 1].weight)
            return fail("Prim edge e_" + std::to_string(i) + " differs");
    }
    // hat Sigma^w(k) = Sigma^b(k): count and membership follow from sigma; check counts.
    for (std::size_t k = 1; k <= n; ++k)
        if (k - b.black_prefix[k] != a.black_prefix[k]) return fail("|hat Sigma^w(k)| != |Sigma^b(k)| at k=" + std::to_string(k));
    // hat tau^w_k = tau^b_k.
    std::vector<std::uint32_t> hat_tau_w;
    for (std::size_t k = 1; k <= n; ++k)
        if (!b.at_rank(k).is_black()) hat_tau_w.push_back(static_cast<std::uint32_t>(k));
    if (hat_tau_w.size() != a.blacks_seen()) return fail("hat tau^w and tau^b have different lengths");
    for (std::size_t k = 1; k <= hat_tau_w.size(); ++k)
        if (hat_tau_w[k - 1] != a.tau_b[k]) return fail("hat tau^w_k != tau^b_k at k=" + std::to_string(k));
    if (intervals_from_prim(a, p).thresholds != intervals_from_prim(b, p).thresholds)
        return fail("percolation intervals differ");
    return {};
}

inline DualReport run_dual_check(const GraphSpec& spec, double p, StartPolicy policy = StartPolicy::uniform_all()) {
    const WeightOracle w = WeightOracle::implicit(spec);
    return run_dual_check(spec, w, w.transposed(), p, policy);
}

// ---------------------------------------------------------------------------
// O^w_1 ~ Bin(K^w_1, p)

struct BinomialStratum {
    std::uint64_t K = 0;
    std::size_t samples = 0;
    ChiSquareResult test;
    bool skipped = false;
    std::string note;
};

struct BinomialCheckReport {
    double p = 0.0;
    double significance = 0.001;
    std::vector<BinomialStratum> strata;
    bool pass = true;
};

// For independent graphs, explores the first black vertex in Prim order and
// records (K^w_1, O^w_1). Within each K^w_1 stratum, O^w_1 is chi-square
// tested against Bin(K^w_1, p).
inline BinomialCheckReport run_conditional_binomial_check(double theta, std::size_t n, double p, std::size_t trials,
                                                          std::uint64_t seed, double significance = 0.001,
                                                          unsigned workers = 1, std::size_t min_stratum = 100) {
    check_probability(p, "run_conditional_binomial_check");
    if (trials < 1) throw ConfigError("trials must be >= 1");
    const SizePoint sp = size_from_theta(n, theta);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> obs(trials); // (K^w_1, O^w_1)
    for_each_trial(trials, workers, [&](std::size_t t) {
        const GraphSpec spec{sp.n_b, sp.n_w, trial_seed(seed, sp, t)};
        const WeightOracle w = WeightOracle::implicit(spec);
        const PrimTrace tr = run_prim(spec, w, StartPolicy::uniform_all());
        const ExplorationTrace x = two_neighbourhood_exploration(percolate(spec, w, p), tr);
        obs[t] = {static_cast<std::uint64_t>(x.K_w[1]), static_cast<std::uint64_t>(x.O_w[1])};
    });
    std::map<std::uint64_t, std::vector<std::uint64_t>> by_k;
    for (const auto& [K, O] : obs) {
        auto& cells = by_k[K];
        if (cells.empty()) cells.assign(K + 1, 0);
        ++cells[O];
    }
    BinomialCheckReport rep;
    rep.p = p;
    rep.significance = significance;
    for (const auto& [K, cells] : by_k) {
        BinomialStratum st;
        st.K = K;
        for (auto c : cells) st.samples += c;
        if (st.samples < min_stratum) {
            st.skipped = true;
            st.note = "stratum too small";
        } else {
            st.test = binomial_chi_square(cells, K, p);
            if (st.test.degenerate) st.note = "degenerate";
            if (st.test.p_value < significance) rep.pass = false;
        }
        rep.strata.push_back(st);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Exact property sweeps

struct VerifyConfig {
    std::uint32_t max_nb = 8;
    std::uint32_t max_nw = 8;
    std::size_t seeds = 200;
    std::vector<double> p_values{0.1, 0.3, 0.7, 0.9};
    std::uint64_t seed = 0;
    bool inject_corruption = false;
    bool check_duality = true;

    void validate() const {
        if (max_nb < 1 || max_nw < 1 || seeds < 1 || p_values.empty()) throw ConfigError("empty verify sweep");
        for (double p : p_values)
            if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("verify p values must lie in [0,1]");
    }
};

struct VerifyCounts {
    std::size_t intervals = 0;  // interval components == union-find components
    std::size_t explore = 0;    // explore_in_order fixes the Prim order
    std::size_t geo = 0;        // both GEO checkers accept the Prim order
    std::size_t coupling = 0;   // sigma^b(k) == sigma(tau^b_k)
    std::size_t identities = 0; // counting identities
    std::size_t duality = 0;
};

struct VerifyReport {
    std::size_t cases = 0;
    VerifyCounts failures;
    std::vector<std::string> counterexamples;

    bool ok() const noexcept { return counterexamples.empty(); }
};

// Exchanges the vertices at ranks i and j and rebuilds the colour bookkeeping.
inline void swap_ranks(PrimTrace& t, std::size_t i, std::size_t j) {
    std::swap(t.sigma.at(i - 1), t.sigma.at(j - 1));
    t.black_prefix.assign(1, 0);
    t.tau_b.assign(1, 0);
    for (std::size_t k = 1; k <= t.sigma.size(); ++k) {
        const bool blk = t.sigma[k - 1].is_black();
        t.black_prefix.push_back(t.black_prefix.back() + (blk ? 1 : 0));
        if (blk) t.tau_b.push_back(static_cast<std::uint32_t>(k));
    }
}

struct CaseOutcome {
    bool intervals = true, explore = true, geo = true, coupling = true, identities = true, duality = true;
    std::string first_error;
};

inline CaseOutcome verify_case(const GraphSpec& spec, double p, bool corrupt, bool duality) {
    CaseOutcome out;
    const WeightOracle w = WeightOracle::implicit(spec);
    PrimTrace tr = run_prim(spec, w, StartPolicy::uniform_all());
    if (corrupt && tr.n() >= 3) swap_ranks(tr, 2, tr.n());
    auto note = [&](const std::string& what) {
        if (out.first_error.empty()) out.first_error = what;
    };

    out.intervals = verify_interval_representation(tr, p, spec, w);
    if (!out.intervals) note("interval components differ from union-find components");

    const PercolatedGraph pg = percolate(spec, w, p);
    const Ordering pi = prim_ordering(tr);
    out.explore = explore_in_order(pg.graph, pi) == pi;
    if (!out.explore) note("explore_in_order does not fix the Prim order");
    const bool geo_a = is_geo(pg.graph, pi);
    const bool geo_b = spec.n() <= 16 ? is_geo_by_definition(pg.graph, pi) : geo_a;
    out.geo = geo_a && geo_b;
    if (geo_a != geo_b) note("GEO checkers disagree");
    else if (!out.geo) note("Prim order is not a GEO");

    try {
        const ExplorationTrace x = two_neighbourhood_exploration(pg, tr);
        for (std::uint32_t k = 1; k <= spec.n_b; ++k)
            if (x.sigma_b[k] != spec.global(tr.at_rank(tr.tau_b[k]))) {
                out.coupling = false;
                note("sigma^b(" + std::to_string(k) + ") != sigma(tau^b_k)");
                break;
            }
        const IdentityReport ir = check_counting_identities(x);
        out.identities = ir.ok;
        if (!ir.ok) note(ir.violations.front());
    } catch (const std::exception& e) {
        out.coupling = out.identities = false;
        note(std::string("exploration failed: ") + e.what());
    }

    if (duality) {
        const DualReport dr = run_dual_check(spec, p);
        out.duality = dr.ok;
        if (!dr.ok) note("duality: " + dr.detail);
    }
    return out;
}

inline VerifyReport run_verify_sweep(const VerifyConfig& cfg, std::size_t max_counterexamples = 20) {
    cfg.validate();
    VerifyReport rep;
    for (std::uint32_t nb = 1; nb <= cfg.max_nb; ++nb)
        for (std::uint32_t nw = 1; nw <= cfg.max_nw; ++nw)
            for (std::size_t s = 0; s < cfg.seeds; ++s) {
                const GraphSpec spec{nb, nw, trial_seed(cfg.seed, {nb, nw}, s)};
                for (std::size_t pi = 0; pi < cfg.p_values.size(); ++pi) {
                    const double p = cfg.p_values[pi];
                    // Duality does not depend on p; check it once per graph.
                    const CaseOutcome c = verify_case(spec, p, cfg.inject_corruption, cfg.check_duality && pi == 0);
                    ++rep.cases;
                    rep.failures.intervals += !c.intervals;
                    rep.failures.explore += !c.explore;
                    rep.failures.geo += !c.geo;
                    rep.failures.coupling += !c.coupling;
                    rep.failures.identities += !c.identities;
                    rep.failures.duality += !c.duality;
                    if (!c.first_error.empty() && rep.counterexamples.size() < max_counterexamples) {
                        rep.counterexamples.push_back("n_b=" + std::to_string(nb) + " n_w=" + std::to_string(nw) +
                                                      " seed=" + std::to_string(spec.seed) +
                                                      " p=" + format_double(p) + ": " + c.first_error);
                    }
                }
            }
    return rep;
}

} // namespace primbip
