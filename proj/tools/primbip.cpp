// primbip.cpp
//
// Command-line front end: simulate, curve, verify, bp, dual, explore, binom.
// Exit codes: 0 pass, 1 invariant or tolerance failure, 2 bad configuration.
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "primbip/exploration.hpp"
#include "primbip/harness.hpp"
#include "primbip/limits.hpp"

using namespace primbip;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kBadConfig = 2;

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot open output file " + path);
    os << text;
}

OutputFormat parse_format(const std::string& f) {
    if (f == "csv") return OutputFormat::Csv;
    if (f == "json") return OutputFormat::Json;
    throw ConfigError("format must be csv or json");
}

StartPolicy parse_policy(const std::string& s) {
    if (s == "all") return StartPolicy::uniform_all();
    if (s == "black") return StartPolicy::uniform_black();
    if (s == "white") return StartPolicy::uniform_white();
    const auto colon = s.find(':');
    if (colon != std::string::npos) {
        const std::string c = s.substr(0, colon);
        std::uint32_t idx = 0;
        try {
            idx = static_cast<std::uint32_t>(std::stoul(s.substr(colon + 1)));
        } catch (const std::exception&) {
            throw ConfigError("bad start vertex: " + s);
        }
        if (c == "b") return StartPolicy::fixed(VertexId::black(idx));
        if (c == "w") return StartPolicy::fixed(VertexId::white(idx));
    }
    throw ConfigError("start must be all, black, white, b:<i> or w:<i>");
}

// Graph size flags shared by several subcommands.
struct SizeFlags {
    std::vector<double> theta;
    std::vector<std::size_t> n;
    std::optional<std::uint32_t> nb, nw;

    void add(CLI::App* app) {
        app->add_option("--theta", theta, "black fraction(s); combined with --n");
        app->add_option("--n", n, "total vertex count(s)");
        app->add_option("--nb", nb, "black vertices (with --nw)");
        app->add_option("--nw", nw, "white vertices (with --nb)");
    }

    std::vector<SizePoint> resolve() const {
        std::vector<SizePoint> out;
        if (nb || nw) {
            if (!nb || !nw) throw ConfigError("--nb and --nw go together");
            if (!theta.empty() || !n.empty()) throw ConfigError("give either --nb/--nw or --theta/--n");
            if (*nb < 1 || *nw < 1) throw ConfigError("--nb and --nw must be >= 1");
            out.push_back({*nb, *nw});
            return out;
        }
        if (theta.empty() && n.empty()) return out;
        if (theta.empty() || n.empty()) throw ConfigError("--theta needs --n");
        for (double t : theta)
            for (std::size_t m : n) out.push_back(size_from_theta(m, t));
        return out;
    }
};

bool within_tol(const std::vector<ResultRow>& rows, std::optional<double> tol) {
    if (!tol) return true;
    bool ok = true;
    for (const auto& r : rows)
        if (!(r.stats.abs_err <= *tol)) {
            std::cerr << "tolerance exceeded: theta=" << format_double(r.theta) << " n=" << r.n
                      << " k_or_s=" << format_double(r.k_or_s) << " abs_err=" << format_double(r.stats.abs_err)
                      << " > " << format_double(*tol) << '\n';
            ok = false;
        }
    return ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Prim colour-ratio experiments on complete bipartite graphs"};
    app.require_subcommand(1);

    const unsigned workers = workers_from_env();
    std::uint64_t seed = 0;
    std::string out_path;
    std::string format = "csv";
    std::optional<double> tol;

    // simulate
    auto* sim = app.add_subcommand("simulate", "Monte Carlo colour ratio in the sublinear or linear regime");
    std::string regime;
    SizeFlags sim_sizes;
    std::string kappa = "pow:2/3";
    std::vector<double> s_list;
    std::size_t trials = 100;
    std::string config_path;
    std::string start = "all";
    sim->add_option("regime", regime, "sublinear | linear")->check(CLI::IsMember({"sublinear", "linear"}));
    sim_sizes.add(sim);
    sim->add_option("--kappa", kappa, "kappa rule: pow:a, sqrt, log:c or an integer");
    sim->add_option("--s", s_list, "linear-regime fractions s in (0,1)");
    sim->add_option("--trials", trials, "independent graphs per size");
    sim->add_option("--seed", seed, "master seed");
    sim->add_option("--start", start, "start vertex: all, black, white, b:<i>, w:<i>");
    sim->add_option("--config", config_path, "JSON config; command-line flags override it");
    sim->add_option("--out", out_path, "output file (default stdout)");
    sim->add_option("--format", format, "csv | json");
    sim->add_option("--tol", tol, "fail (exit 1) if any |mean - theory| exceeds this");

    // curve
    auto* curve = app.add_subcommand("curve", "Limit curve s -> rho(ell^{-1}(s))");
    double curve_theta = 0.5;
    std::size_t points = 512;
    curve->add_option("--theta", curve_theta, "black fraction")->required();
    curve->add_option("--points", points, "grid size");
    curve->add_option("--out", out_path, "output file (default stdout)");

    // verify
    auto* verify = app.add_subcommand("verify", "Exact property sweeps on small graphs");
    VerifyConfig vc;
    verify->add_option("--max-nb", vc.max_nb, "largest n_b");
    verify->add_option("--max-nw", vc.max_nw, "largest n_w");
    verify->add_option("--seeds", vc.seeds, "graphs per (n_b, n_w)");
    verify->add_option("--p", vc.p_values, "percolation parameters");
    verify->add_option("--seed", seed, "master seed");
    verify->add_flag("--corrupt", vc.inject_corruption, "swap two Prim ranks (self-test; must fail)");

    // bp
    auto* bp = app.add_subcommand("bp", "Two-type Poisson branching process extinction frequency");
    double bp_theta = 0.5, bp_lambda = 2.0;
    std::size_t generations = 200;
    std::size_t bp_trials = 100000;
    bp->add_option("--theta", bp_theta, "black fraction");
    bp->add_option("--lambda", bp_lambda, "offspring scale");
    bp->add_option("--generations", generations, "generation cap");
    bp->add_option("--trials", bp_trials, "independent processes");
    bp->add_option("--seed", seed, "master seed");
    bp->add_option("--tol", tol, "fail (exit 1) if |frequency - q1| exceeds this");

    // dual
    auto* dual = app.add_subcommand("dual", "Colour-swap duality of the Prim sequence");
    SizeFlags dual_sizes;
    double dual_p = 0.5;
    std::size_t dual_trials = 1;
    dual_sizes.add(dual);
    dual->add_option("--p", dual_p, "percolation parameter for the interval comparison");
    dual->add_option("--trials", dual_trials, "graphs to check");
    dual->add_option("--seed", seed, "master seed");

    // explore
    auto* explore = app.add_subcommand("explore", "Per-step 2-neighbourhood exploration quantities (CSV)");
    SizeFlags ex_sizes;
    double ex_p = -1.0;
    ex_sizes.add(explore);
    explore->add_option("--p", ex_p, "percolation parameter (default: 1/sqrt(n_b n_w))");
    explore->add_option("--seed", seed, "graph seed");
    explore->add_option("--out", out_path, "output file (default stdout)");

    // binom
    auto* binom = app.add_subcommand("binom", "Chi-square test of O^w_1 against Bin(K^w_1, p)");
    double bn_theta = 0.5, bn_p = -1.0, alpha = 0.001;
    std::size_t bn_n = 200, bn_trials = 2000;
    binom->add_option("--theta", bn_theta, "black fraction");
    binom->add_option("--n", bn_n, "total vertex count");
    binom->add_option("--p", bn_p, "percolation parameter (default: 1/sqrt(n_b n_w))");
    binom->add_option("--trials", bn_trials, "independent graphs");
    binom->add_option("--seed", seed, "master seed");
    binom->add_option("--alpha", alpha, "significance level");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kBadConfig;
    }

    try {
        if (*sim) {
            ExperimentConfig cfg;
            if (!config_path.empty()) {
                std::ifstream is(config_path);
                if (!is) throw ConfigError("cannot read config " + config_path);
                nlohmann::json j;
                try {
                    is >> j;
                } catch (const nlohmann::json::exception& e) {
                    throw ConfigError(std::string("config: ") + e.what());
                }
                cfg = config_from_json(j);
            }
            if (!regime.empty()) cfg.regime = regime_from_string(regime);
            else if (config_path.empty()) throw ConfigError("simulate needs a regime");
            if (cfg.regime != Regime::Sublinear && cfg.regime != Regime::Linear)
                throw ConfigError("simulate regime must be sublinear or linear");
            if (auto sizes = sim_sizes.resolve(); !sizes.empty()) cfg.sizes = sizes;
            if (sim->count("--kappa")) cfg.kappa = KappaRule::parse(kappa);
            if (sim->count("--s")) cfg.s_list = s_list;
            if (sim->count("--trials") || config_path.empty()) cfg.trials = trials;
            if (sim->count("--seed")) cfg.seed = seed;
            if (sim->count("--start")) cfg.policy = parse_policy(start);
            if (sim->count("--out")) cfg.output = out_path;
            if (sim->count("--format")) cfg.format = parse_format(format);
            cfg.workers = workers;
            cfg.validate();
            const auto rows = cfg.regime == Regime::Sublinear ? run_sublinear_experiment(cfg)
                                                               : run_linear_experiment(cfg);
            emit(render_rows(rows, cfg.format), cfg.output);
            return within_tol(rows, tol) ? kPass : kFail;
        }
        if (*curve) {
            if (points < 1) throw ConfigError("--points must be >= 1");
            if (!(curve_theta > 0.0 && curve_theta < 1.0)) throw ConfigError("--theta must lie in (0,1)");
            std::ostringstream os;
            write_curve_csv(os, linear_limit_curve(curve_theta, default_curve_grid(points)));
            emit(os.str(), out_path);
            return kPass;
        }
        if (*verify) {
            vc.seed = seed;
            const VerifyReport rep = run_verify_sweep(vc);
            const auto& f = rep.failures;
            std::cout << "cases=" << rep.cases << " interval_failures=" << f.intervals
                      << " explore_failures=" << f.explore << " geo_failures=" << f.geo
                      << " coupling_failures=" << f.coupling << " identity_failures=" << f.identities
                      << " duality_failures=" << f.duality << '\n';
            for (const auto& c : rep.counterexamples) std::cout << "counterexample: " << c << '\n';
            return rep.ok() ? kPass : kFail;
        }
        if (*bp) {
            if (bp_trials < 1) throw ConfigError("--trials must be >= 1");
            if (!(bp_lambda > 0.0)) throw ConfigError("--lambda must be positive");
            (void)ThetaParams::from(bp_theta);
            const BranchingSimResult r = simulate_two_type_bp(bp_theta, bp_lambda, generations, bp_trials, seed);
            const double q1 = extinction_probabilities(bp_theta, bp_lambda).q1;
            const double err = std::abs(r.frequency - q1);
            std::cout << "theta,lambda,trials,generations,extinct,frequency,q1,abs_err\n"
                      << format_double(bp_theta) << ',' << format_double(bp_lambda) << ',' << r.trials << ','
                      << generations << ',' << r.extinct << ',' << format_double(r.frequency) << ','
                      << format_double(q1) << ',' << format_double(err) << '\n';
            return (!tol || err <= *tol) ? kPass : kFail;
        }
        if (*dual) {
            auto sizes = dual_sizes.resolve();
            if (sizes.empty()) throw ConfigError("dual needs --nb/--nw or --theta/--n");
            if (!(dual_p >= 0.0 && dual_p <= 1.0)) throw ConfigError("--p must lie in [0,1]");
            std::size_t failures = 0;
            for (const SizePoint& sp : sizes)
                for (std::size_t t = 0; t < dual_trials; ++t) {
                    const GraphSpec spec{sp.n_b, sp.n_w, trial_seed(seed, sp, t)};
                    const DualReport r = run_dual_check(spec, dual_p);
                    if (!r.ok) {
                        ++failures;
                        std::cout << "n_b=" << sp.n_b << " n_w=" << sp.n_w << " trial=" << t << ": " << r.detail
                                  << '\n';
                    }
                }
            std::cout << "dual checks=" << sizes.size() * dual_trials << " failures=" << failures << '\n';
            return failures == 0 ? kPass : kFail;
        }
        if (*explore) {
            auto sizes = ex_sizes.resolve();
            if (sizes.size() != 1) throw ConfigError("explore needs exactly one graph size");
            const GraphSpec spec{sizes[0].n_b, sizes[0].n_w, seed};
            const double p = ex_p < 0.0 ? critical_p(spec) : ex_p;
            if (p > 1.0) throw ConfigError("--p must lie in [0,1]");
            const WeightOracle w = WeightOracle::implicit(spec);
            const PrimTrace tr = run_prim(spec, w, StartPolicy::uniform_all());
            const ExplorationTrace x = two_neighbourhood_exploration(percolate(spec, w, p), tr);
            std::ostringstream os;
            write_exploration_csv(os, x);
            emit(os.str(), out_path);
            const IdentityReport ir = check_counting_identities(x);
            for (const auto& v : ir.violations) std::cerr << "identity violated: " << v << '\n';
            return ir.ok ? kPass : kFail;
        }
        if (*binom) {
            const SizePoint sp = size_from_theta(bn_n, bn_theta);
            const double p = bn_p < 0.0 ? critical_p({sp.n_b, sp.n_w, 0}) : bn_p;
            const BinomialCheckReport r = run_conditional_binomial_check(bn_theta, bn_n, p, bn_trials, seed, alpha,
                                                                         workers);
            std::cout << "K_w1,samples,statistic,dof,p_value,note\n";
            for (const auto& s : r.strata)
                std::cout << s.K << ',' << s.samples << ',' << format_double(s.test.statistic) << ',' << s.test.dof
                          << ',' << format_double(s.test.p_value) << ',' << s.note << '\n';
            return r.pass ? kPass : kFail;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kBadConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kBadConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFail;
    }
    return kBadConfig;
}
