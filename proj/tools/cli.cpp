#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "config.hpp"
#include "json_out.hpp"
#include "shadowtree/asymptotics.hpp"
#include "shadowtree/errors.hpp"
#include "shadowtree/markov.hpp"
#include "shadowtree/oracle.hpp"
#include "shadowtree/shadow.hpp"
#include "shadowtree/solver.hpp"

namespace shadowtree::cli {

namespace {

using ojson = nlohmann::ordered_json;

const char* kReplayColumns = "t,S,m,regime,Z_index,S_tilde,phi0,phi,pi_tilde,V_liq,V_shadow";
const char* kBsColumns = "quantity,exact,expansion,abs_err";

struct Opts {
    std::string config;
    std::optional<double> d, p, lambda, s0, u, mu, sigma, delta;
    std::optional<double> k;
    std::optional<double> order, horizon, grid, range_lo, range_hi, seed, mc_steps, paths, steps;
    std::string path;
    ConfigValues file;

    double need(const std::optional<double>& flag, const std::string& key) const {
        if (flag) return *flag;
        if (auto v = file.number(key)) return *v;
        throw UsageError("missing required parameter '" + key + "' (flag or config)");
    }
    double get(const std::optional<double>& flag, const std::string& key, double fallback) const {
        if (flag) return *flag;
        if (auto v = file.number(key)) return *v;
        return fallback;
    }
    bool has(const std::optional<double>& flag, const std::string& key) const {
        return flag.has_value() || file.number(key).has_value();
    }
};

void add_config(CLI::App* sc, Opts& o) {
    sc->add_option("--config", o.config, "TOML or JSON config file; flags override its values");
}

void add_model(CLI::App* sc, Opts& o) {
    add_config(sc, o);
    sc->add_option("--d", o.d, "down factor, 0 < d < 1 (u = 1/d)");
    sc->add_option("--u", o.u, "up factor; must equal 1/d");
    sc->add_option("--p", o.p, "up probability");
    sc->add_option("--lambda", o.lambda, "proportional transaction cost");
    sc->add_option("--s0", o.s0, "initial price");
}

void add_k(CLI::App* sc, Opts& o) {
    sc->add_option("--k", o.k, "calibrate lambda so that the sell boundary is u^k");
}

void load(Opts& o) {
    if (!o.config.empty()) o.file = load_config(o.config);
}

void reject_mixed(const Opts& o) {
    const bool bs = o.has(o.mu, "mu") || o.has(o.sigma, "sigma") || o.has(o.delta, "delta");
    const bool bin = o.has(o.d, "d") || o.has(o.p, "p") || o.has(o.u, "u");
    if (bs && bin) throw UsageError("give either (d, p) or (mu, sigma, delta), not both");
}

ModelParams model_from(const Opts& o, bool need_lambda) {
    reject_mixed(o);
    MarketInput in;
    in.d = o.need(o.d, "d");
    in.u = o.get(o.u, "u", 1.0 / in.d);
    in.p = o.need(o.p, "p");
    in.lambda = need_lambda ? o.need(o.lambda, "lambda") : o.get(o.lambda, "lambda", 0.0);
    in.s0 = o.get(o.s0, "s0", 1.0);
    return validate(in).params;
}

int k_int(double k) {
    const double r = std::round(k);
    if (std::abs(k - r) > 1e-9 || r < 1.0) throw UsageError("--k must be a positive integer");
    return static_cast<int>(r);
}

// Solution with integer k: calibrates when k is given, otherwise solves and insists on integer k.
ShadowFunction shadow_from(const Opts& o) {
    if (o.has(o.k, "k")) {
        const ModelParams base = model_from(o, false);
        const auto cal = calibrate_integer_k(base.p, base.d, k_int(o.need(o.k, "k")), base.s0);
        return make_shadow_function(solve_c(cal.params));
    }
    return make_shadow_function(solve_c(model_from(o, true)));
}

void put_model(ojson& j, const ModelParams& m) {
    j["d"] = m.d;
    j["p"] = m.p;
    j["lambda"] = m.lambda;
    j["s0"] = m.s0;
}

std::uint64_t count(double v, const char* what) {
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) {
        throw UsageError(std::string(what) + " must be a non-negative integer");
    }
    return static_cast<std::uint64_t>(v);
}

int cmd_solve(const Opts& o, std::ostream& out) {
    const auto sol = solve_c(model_from(o, true));
    ojson j;
    put_model(j, sol.params);
    j["c"] = sol.c;
    j["k"] = sol.k;
    j["sbar"] = sol.sbar;
    j["residual"] = sol.residual;
    out << dump17(j) << "\n";
    return kExitOk;
}

int cmd_calibrate(const Opts& o, std::ostream& out) {
    const ModelParams base = model_from(o, false);
    const int k = k_int(o.need(o.k, "k"));
    const auto cal = calibrate_integer_k(base.p, base.d, k, base.s0);
    ojson j;
    put_model(j, cal.params);
    j["k"] = k;
    j["c"] = cal.c;
    out << dump17(j) << "\n";
    return kExitOk;
}

int cmd_replay(const Opts& o, std::ostream& out) {
    std::string text = o.path;
    if (text.empty()) {
        if (auto v = o.file.string("path")) text = *v;
    }
    const Path path = parse_path(text);
    const auto sf = shadow_from(o);
    out << kReplayColumns << "\n";
    for (const auto& r : replay(sf, path)) {
        out << r.t << ',' << fmt17(r.s) << ',' << fmt17(r.m) << ','
            << (r.regime == Regime::Buy ? "BUY" : "SELL") << ',' << r.z_index << ','
            << fmt17(r.s_tilde) << ',' << fmt17(r.phi0) << ',' << fmt17(r.phi) << ','
            << fmt17(r.pi_tilde) << ',' << fmt17(r.v_liq) << ',' << fmt17(r.v_shadow) << "\n";
    }
    return kExitOk;
}

int cmd_growth(const Opts& o, std::ostream& out) {
    const auto sf = shadow_from(o);
    const std::uint64_t mc = count(o.get(o.mc_steps, "mc_steps", 1e6), "--mc-steps");
    const std::uint64_t paths = std::max<std::uint64_t>(1, count(o.get(o.paths, "paths", 64), "--paths"));
    const std::uint64_t seed = count(o.get(o.seed, "seed", 1), "--seed");
    ojson j;
    put_model(j, sf.solution.params);
    j["k"] = sf.k;
    j["c"] = sf.solution.c;
    j["R_closed"] = growth_rate_closed_form(sf.solution);
    j["R_stationary"] = growth_rate_stationary(sf);
    if (mc > 0) {
        const std::uint64_t per = (mc + paths - 1) / paths;
        const auto st = simulate(sf, per, paths, seed);
        j["R_mc"] = st.mean_growth;
        j["mc_stderr"] = st.stderr_growth;
        j["mc_steps"] = per * paths;
    } else {
        j["R_mc"] = nullptr;
        j["mc_stderr"] = nullptr;
        j["mc_steps"] = 0;
    }
    j["paths"] = paths;
    j["seed"] = seed;
    out << dump17(j) << "\n";
    return kExitOk;
}

int cmd_expand(const Opts& o, std::ostream& out) {
    const ModelParams m = model_from(o, false);
    const double ord = o.get(o.order, "order", 2);
    if (ord != std::floor(ord) || ord < 1 || ord > 5) throw UsageError("--order must be in 1..5");
    const int order = static_cast<int>(ord);
    const auto lt = lambda_taylor(m, order);
    const auto cs = c_series(m, order);
    const auto nt = ntr_expansion(m);
    const auto ge = growth_expansion(m);
    const auto dc = derived_constants(m.p, m.d);
    ojson j;
    put_model(j, m);
    j["order"] = order;
    j["cbar"] = dc.cbar;
    j["eta"] = dc.eta;
    j["merton_pi"] = dc.merton_pi;
    j["lambda_coeffs"] = lt.coeffs;
    j["c_coeffs"] = cs.coeffs;
    j["precision_warning"] = lt.precision_warning || cs.precision_warning;
    j["theta0"] = nt.theta0;
    j["theta_lower1"] = nt.lower1;
    j["theta_upper1"] = nt.upper1;
    j["width1"] = nt.width1;
    j["R0"] = ge.r0;
    j["R1"] = ge.r1;
    out << dump17(j) << "\n";
    return kExitOk;
}

int cmd_bs_limit(const Opts& o, std::ostream& out) {
    if (o.has(o.d, "d") || o.has(o.p, "p")) throw UsageError("bs-limit takes mu, sigma, delta, lambda");
    BSLimitParams b{o.need(o.mu, "mu"), o.need(o.sigma, "sigma"), o.need(o.delta, "delta")};
    const double lam = o.need(o.lambda, "lambda");
    out << kBsColumns << "\n";
    for (const auto& r : bs_limit_comparison(b, lam)) {
        out << r.quantity << ',' << fmt17(r.exact) << ',' << fmt17(r.expansion) << ','
            << fmt17(r.abs_err) << "\n";
    }
    return kExitOk;
}

int cmd_verify(const Opts& o, std::ostream& out) {
    const auto sf = shadow_from(o);
    DPConfig cfg;
    cfg.horizon = static_cast<int>(count(o.get(o.horizon, "horizon", 8), "--horizon"));
    cfg.fraction_grid = static_cast<int>(count(o.get(o.grid, "grid", 2001), "--grid"));
    cfg.range_lo = o.get(o.range_lo, "range_lo", 0.0);
    cfg.range_hi = o.get(o.range_hi, "range_hi", 1.0);
    const auto rep = sandwich_check(sf, cfg);
    ojson j;
    put_model(j, sf.solution.params);
    j["k"] = sf.k;
    j["c"] = sf.solution.c;
    j["horizon"] = cfg.horizon;
    j["grid"] = cfg.fraction_grid;
    j["dp_sup"] = rep.dp_sup;
    j["shadow_value"] = rep.shadow_value;
    j["shadow_modified"] = rep.shadow_modified;
    j["lower_gap"] = rep.log_one_minus_lambda;
    j["lower_gap_y"] = rep.e_log_one_minus_lambda_y;
    j["grid_slack"] = rep.grid_slack;
    j["passes"] = {{"shadow_le_dp", rep.lower_ok},
                   {"dp_le_shadow_minus_log1mlambda", rep.upper_ok},
                   {"dp_le_shadow_minus_elog1mlambdaY", rep.upper_y_ok},
                   {"shadow_le_modified", rep.modified_ok}};
    j["pass"] = rep.pass;
    out << dump17(j) << "\n";
    return rep.pass ? kExitOk : kExitVerify;
}

int cmd_simulate(const Opts& o, std::ostream& out) {
    const auto sf = shadow_from(o);
    const std::uint64_t steps = count(o.get(o.steps, "steps", 10000), "--steps");
    const std::uint64_t paths = count(o.get(o.paths, "paths", 16), "--paths");
    const std::uint64_t seed = count(o.get(o.seed, "seed", 1), "--seed");
    const auto st = simulate(sf, steps, paths, seed);
    ojson j;
    put_model(j, sf.solution.params);
    j["k"] = sf.k;
    j["steps"] = steps;
    j["paths"] = paths;
    j["seed"] = seed;
    j["mean_log_growth"] = st.mean_growth;
    j["stderr"] = st.stderr_growth;
    j["mean_log_growth_liquidation"] = st.mean_growth_liq;
    j["buys"] = st.buys;
    j["sells"] = st.sells;
    j["occupancy"] = st.occupancy;
    out << dump17(j) << "\n";
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"shadowtree: log-optimal trading with proportional costs on a binomial tree"};
    app.require_subcommand(1, 1);
    Opts o;

    auto* solve = app.add_subcommand("solve", "solve F(c) = lambda; prints {c, k, sbar, residual}");
    add_model(solve, o);

    auto* calibrate = app.add_subcommand("calibrate", "choose lambda so k is an integer; prints {c, lambda}");
    add_model(calibrate, o);
    add_k(calibrate, o);

    auto* rep = app.add_subcommand(
        "replay", std::string("replay the strategy along a path; CSV columns: ") + kReplayColumns);
    add_model(rep, o);
    add_k(rep, o);
    rep->add_option("--path", o.path, "moves as a string of U and D");

    auto* growth = app.add_subcommand("growth", "growth rate: closed form, stationary, Monte Carlo");
    add_model(growth, o);
    add_k(growth, o);
    growth->add_option("--mc-steps", o.mc_steps, "total Monte Carlo steps (0 disables), default 1e6");
    growth->add_option("--paths", o.paths, "independent paths for Monte Carlo, default 64");
    growth->add_option("--seed", o.seed, "Philox seed, default 1");

    auto* expand = app.add_subcommand("expand", "small-cost expansion coefficients as JSON");
    add_model(expand, o);
    expand->add_option("--order", o.order, "number of Taylor/inverse coefficients, 1..5");

    auto* bs = app.add_subcommand(
        "bs-limit", std::string("Black-Scholes limit comparison; CSV columns: ") + kBsColumns);
    add_config(bs, o);
    bs->add_option("--mu", o.mu, "drift");
    bs->add_option("--sigma", o.sigma, "volatility");
    bs->add_option("--delta", o.delta, "period length");
    bs->add_option("--lambda", o.lambda, "proportional transaction cost");

    auto* verify = app.add_subcommand("verify", "DP sandwich check; JSON with a top-level pass flag");
    add_model(verify, o);
    add_k(verify, o);
    verify->add_option("--horizon", o.horizon, "periods T (<= 12), default 8");
    verify->add_option("--grid", o.grid, "fraction grid points, default 2001");
    verify->add_option("--range-lo", o.range_lo, "fraction grid lower end, default 0");
    verify->add_option("--range-hi", o.range_hi, "fraction grid upper end, default 1");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo replay of the strategy; JSON statistics");
    add_model(sim, o);
    add_k(sim, o);
    sim->add_option("--steps", o.steps, "steps per path, default 10000");
    sim->add_option("--paths", o.paths, "number of paths, default 16");
    sim->add_option("--seed", o.seed, "Philox seed, default 1");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        err << app.help();
        return kExitUsage;
    }

    try {
        load(o);
        if (solve->parsed()) return cmd_solve(o, out);
        if (calibrate->parsed()) return cmd_calibrate(o, out);
        if (rep->parsed()) return cmd_replay(o, out);
        if (growth->parsed()) return cmd_growth(o, out);
        if (expand->parsed()) return cmd_expand(o, out);
        if (bs->parsed()) return cmd_bs_limit(o, out);
        if (verify->parsed()) return cmd_verify(o, out);
        if (sim->parsed()) return cmd_simulate(o, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    err << app.help();
    return kExitUsage;
}

}  // namespace shadowtree::cli
