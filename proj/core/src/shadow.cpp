#include "shadowtree/shadow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shadowtree/errors.hpp"

namespace shadowtree {

namespace {

double g_at_exponent(const ModelParams& m, const DerivedConstants& dc, double c, double n) {
    const double d = m.d, p = m.p;
    if (dc.half) {
        const double beta = (c + d) / (1.0 - d);
        return (c * n + beta) / (-n + beta);
    }
    const double beta_p = (c + d) * (2.0 * p - 1.0) / ((1.0 - d) * (1.0 - p));
    const double e = -std::expm1(n * dc.log_x);
    return (c * e + beta_p) / (-e + beta_p);
}

struct Walker {
    const ShadowFunction& sf;
    double lam, c, lo_band, hi_band;

    explicit Walker(const ShadowFunction& f)
        : sf(f),
          lam(f.solution.params.lambda),
          c(f.solution.c),
          lo_band(1.0 / (1.0 + f.solution.c)),
          hi_band(1.0 / (1.0 + f.solution.c / f.solution.sbar)) {}

    void observe(ShadowCheckReport& rep, const Portfolio& prev, const Portfolio& next,
                 const PathState& after) const {
        const auto& mp = sf.solution.params;
        const double s = price(mp, after.j);
        const double st = shadow_price(after, sf);
        const double dphi = next.phi - prev.phi;
        const double sf_err = std::abs((next.phi0 - prev.phi0) + st * dphi) / prev.shadow_wealth;
        rep.max_self_financing = std::max(rep.max_self_financing, sf_err);
        if (dphi > 0.0) {
            ++rep.buys;
            if (std::abs(st - s) > 1e-12 * s) ++rep.boundary_violations;
        } else if (dphi < 0.0) {
            ++rep.sells;
            if (std::abs(st - (1.0 - lam) * s) > 1e-12 * s) ++rep.boundary_violations;
        }
        const double pi = next.phi * st / next.shadow_wealth;
        const double gz = sf.at(after.z_index());
        rep.max_pi_identity = std::max(rep.max_pi_identity, std::abs(pi - gz / (c + gz)));
        if (pi < lo_band - 1e-12 || pi > hi_band + 1e-12) ++rep.band_violations;
        rep.min_phi0 = std::min(rep.min_phi0, next.phi0);
        rep.min_phi = std::min(rep.min_phi, next.phi);
        rep.min_liquidation = std::min(rep.min_liquidation, next.liquidation_wealth);
        ++rep.steps;
    }

    void dfs(ShadowCheckReport& rep, const PathState& st, const Portfolio& pf, int remaining) const {
        if (remaining == 0) {
            ++rep.paths;
            return;
        }
        for (Move mv : {Move::Up, Move::Down}) {
            const PathState nx = step(st, mv, sf.k);
            const Portfolio np = portfolio_step(pf, st, nx, sf);
            observe(rep, pf, np, nx);
            dfs(rep, nx, np, remaining - 1);
        }
    }
};

ShadowCheckReport fresh_report(const Portfolio& pf) {
    ShadowCheckReport rep;
    rep.min_phi0 = pf.phi0;
    rep.min_phi = pf.phi;
    rep.min_liquidation = pf.liquidation_wealth;
    return rep;
}

}  // namespace

double g_formula(const ModelParams& params, double c, double s) {
    if (!(s > 0.0)) {
        throw Error(ErrorCode::DomainError, "g needs s > 0");
    }
    const auto dc = derived_constants(params.p, params.d);
    return g_at_exponent(params, dc, c, -std::log(s) / dc.log_d);
}

ShadowFunction make_shadow_function(const ShadowSolution& sol) {
    const double kr = std::round(sol.k);
    if (std::abs(sol.k - kr) > 1e-8 || kr < 1.0) {
        std::ostringstream os;
        os.precision(17);
        os << "k=" << sol.k << " is not a positive integer; calibrate first";
        throw Error(ErrorCode::DomainError, os.str());
    }
    ShadowFunction sf;
    sf.solution = sol;
    sf.k = static_cast<int>(kr);
    sf.values.resize(static_cast<std::size_t>(sf.k) + 3);
    for (int n = -1; n <= sf.k + 1; ++n) {
        sf.values[static_cast<std::size_t>(n + 1)] =
            g_at_exponent(sol.params, sol.derived, sol.c, static_cast<double>(n));
    }
    return sf;
}

double g_eval(const ShadowFunction& sf, double s) {
    const double log_u = -sf.solution.derived.log_d;
    if (!(s > 0.0)) {
        throw Error(ErrorCode::OffLattice, "s must be positive");
    }
    const double nr = std::round(std::log(s) / log_u);
    const double lattice = std::exp(nr * log_u);
    if (std::abs(s - lattice) > 1e-12 * s || nr < -1.0 || nr > sf.k + 1.0) {
        std::ostringstream os;
        os.precision(17);
        os << "s=" << s << " is not in {d, 1, u, ..., u^" << sf.k + 1 << "}";
        throw Error(ErrorCode::OffLattice, os.str());
    }
    return sf.at(static_cast<int>(nr));
}

double SmoothPasting::max_abs() const {
    return std::max({std::abs(g_d), std::abs(g_1), std::abs(g_sbar), std::abs(g_usbar)});
}

SmoothPasting smooth_pasting(const ShadowFunction& sf) {
    const auto& s = sf.solution;
    const double lam = s.params.lambda, d = s.params.d, u = s.params.u();
    const double sbar = std::exp(-sf.k * s.derived.log_d);
    return {sf.at(-1) - d, sf.at(0) - 1.0, sf.at(sf.k) - (1.0 - lam) * sbar,
            sf.at(sf.k + 1) - (1.0 - lam) * u * sbar};
}

OptimalityReport optimality_identity_check(const ShadowFunction& sf, double rhs_shift) {
    OptimalityReport rep;
    const double p = sf.solution.params.p;
    const double c_rhs = sf.solution.c + rhs_shift;
    for (int n = 0; n <= sf.k; ++n) {
        const double g = sf.at(n);
        const double ut = sf.at(n + 1) / g, dt = sf.at(n - 1) / g;
        const double lhs = (p * ut + (1.0 - p) * dt - 1.0) / ((ut - 1.0) * (1.0 - dt));
        const double dev = std::abs(lhs - g / (c_rhs + g));
        rep.deviations.push_back(dev);
        rep.max_deviation = std::max(rep.max_deviation, dev);
        if (n == 0) rep.endpoint_deviation = std::abs(lhs - 1.0 / (c_rhs + 1.0));
    }
    return rep;
}

PathState initial_state() { return PathState{}; }

PathState step(const PathState& state, Move move, int k) {
    PathState nx = state;
    nx.t += 1;
    nx.j += static_cast<int>(move);
    const int z = nx.j - nx.i;
    if (z > k) {
        nx.i += 1;
        if (nx.regime == Regime::Buy) {
            nx.regime = Regime::Sell;
            ++nx.n_sigma;
        }
    } else if (z < 0) {
        nx.i -= 1;
        if (nx.regime == Regime::Sell) {
            nx.regime = Regime::Buy;
            ++nx.n_rho;
        }
    }
    const int zn = nx.j - nx.i;
    nx.top_streak = zn == k ? state.top_streak + 1 : 0;
    nx.bottom_streak = zn == 0 ? state.bottom_streak + 1 : 0;
    return nx;
}

double price(const ModelParams& params, int index) {
    return params.s0 * std::exp(-index * std::log(params.d));
}

double shadow_price(const PathState& state, const ShadowFunction& sf) {
    return price(sf.solution.params, state.i) * sf.at(state.z_index());
}

namespace {

Portfolio with_wealth(Portfolio pf, const PathState& st, const ShadowFunction& sf) {
    const double s = price(sf.solution.params, st.j);
    const double lam = sf.solution.params.lambda;
    pf.shadow_wealth = pf.phi0 + pf.phi * shadow_price(st, sf);
    pf.liquidation_wealth = pf.phi0 + (pf.phi >= 0.0 ? (1.0 - lam) * pf.phi * s : pf.phi * s);
    return pf;
}

}  // namespace

Portfolio initial_portfolio(const ShadowFunction& sf, double x) {
    const double c = sf.solution.c;
    Portfolio pf;
    pf.phi0 = c * x / (c + 1.0);
    pf.phi = x / ((c + 1.0) * sf.solution.params.s0);
    return with_wealth(pf, initial_state(), sf);
}

Portfolio portfolio_step(const Portfolio& pf, const PathState& before, const PathState& after,
                         const ShadowFunction& sf) {
    const auto& s = sf.solution;
    const double c = s.c, d = s.params.d, lam = s.params.lambda;
    const double m = price(s.params, before.i);
    if (std::abs(pf.phi0 - c * m * pf.phi) > 1e-10 * std::abs(pf.phi0)) {
        throw Error(ErrorCode::BrokenInvariant, "phi0 != c m phi on entry");
    }
    Portfolio nx = pf;
    const int di = after.i - before.i;
    if (di < 0) {
        nx.phi0 *= (c + d) / (c + 1.0);
        nx.phi *= (c + d) / ((c + 1.0) * d);
    } else if (di > 0) {
        const double sb = (1.0 - lam) * s.sbar;
        const double f = (c * d + sb) / (c + sb);
        nx.phi *= f;
        nx.phi0 *= f / d;
    }
    return with_wealth(nx, after, sf);
}

void ShadowCheckReport::merge(const ShadowCheckReport& o) {
    paths += o.paths;
    steps += o.steps;
    buys += o.buys;
    sells += o.sells;
    boundary_violations += o.boundary_violations;
    band_violations += o.band_violations;
    max_self_financing = std::max(max_self_financing, o.max_self_financing);
    max_pi_identity = std::max(max_pi_identity, o.max_pi_identity);
    min_phi0 = std::min(min_phi0, o.min_phi0);
    min_phi = std::min(min_phi, o.min_phi);
    min_liquidation = std::min(min_liquidation, o.min_liquidation);
}

ShadowCheckReport shadow_conditions_check(const Path& path, const ShadowFunction& sf) {
    Walker w(sf);
    PathState st = initial_state();
    Portfolio pf = initial_portfolio(sf);
    ShadowCheckReport rep = fresh_report(pf);
    for (Move mv : path) {
        const PathState nx = step(st, mv, sf.k);
        const Portfolio np = portfolio_step(pf, st, nx, sf);
        w.observe(rep, pf, np, nx);
        st = nx;
        pf = np;
    }
    rep.paths = 1;
    return rep;
}

ShadowCheckReport exhaustive_check(const ShadowFunction& sf, int horizon) {
    if (horizon < 0 || horizon > 24) {
        throw Error(ErrorCode::IntractableSize, "exhaustive horizon must be in [0, 24]");
    }
    Walker w(sf);
    const Portfolio pf = initial_portfolio(sf);
    ShadowCheckReport rep = fresh_report(pf);
    w.dfs(rep, initial_state(), pf, horizon);
    return rep;
}

std::vector<ReplayRow> replay(const ShadowFunction& sf, const Path& path, double x) {
    std::vector<ReplayRow> rows;
    rows.reserve(path.size() + 1);
    const auto& mp = sf.solution.params;
    PathState st = initial_state();
    Portfolio pf = initial_portfolio(sf, x);
    auto emit = [&] {
        const double sti = shadow_price(st, sf);
        rows.push_back({st.t, price(mp, st.j), price(mp, st.i), st.regime, st.z_index(), sti,
                        pf.phi0, pf.phi, pf.phi * sti / pf.shadow_wealth, pf.liquidation_wealth,
                        pf.shadow_wealth});
    };
    emit();
    for (Move mv : path) {
        const PathState nx = step(st, mv, sf.k);
        pf = portfolio_step(pf, st, nx, sf);
        st = nx;
        emit();
    }
    return rows;
}

}  // namespace shadowtree
