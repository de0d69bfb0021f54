#include "shadowtree/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shadowtree/errors.hpp"
#include "shadowtree/parallel.hpp"
#include "shadowtree/philox.hpp"

namespace shadowtree {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Cubic Lagrange interpolation on a uniform grid, linear near the ends or next to -inf.
double interp(const std::vector<double>& f, double lo, double h, double x) {
    const auto n = static_cast<long>(f.size());
    double pos = (x - lo) / h;
    pos = std::clamp(pos, 0.0, static_cast<double>(n - 1));
    long i = static_cast<long>(std::floor(pos));
    if (i >= n - 1) i = n - 2;
    const double s = pos - static_cast<double>(i);
    const auto at = [&](long j) { return f[static_cast<std::size_t>(j)]; };
    if (i >= 1 && i + 2 <= n - 1) {
        const double a = at(i - 1), b = at(i), c = at(i + 1), d = at(i + 2);
        if (std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d)) {
            return -s * (s - 1.0) * (s - 2.0) / 6.0 * a + (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0 * b -
                   (s + 1.0) * s * (s - 2.0) / 2.0 * c + (s + 1.0) * s * (s - 1.0) / 6.0 * d;
        }
    }
    const double b = at(i), c = at(i + 1);
    if (!std::isfinite(b) || !std::isfinite(c)) return s < 0.5 ? b : c;
    return (1.0 - s) * b + s * c;
}

struct Accum {
    double log_v = 0.0, log_vt = 0.0, log_y = 0.0;
    double y_min = std::numeric_limits<double>::infinity();
    double y_max = -std::numeric_limits<double>::infinity();
    double min_liq = std::numeric_limits<double>::infinity();
};

void leaf(Accum& acc, double prob, const PathState& st, const Portfolio& pf, const ShadowFunction& sf) {
    const double s = price(sf.solution.params, st.j);
    const double lam = sf.solution.params.lambda;
    const double y = pf.phi * s / (pf.phi0 + pf.phi * s);
    acc.log_v += prob * std::log(pf.liquidation_wealth);
    acc.log_vt += prob * std::log(pf.shadow_wealth);
    acc.log_y += prob * std::log1p(-lam * y);
    acc.y_min = std::min(acc.y_min, y);
    acc.y_max = std::max(acc.y_max, y);
    acc.min_liq = std::min(acc.min_liq, pf.liquidation_wealth);
}

void walk(Accum& acc, double prob, const PathState& st, const Portfolio& pf, const ShadowFunction& sf,
          int remaining) {
    if (remaining == 0) {
        leaf(acc, prob, st, pf, sf);
        return;
    }
    const double p = sf.solution.params.p;
    for (Move mv : {Move::Up, Move::Down}) {
        const PathState nx = step(st, mv, sf.k);
        walk(acc, prob * (mv == Move::Up ? p : 1.0 - p), nx, portfolio_step(pf, st, nx, sf), sf,
             remaining - 1);
    }
}

}  // namespace

void validate_dp(const DPConfig& cfg) {
    if (cfg.fraction_grid < 3) {
        throw Error(ErrorCode::InvalidArgument, "fraction grid needs at least 3 points");
    }
    if (!(cfg.range_lo > -1.0) || !(cfg.range_hi < 2.0) || !(cfg.range_lo < cfg.range_hi)) {
        throw Error(ErrorCode::InvalidArgument, "fraction range must be a subinterval of (-1, 2)");
    }
    if (cfg.horizon < 0 || cfg.horizon > 12) {
        throw Error(ErrorCode::IntractableSize, "DP horizon must be in [0, 12]");
    }
}

DPResult dp_true(const ModelParams& params, const DPConfig& cfg) {
    validate(params);
    validate_dp(cfg);
    const int n = cfg.fraction_grid;
    const double lo = cfg.range_lo, h = (cfg.range_hi - cfg.range_lo) / (n - 1);
    const double p = params.p, u = params.u(), d = params.d, lam = params.lambda;
    DPResult res;
    res.grid.resize(static_cast<std::size_t>(n));
    for (int g = 0; g < n; ++g) res.grid[static_cast<std::size_t>(g)] = lo + g * h;
    const auto& x = res.grid;

    std::vector<double> J(static_cast<std::size_t>(n)), C(J.size()), sell_score(J.size());
    for (std::size_t g = 0; g < J.size(); ++g) J[g] = std::log1p(-lam * std::max(x[g], 0.0));
    res.policy.assign(static_cast<std::size_t>(cfg.horizon), std::vector<int>(J.size()));

    for (int t = cfg.horizon - 1; t >= 0; --t) {
        for (std::size_t g = 0; g < J.size(); ++g) {
            const double pi = x[g];
            const double wu = 1.0 - pi + pi * u, wd = 1.0 - pi + pi * d;
            if (!(wu > 0.0) || !(wd > 0.0)) {
                C[g] = kNegInf;
                continue;
            }
            C[g] = p * (std::log(wu) + interp(J, lo, h, pi * u / wu)) +
                   (1.0 - p) * (std::log(wd) + interp(J, lo, h, pi * d / wd));
            sell_score[g] = C[g] - std::log1p(-lam * x[g]);
        }
        // buy: best post-trade index >= g; sell: best post-trade index <= g
        std::vector<int> best_up(J.size()), best_down(J.size());
        best_up.back() = n - 1;
        for (int g = n - 2; g >= 0; --g) {
            const int prev = best_up[static_cast<std::size_t>(g + 1)];
            best_up[static_cast<std::size_t>(g)] = C[static_cast<std::size_t>(g)] >= C[static_cast<std::size_t>(prev)] ? g : prev;
        }
        best_down[0] = 0;
        for (int g = 1; g < n; ++g) {
            const int prev = best_down[static_cast<std::size_t>(g - 1)];
            best_down[static_cast<std::size_t>(g)] =
                sell_score[static_cast<std::size_t>(g)] > sell_score[static_cast<std::size_t>(prev)] ? g : prev;
        }
        auto& pol = res.policy[static_cast<std::size_t>(t)];
        for (std::size_t g = 0; g < J.size(); ++g) {
            const int bu = best_up[g], bd = best_down[g];
            const double buy = C[static_cast<std::size_t>(bu)];
            const double sell = std::log1p(-lam * x[g]) + sell_score[static_cast<std::size_t>(bd)];
            if (buy >= sell) {
                J[g] = buy;
                pol[g] = bu;
            } else {
                J[g] = sell;
                pol[g] = bd;
            }
        }
    }
    res.value = interp(J, lo, h, 0.0);
    return res;
}

double dp_shadow_market(const ShadowFunction& sf, const DPConfig& cfg) {
    validate_dp(cfg);
    const double p = sf.solution.params.p;
    const int n = cfg.fraction_grid;
    const double h = (cfg.range_hi - cfg.range_lo) / (n - 1);
    std::vector<double> J(static_cast<std::size_t>(sf.k) + 1, 0.0), next(J.size());
    const auto up = [&](int z) { return std::min(z + 1, sf.k); };
    const auto down = [&](int z) { return std::max(z - 1, 0); };
    for (int t = cfg.horizon - 1; t >= 0; --t) {
        for (int z = 0; z <= sf.k; ++z) {
            const double g = sf.at(z);
            const double ut = sf.at(z + 1) / g, dt = sf.at(z - 1) / g;
            double best = kNegInf;
            for (int i = 0; i < n; ++i) {
                const double pi = cfg.range_lo + i * h;
                const double wu = 1.0 + pi * (ut - 1.0), wd = 1.0 + pi * (dt - 1.0);
                if (!(wu > 0.0) || !(wd > 0.0)) continue;
                best = std::max(best, p * std::log(wu) + (1.0 - p) * std::log(wd));
            }
            next[static_cast<std::size_t>(z)] =
                best + p * J[static_cast<std::size_t>(up(z))] + (1.0 - p) * J[static_cast<std::size_t>(down(z))];
        }
        J.swap(next);
    }
    return J[0];
}

ShadowValue shadow_strategy_value(const ShadowFunction& sf, int horizon) {
    if (horizon < 0 || horizon > 16) {
        throw Error(ErrorCode::IntractableSize, "exhaustive horizon must be in [0, 16]");
    }
    const double p = sf.solution.params.p;
    const int depth = std::min(horizon, 8);
    const std::size_t blocks = std::size_t{1} << depth;
    std::vector<Accum> parts(blocks);
    parallel_for(blocks, worker_count(), [&](std::size_t b) {
        PathState st = initial_state();
        Portfolio pf = initial_portfolio(sf);
        double prob = 1.0;
        for (int lvl = depth - 1; lvl >= 0; --lvl) {
            const Move mv = (b >> lvl) & 1u ? Move::Down : Move::Up;
            const PathState nx = step(st, mv, sf.k);
            pf = portfolio_step(pf, st, nx, sf);
            st = nx;
            prob *= mv == Move::Up ? p : 1.0 - p;
        }
        walk(parts[b], prob, st, pf, sf, horizon - depth);
    });
    std::vector<double> a(blocks), b(blocks), c(blocks);
    ShadowValue out;
    out.y_min = std::numeric_limits<double>::infinity();
    out.y_max = -out.y_min;
    out.min_liquidation = out.y_min;
    for (std::size_t i = 0; i < blocks; ++i) {
        a[i] = parts[i].log_v;
        b[i] = parts[i].log_vt;
        c[i] = parts[i].log_y;
        out.y_min = std::min(out.y_min, parts[i].y_min);
        out.y_max = std::max(out.y_max, parts[i].y_max);
        out.min_liquidation = std::min(out.min_liquidation, parts[i].min_liq);
    }
    out.e_log_v = pairwise_sum(a);
    out.e_log_vtilde = pairwise_sum(b);
    out.e_log_one_minus_lambda_y = pairwise_sum(c);
    return out;
}

SandwichReport sandwich_check(const ShadowFunction& sf, const DPConfig& cfg) {
    SandwichReport rep;
    const auto dp = dp_true(sf.solution.params, cfg);
    const auto sv = shadow_strategy_value(sf, cfg.horizon);
    rep.dp_sup = dp.value;
    rep.shadow_value = sv.e_log_v;
    rep.shadow_modified = sv.e_log_vtilde;
    rep.log_one_minus_lambda = std::log1p(-sf.solution.params.lambda);
    rep.e_log_one_minus_lambda_y = sv.e_log_one_minus_lambda_y;
    rep.lower_ok = rep.shadow_value <= rep.dp_sup;
    rep.upper_ok = rep.dp_sup <= rep.shadow_value - rep.log_one_minus_lambda + rep.grid_slack;
    rep.upper_y_ok = rep.dp_sup <= rep.shadow_value - rep.e_log_one_minus_lambda_y + rep.grid_slack;
    rep.modified_ok = rep.shadow_value <= rep.shadow_modified;
    rep.pass = rep.lower_ok && rep.upper_ok && rep.upper_y_ok && rep.modified_ok;
    return rep;
}

SimStats simulate(const ShadowFunction& sf, std::uint64_t steps_per_path, std::uint64_t n_paths,
                  std::uint64_t seed, int workers) {
    if (n_paths == 0 || steps_per_path == 0) {
        throw Error(ErrorCode::InvalidArgument, "simulate needs at least one path and one step");
    }
    if (workers <= 0) workers = worker_count();
    const double p = sf.solution.params.p;
    const auto nz = static_cast<std::size_t>(sf.k) + 1;
    struct PathOut {
        double growth = 0.0, growth_liq = 0.0;
        std::uint64_t buys = 0, sells = 0;
        std::vector<std::uint64_t> occ;
        std::vector<std::vector<std::uint64_t>> tr;
    };
    std::vector<PathOut> outs(n_paths);
    parallel_for(n_paths, workers, [&](std::size_t path) {
        PathOut& o = outs[path];
        o.occ.assign(nz, 0);
        o.tr.assign(nz, std::vector<std::uint64_t>(nz, 0));
        PhiloxStream rng(seed, path);
        PathState st = initial_state();
        Portfolio pf = initial_portfolio(sf);
        const double v0 = pf.shadow_wealth, l0 = pf.liquidation_wealth;
        double log_v = 0.0;
        for (std::uint64_t t = 0; t < steps_per_path; ++t) {
            const Move mv = rng.next_uniform() < p ? Move::Up : Move::Down;
            const PathState nx = step(st, mv, sf.k);
            Portfolio np = portfolio_step(pf, st, nx, sf);
            if (np.phi > pf.phi) ++o.buys;
            if (np.phi < pf.phi) ++o.sells;
            ++o.occ[static_cast<std::size_t>(st.z_index())];
            ++o.tr[static_cast<std::size_t>(st.z_index())][static_cast<std::size_t>(nx.z_index())];
            log_v += std::log(np.shadow_wealth / pf.shadow_wealth);
            // renormalize so long paths never under/overflow
            const double scale = 1.0 / np.shadow_wealth;
            np.phi0 *= scale;
            np.phi *= scale;
            np.shadow_wealth = 1.0;
            np.liquidation_wealth *= scale;
            pf = np;
            st = nx;
            // keep prices representable: shift the index origin of S and m together
            if (std::abs(st.i) > 512) {
                const int shift = st.i;
                st.i -= shift;
                st.j -= shift;
                pf.phi *= std::exp(-shift * std::log(sf.solution.params.d));
            }
        }
        const double T = static_cast<double>(steps_per_path);
        o.growth = log_v / T;
        o.growth_liq = (log_v + std::log(v0) + std::log(pf.liquidation_wealth) - std::log(l0)) / T;
    });
    SimStats s;
    s.n_paths = n_paths;
    s.steps_per_path = steps_per_path;
    s.occupancy.assign(nz, 0);
    s.transitions.assign(nz, std::vector<std::uint64_t>(nz, 0));
    std::vector<double> g(n_paths), gl(n_paths);
    for (std::size_t i = 0; i < n_paths; ++i) {
        g[i] = outs[i].growth;
        gl[i] = outs[i].growth_liq;
        s.buys += outs[i].buys;
        s.sells += outs[i].sells;
        for (std::size_t a = 0; a < nz; ++a) {
            s.occupancy[a] += outs[i].occ[a];
            for (std::size_t b = 0; b < nz; ++b) s.transitions[a][b] += outs[i].tr[a][b];
        }
    }
    const double n = static_cast<double>(n_paths);
    s.mean_growth = pairwise_sum(g) / n;
    s.mean_growth_liq = pairwise_sum(gl) / n;
    if (n_paths > 1) {
        std::vector<double> dev(n_paths);
        for (std::size_t i = 0; i < n_paths; ++i) dev[i] = (g[i] - s.mean_growth) * (g[i] - s.mean_growth);
        s.stderr_growth = std::sqrt(pairwise_sum(dev) / (n - 1.0) / n);
    }
    return s;
}

}  // namespace shadowtree
