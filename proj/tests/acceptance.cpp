// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "shadowtree/asymptotics.hpp"
#include "shadowtree/errors.hpp"
#include "shadowtree/markov.hpp"
#include "shadowtree/oracle.hpp"
#include "shadowtree/parallel.hpp"
#include "shadowtree/shadow.hpp"
#include "shadowtree/solver.hpp"

using namespace shadowtree;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

struct Pd {
    double p, d;
};

// The 3x3 (p, d) grid restricted to the admissible drift region.
std::vector<Pd> admissible_pairs(int& skipped) {
    std::vector<Pd> out;
    skipped = 0;
    for (double d : {0.5, 0.8, 0.95}) {
        for (double p : {0.45, 0.5, 0.55}) {
            if (p > d / (1.0 + d) && p < 1.0 / (1.0 + d)) {
                out.push_back({p, d});
            } else {
                ++skipped;
            }
        }
    }
    return out;
}

std::vector<ShadowFunction> model_set(int& skipped) {
    std::vector<ShadowFunction> out;
    for (const auto& pd : admissible_pairs(skipped)) {
        for (int k = 1; k <= 6; ++k) {
            const auto cal = calibrate_integer_k(pd.p, pd.d, k);
            out.push_back(make_shadow_function(solve_c(cal.params)));
        }
    }
    return out;
}

// Counts how many consecutive residual ratios fall in [target(1-tol), target(1+tol)].
int ratios_in_band(const std::vector<double>& res, double target, double tol, std::string& text) {
    int ok = 0;
    for (std::size_t i = 0; i + 1 < res.size(); ++i) {
        const double r = res[i] / res[i + 1];
        text += fmt("%s%.3f", i ? "," : "", r);
        if (r >= target * (1.0 - tol) && r <= target * (1.0 + tol)) ++ok;
    }
    return ok;
}

Outcome c1_round_trip() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    int n = 0;
    for (double d : {0.5, 0.7, 0.8, 0.9, 0.95}) {
        const double lo = d / (1.0 + d), hi = 1.0 / (1.0 + d);
        for (double f : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            const double p = lo + f * (hi - lo);
            for (int i = 0; i < 8; ++i) {
                const double lam = std::exp(std::log(1e-8) + i * (std::log(0.3) - std::log(1e-8)) / 7.0);
                const ModelParams mp{d, p, lam, 1.0};
                const auto sol = solve_c(mp);
                worst = std::max(worst, std::abs(big_f(mp, sol.c) - lam));
                ++n;
            }
        }
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-12 && secs < 1.0 && n == 200,
            fmt("%d solves, max|F(c)-lambda|=%.3e (tol 1e-12), %.3f s (limit 1 s)", n, worst, secs)};
}

Outcome c2_smooth_pasting(const std::vector<ShadowFunction>& ms, int skipped) {
    double worst = 0.0;
    for (const auto& sf : ms) worst = std::max(worst, smooth_pasting(sf).max_abs());
    return {worst <= 1e-10, fmt("%zu models (%d inadmissible (p,d) pairs skipped), max residual %.3e (tol 1e-10)",
                                ms.size(), skipped, worst)};
}

Outcome c3_optimality(const std::vector<ShadowFunction>& ms) {
    double worst = 0.0, min_perturbed = 1e300;
    for (const auto& sf : ms) {
        worst = std::max(worst, optimality_identity_check(sf).max_deviation);
        min_perturbed = std::min(min_perturbed, optimality_identity_check(sf, 1e-3).max_deviation);
    }
    return {worst <= 1e-10, fmt("%zu models, max deviation %.3e (tol 1e-10); c+1e-3 gives >= %.3e",
                                ms.size(), worst, min_perturbed)};
}

Outcome c4_exhaustive(const std::vector<ShadowFunction>& ms) {
    ShadowCheckReport all;
    all.min_phi0 = all.min_phi = all.min_liquidation = 1e300;
    for (const auto& sf : ms) all.merge(exhaustive_check(sf, 14));
    const bool ok = all.max_self_financing <= 1e-12 && all.boundary_violations == 0 &&
                    all.band_violations == 0 && all.paths == ms.size() * 16384;
    return {ok, fmt("%llu paths, self-financing %.3e (tol 1e-12), boundary violations %llu, "
                    "band violations %llu, trades %llu buys / %llu sells",
                    static_cast<unsigned long long>(all.paths), all.max_self_financing,
                    static_cast<unsigned long long>(all.boundary_violations),
                    static_cast<unsigned long long>(all.band_violations),
                    static_cast<unsigned long long>(all.buys), static_cast<unsigned long long>(all.sells))};
}

Outcome c5_sandwich() {
    bool ok = true;
    double worst_secs = 0.0, min_lower = 1e300, min_upper = 1e300;
    int n = 0;
    for (double p : {0.5, 0.52}) {
        for (int k : {1, 2}) {
            const auto cal = calibrate_integer_k(p, 0.5, k);
            const auto sf = make_shadow_function(solve_c(cal.params));
            DPConfig cfg;
            cfg.horizon = 8;
            cfg.fraction_grid = 2001;
            const auto t0 = Clock::now();
            const auto rep = sandwich_check(sf, cfg);
            const double secs = seconds_since(t0);
            worst_secs = std::max(worst_secs, secs);
            const double lower = rep.dp_sup - rep.shadow_value;
            const double upper = rep.shadow_value - rep.log_one_minus_lambda + 1e-4 - rep.dp_sup;
            min_lower = std::min(min_lower, lower);
            min_upper = std::min(min_upper, upper);
            ok = ok && lower >= 0.0 && upper >= 0.0 && secs < 120.0;
            ++n;
        }
    }
    return {ok, fmt("%d models (d=0.5), min(dp_sup - shadow_value)=%.3e >= 0, "
                    "min(shadow_value - log(1-lambda) + 1e-4 - dp_sup)=%.3e >= 0, max %.2f s (limit 120 s)",
                    n, min_lower, min_upper, worst_secs)};
}

Outcome c6_growth(const std::vector<ShadowFunction>& ms) {
    double worst = 0.0;
    for (const auto& sf : ms) {
        worst = std::max(worst, std::abs(growth_rate_closed_form(sf.solution) - growth_rate_stationary(sf)));
    }
    bool mc_ok = true;
    double worst_z = 0.0;
    const struct {
        double p, d;
        int k;
    } mc_models[] = {{0.5, 0.5, 1}, {0.55, 0.8, 3}, {0.45, 0.8, 2}};
    for (const auto& m : mc_models) {
        const auto sf = make_shadow_function(solve_c(calibrate_integer_k(m.p, m.d, m.k).params));
        const auto st = simulate(sf, 15625, 64, 20240607);
        const double z = std::abs(st.mean_growth - growth_rate_closed_form(sf.solution)) / st.stderr_growth;
        worst_z = std::max(worst_z, z);
        mc_ok = mc_ok && z <= 4.0;
    }
    return {worst <= 1e-12 && mc_ok,
            fmt("closed vs stationary max %.3e (tol 1e-12) over %zu models; Monte Carlo 1e6 steps, "
                "max |R_mc - R|/stderr = %.2f (limit 4) over 3 models",
                worst, ms.size(), worst_z)};
}

Outcome c7_series_orders() {
    bool ok = true;
    std::string text;
    const std::vector<double> lams = {1e-2, 5e-3, 2.5e-3, 1.25e-3};
    for (const Pd pd : {Pd{0.5, 0.5}, Pd{0.55, 0.5}, Pd{0.45, 0.5}}) {
        const ModelParams base{pd.d, pd.p, 0.0, 1.0};
        const double cbar = derived_constants(pd.p, pd.d).cbar;
        const auto cs = c_series(base, 2);
        const auto nt = ntr_expansion(base);
        const auto ge = growth_expansion(base);
        std::vector<double> rc, rl, ru, rg;
        for (double lam : lams) {
            const auto sol = solve_c({pd.d, pd.p, lam, 1.0});
            const auto nb = exact_boundaries(sol);
            rc.push_back(std::abs(sol.c - (cbar + cs.coeffs[0] * lam + cs.coeffs[1] * lam * lam)));
            rl.push_back(std::abs(nb.lower - (nt.theta0 + nt.lower1 * lam)));
            ru.push_back(std::abs(nb.upper - (nt.theta0 + nt.upper1 * lam)));
            rg.push_back(std::abs(growth_rate_closed_form(sol) - (ge.r0 + ge.r1 * lam)));
        }
        std::string t;
        const int a = ratios_in_band(rc, 8.0, 0.2, t);
        t += " | ";
        const int b = ratios_in_band(rl, 4.0, 0.2, t);
        t += " | ";
        const int c = ratios_in_band(ru, 4.0, 0.2, t);
        t += " | ";
        const int g = ratios_in_band(rg, 4.0, 0.2, t);
        ok = ok && a >= 2 && b >= 2 && c >= 2 && g >= 2;
        text += fmt(" p=%.2f[%s]", pd.p, t.c_str());
    }
    // integer-k points: the real-k closed form and the stationary expectation coincide
    double worst = 0.0;
    for (const Pd pd : {Pd{0.5, 0.5}, Pd{0.55, 0.5}, Pd{0.45, 0.5}}) {
        for (int k = 1; k <= 4; ++k) {
            const auto sf = make_shadow_function(solve_c(calibrate_integer_k(pd.p, pd.d, k).params));
            worst = std::max(worst, std::abs(growth_rate_closed_form(sf.solution) - growth_rate_stationary(sf)));
        }
    }
    ok = ok && worst <= 1e-12;
    return {ok, fmt("halving ratios c (8+-20%%) | lower | upper | growth (4+-20%%), need 2 of 3:%s; "
                    "integer-k growth agreement %.3e",
                    text.c_str(), worst)};
}

Outcome c8_coefficients() {
    double w1 = 0.0, w2 = 0.0, wc1 = 0.0, wc2 = 0.0, wc2p = 0.0;
    int n = 0;
    for (double d : {0.5, 0.8, 0.9}) {
        const double lo = d / (1.0 + d), hi = 1.0 / (1.0 + d);
        for (double f : {0.2, 0.4, 0.5, 0.6, 0.8}) {
            const ModelParams mp{d, lo + f * (hi - lo), 0.0, 1.0};
            const auto fd = lambda_taylor_fd(mp, 2);
            const double l1 = lambda1_closed(mp), l2 = lambda2_closed(mp);
            w1 = std::max(w1, std::abs(fd.coeffs[0] - l1) / std::abs(l1));
            w2 = std::max(w2, std::abs(fd.coeffs[1] - l2) / std::abs(l2));
            const auto cs = c_series(mp, 2);
            wc1 = std::max(wc1, std::abs(cs.coeffs[0] * l1 - 1.0));
            const double c2_rel = -l2 / (l1 * l1 * l1);
            wc2 = std::max(wc2, std::abs(cs.coeffs[1] - c2_rel) / std::abs(c2_rel));
            wc2p = std::max(wc2p, std::abs(c2_closed(mp) - c2_rel) / std::abs(c2_rel));
            ++n;
        }
    }
    const bool ok = w1 <= 1e-8 && w2 <= 1e-8 && wc1 <= 1e-8 && wc2 <= 1e-8 && wc2p <= 1e-8;
    return {ok, fmt("%d models: lambda1 fd/closed %.2e, lambda2 %.2e, |c1 lambda1 - 1| %.2e, "
                    "c2 vs -lambda2/lambda1^3 %.2e (display %.2e), all tol 1e-8",
                    n, w1, w2, wc1, wc2, wc2p)};
}

Outcome c9_bs_limit(double mu, double sigma) {
    const double theta = mu / (sigma * sigma);
    // (a)
    const BSLimitParams b6{mu, sigma, 1e-6};
    const double l1 = lambda1_closed(bs_params(b6), DriftDomain::Leveraged);
    const double target = 2.0 / 3.0 * theta * theta * sigma * sigma;
    const double rel_a = std::abs(l1 / 1e-6 - target) / target;
    const bool a_ok = rel_a <= 0.05;
    // (b)
    std::vector<double> res;
    for (double dl : {1e-2, 5e-3, 2.5e-3, 1.25e-3}) {
        const BSLimitParams b{mu, sigma, dl};
        const auto co = bs_ntr_expansion(b);
        const auto pd = bs_binomial_pair(b);
        res.push_back(std::abs(derived_constants(pd.p, pd.d).cbar - (co.cbar0 + co.cbar1 * dl)));
    }
    std::string rb;
    const bool b_ok = ratios_in_band(res, 4.0, 0.2, rb) >= 2;
    // (c)
    const double cbs = (1.0 - theta) / theta;
    const double c = cbs + 0.05 * std::abs(cbs);
    bool c_ok = true;
    double last_err = 0.0;
    for (double s : {1.02, 1.05, 1.1}) {
        double prev = 1e300;
        for (double dl : {1e-2, 1e-3, 1e-4}) {
            const ModelParams mp = bs_params({mu, sigma, dl});
            const double e = std::abs(g_formula(mp, c, s) - g_bs(c, theta, s));
            c_ok = c_ok && e < prev;
            prev = e;
        }
        last_err = std::max(last_err, prev);
    }
    // (d)
    const BSLimitParams bd{mu, sigma, 1e-6};
    const double lam = 1e-2, l3 = std::cbrt(lam);
    const auto co = bs_ntr_expansion(bd);
    const auto nb = exact_boundaries(solve_c(bs_params(bd, lam), DriftDomain::Leveraged));
    const double el = std::abs(nb.lower - (co.theta0 + co.lower1 * l3)) / (std::abs(co.lower1) * l3);
    const double eu = std::abs(nb.upper - (co.theta0 + co.upper1 * l3)) / (std::abs(co.upper1) * l3);
    const bool d_ok = el <= 0.3 && eu <= 0.3;
    return {a_ok && b_ok && c_ok && d_ok,
            fmt("theta=%.2f: (a) lambda1/delta rel err %.2e (tol 5%%) (b) cbar halving ratios %s (4+-20%%) "
                "(c) g->g_BS monotone %s, err at delta=1e-4 %.2e (d) boundary err/(|theta1| lambda^(1/3)) "
                "lower %.3f upper %.3f (tol 0.3)",
                theta, rel_a, rb.c_str(), c_ok ? "yes" : "no", last_err, el, eu)};
}

Outcome c10_determinism() {
    const auto sf = make_shadow_function(solve_c(calibrate_integer_k(0.52, 0.8, 3).params));
    const auto a = simulate(sf, 5000, 32, 99, 1);
    const auto b = simulate(sf, 5000, 32, 99, 1);
    const auto c = simulate(sf, 5000, 32, 99, 4);
    auto same = [](const SimStats& x, const SimStats& y) {
        return x.mean_growth == y.mean_growth && x.stderr_growth == y.stderr_growth &&
               x.mean_growth_liq == y.mean_growth_liq && x.buys == y.buys && x.sells == y.sells &&
               x.occupancy == y.occupancy && x.transitions == y.transitions;
    };
    setenv("SHADOWTREE_THREADS", "1", 1);
    const int w1 = worker_count();
    const auto e1 = shadow_strategy_value(sf, 14);
    const auto s1 = simulate(sf, 5000, 32, 99);
    setenv("SHADOWTREE_THREADS", "4", 1);
    const int w4 = worker_count();
    const auto e4 = shadow_strategy_value(sf, 14);
    const auto s4 = simulate(sf, 5000, 32, 99);
    unsetenv("SHADOWTREE_THREADS");
    const bool ok = same(a, b) && same(a, c) && same(s1, s4) && same(a, s1) && w1 == 1 && w4 == 4 &&
                    e1.e_log_v == e4.e_log_v && e1.e_log_vtilde == e4.e_log_vtilde;
    return {ok, fmt("same seed repeat %s, workers 1 vs 4 %s, SHADOWTREE_THREADS=1 vs 4 (%d vs %d workers): "
                    "simulate %s, exhaustive expectation %s",
                    same(a, b) ? "identical" : "DIFFERENT", same(a, c) ? "identical" : "DIFFERENT", w1, w4,
                    same(s1, s4) ? "identical" : "DIFFERENT",
                    e1.e_log_v == e4.e_log_v ? "identical" : "DIFFERENT")};
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
        std::fflush(stdout);
    };
    int skipped = 0;
    const auto ms = model_set(skipped);
    report(1, "root-solver round trip", c1_round_trip);
    report(2, "smooth pasting", [&] { return c2_smooth_pasting(ms, skipped); });
    report(3, "optimality identity", [&] { return c3_optimality(ms); });
    report(4, "exhaustive path verification T=14", [&] { return c4_exhaustive(ms); });
    report(5, "sandwich check T=8 grid 2001", c5_sandwich);
    report(6, "growth rate triple agreement", [&] { return c6_growth(ms); });
    report(7, "series order checks", c7_series_orders);
    report(8, "closed-form coefficient cross-checks", c8_coefficients);
    report(9, "Black-Scholes limit mu=0.08 sigma=0.2", [] { return c9_bs_limit(0.08, 0.2); });
    report(9, "Black-Scholes limit mu=0.03 sigma=0.2 (supplementary)", [] { return c9_bs_limit(0.03, 0.2); });
    report(10, "determinism", c10_determinism);
    std::printf("%s: %d failing line(s)\n", failures ? "FAILED" : "ALL PASSED", failures);
    return failures ? 1 : 0;
}
