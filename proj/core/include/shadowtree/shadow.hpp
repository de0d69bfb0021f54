#pragma once

#include <cstdint>
#include <vector>

#include "shadowtree/model.hpp"
#include "shadowtree/solver.hpp"

namespace shadowtree {

// g on the lattice {d, 1, u, ..., u^k, u^{k+1}}; values[n + 1] = g(u^n).
struct ShadowFunction {
    ShadowSolution solution;
    int k = 0;
    std::vector<double> values;

    double at(int n) const { return values.at(static_cast<std::size_t>(n + 1)); }
};

// g_c(s) for arbitrary c and s > 0, continuous in s.
double g_formula(const ModelParams& params, double c, double s);

// Requires an integer k (within 1e-8) of at least one.
ShadowFunction make_shadow_function(const ShadowSolution& sol);

double g_eval(const ShadowFunction& sf, double s);

struct SmoothPasting {
    double g_d;      // g(d) - d
    double g_1;      // g(1) - 1
    double g_sbar;   // g(sbar) - (1-lambda) sbar
    double g_usbar;  // g(u sbar) - (1-lambda) u sbar
    double max_abs() const;
};

SmoothPasting smooth_pasting(const ShadowFunction& sf);

struct OptimalityReport {
    double max_deviation = 0.0;
    double endpoint_deviation = 0.0;  // at s = 1, against 1/(c+1)
    std::vector<double> deviations;   // per n = 0..k
};

// The right-hand side g/(c' + g) uses c' = c + rhs_shift; g keeps the solved c.
OptimalityReport optimality_identity_check(const ShadowFunction& sf, double rhs_shift = 0.0);

enum class Regime : std::uint8_t { Buy, Sell };

struct PathState {
    int t = 0;
    int j = 0;  // S = s0 u^j
    int i = 0;  // m = s0 u^i
    Regime regime = Regime::Buy;
    int top_streak = 0;
    int bottom_streak = 1;
    int n_sigma = 0;
    int n_rho = 0;

    int z_index() const { return j - i; }
};

PathState initial_state();
PathState step(const PathState& state, Move move, int k);

double price(const ModelParams& params, int index);
double shadow_price(const PathState& state, const ShadowFunction& sf);

struct Portfolio {
    double phi0 = 0.0;
    double phi = 0.0;
    double shadow_wealth = 0.0;
    double liquidation_wealth = 0.0;
};

Portfolio initial_portfolio(const ShadowFunction& sf, double x = 1.0);
Portfolio portfolio_step(const Portfolio& pf, const PathState& before, const PathState& after,
                         const ShadowFunction& sf);

struct ShadowCheckReport {
    std::uint64_t paths = 0;
    std::uint64_t steps = 0;
    std::uint64_t buys = 0;
    std::uint64_t sells = 0;
    std::uint64_t boundary_violations = 0;
    std::uint64_t band_violations = 0;
    double max_self_financing = 0.0;  // relative to shadow wealth
    double max_pi_identity = 0.0;
    double min_phi0 = 0.0;
    double min_phi = 0.0;
    double min_liquidation = 0.0;

    void merge(const ShadowCheckReport& other);
};

ShadowCheckReport shadow_conditions_check(const Path& path, const ShadowFunction& sf);

// All 2^T paths, by depth-first traversal of the tree.
ShadowCheckReport exhaustive_check(const ShadowFunction& sf, int horizon);

struct ReplayRow {
    int t;
    double s;
    double m;
    Regime regime;
    int z_index;
    double s_tilde;
    double phi0;
    double phi;
    double pi_tilde;
    double v_liq;
    double v_shadow;
};

std::vector<ReplayRow> replay(const ShadowFunction& sf, const Path& path, double x = 1.0);

}  // namespace shadowtree
