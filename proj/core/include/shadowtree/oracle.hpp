#pragma once

#include <cstdint>
#include <vector>

#include "shadowtree/model.hpp"
#include "shadowtree/shadow.hpp"

namespace shadowtree {

struct DPConfig {
    int horizon = 8;
    int fraction_grid = 2001;
    double range_lo = 0.0;
    double range_hi = 1.0;
    std::uint64_t seed = 0;
};

void validate_dp(const DPConfig& cfg);

struct DPResult {
    double value = 0.0;  // sup E[log V_T] from (x, 0) with x = 1
    std::vector<double> grid;
    std::vector<std::vector<int>> policy;  // policy[t][pre-trade index] -> post-trade index
};

// Backward induction over (t, pre-trade stock fraction at ask value).
DPResult dp_true(const ModelParams& params, const DPConfig& cfg);

// Frictionless log-optimization in the shadow market on a fraction grid; E[log V~_T].
double dp_shadow_market(const ShadowFunction& sf, const DPConfig& cfg);

struct ShadowValue {
    double e_log_v = 0.0;
    double e_log_vtilde = 0.0;
    double e_log_one_minus_lambda_y = 0.0;
    double y_min = 0.0;
    double y_max = 0.0;
    double min_liquidation = 0.0;
};

// Exact expectation over all 2^T paths of the explicit strategy, x = 1.
ShadowValue shadow_strategy_value(const ShadowFunction& sf, int horizon);

struct SandwichReport {
    double dp_sup = 0.0;
    double shadow_value = 0.0;
    double shadow_modified = 0.0;
    double log_one_minus_lambda = 0.0;
    double e_log_one_minus_lambda_y = 0.0;
    double grid_slack = 1e-4;
    bool lower_ok = false;      // shadow_value <= dp_sup
    bool upper_ok = false;      // dp_sup <= shadow_value - log(1-lambda) + slack
    bool upper_y_ok = false;    // dp_sup <= shadow_value - E log(1 - lambda Y) + slack
    bool modified_ok = false;   // shadow_value <= shadow_modified
    bool pass = false;
};

SandwichReport sandwich_check(const ShadowFunction& sf, const DPConfig& cfg);

struct SimStats {
    std::uint64_t n_paths = 0;
    std::uint64_t steps_per_path = 0;
    double mean_growth = 0.0;  // per period, shadow wealth
    double stderr_growth = 0.0;
    double mean_growth_liq = 0.0;
    std::uint64_t buys = 0;
    std::uint64_t sells = 0;
    std::vector<std::uint64_t> occupancy;               // visits to Z = 0..k
    std::vector<std::vector<std::uint64_t>> transitions;  // Z -> Z'
};

SimStats simulate(const ShadowFunction& sf, std::uint64_t steps_per_path, std::uint64_t n_paths,
                  std::uint64_t seed, int workers = 0);

}  // namespace shadowtree
