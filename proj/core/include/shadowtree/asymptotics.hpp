#pragma once

#include <string>
#include <vector>

#include "shadowtree/model.hpp"
#include "shadowtree/solver.hpp"

namespace shadowtree {

struct LambdaTaylor {
    std::vector<double> coeffs;  // lambda_1 .. lambda_order
    bool precision_warning = false;
};

double lambda1_closed(const ModelParams& params, DriftDomain domain = DriftDomain::Standard);
double lambda2_closed(const ModelParams& params, DriftDomain domain = DriftDomain::Standard);

// Exact Taylor coefficients of F at cbar by truncated power-series arithmetic.
std::vector<double> lambda_series(const ModelParams& params, int order,
                                  DriftDomain domain = DriftDomain::Standard);

// Orders 1-2 from the closed forms, higher orders from lambda_series. order <= 5.
LambdaTaylor lambda_taylor(const ModelParams& params, int order,
                           DriftDomain domain = DriftDomain::Standard);

// Central differences of F at cbar with two Richardson levels; order <= 3.
// step = h0 * cbar, halved twice.
LambdaTaylor lambda_taylor_fd(const ModelParams& params, int order, double h0 = 1e-3,
                              DriftDomain domain = DriftDomain::Standard);

struct CSeries {
    std::vector<double> coeffs;  // c_1 .. c_order
    bool precision_warning = false;
};

CSeries c_series(const ModelParams& params, int order, DriftDomain domain = DriftDomain::Standard);
double c1_closed(const ModelParams& params);
double c2_closed(const ModelParams& params);

struct NtrCoefficients {
    double theta0;
    double lower1;
    double upper1;
    double width1;
};

NtrCoefficients ntr_expansion(const ModelParams& params);

struct NtrBoundaries {
    double lower;
    double upper;
};

// min/max of 1/(1+c) and 1/(1+c/sbar) for a solved (possibly real-k) model.
NtrBoundaries exact_boundaries(const ShadowSolution& sol);

struct GrowthExpansion {
    double r0;
    double r1;
};

GrowthExpansion growth_expansion(const ModelParams& params);

struct BSLimitParams {
    double mu = 0.0;
    double sigma = 0.2;
    double delta = 1e-4;

    double theta() const { return mu / (sigma * sigma); }
};

void validate_bs(const BSLimitParams& bsl);

struct BinomialPair {
    double p;
    double d;
};

BinomialPair bs_binomial_pair(const BSLimitParams& bsl);
ModelParams bs_params(const BSLimitParams& bsl, double lambda = 0.0);

double g_bs(double c, double theta, double s);

// Root above cbar of F(c) - lambda_1 (c - cbar) - lambda_2 (c - cbar)^2 = lambda.
double g2_solve(const BSLimitParams& bsl, double lambda);

struct BSLeading {
    double lambda1;  // (2/3) theta^2 sigma^2 delta
    double lambda2;  // 2 theta^3 sigma sqrt(delta) / (1 - theta)
    double lambda3;  // 4 theta^4 / (3 (theta - 1)^2)
};

BSLeading bs_lambda_leading(const BSLimitParams& bsl);

struct BSCoefficients {
    double theta0;
    double lower1;
    double upper1;
    double width1;
    double r0;
    double r1;
    double cbar0;
    double cbar1;
    double cbar2;
    double c3_tilde;
    double c4_tilde;
    double sbar1;
    double sbar2;
};

BSCoefficients bs_ntr_expansion(const BSLimitParams& bsl);

struct ComparisonRow {
    std::string quantity;
    double exact;
    double expansion;
    double abs_err;
};

std::vector<ComparisonRow> bs_limit_comparison(const BSLimitParams& bsl, double lambda);

}  // namespace shadowtree
