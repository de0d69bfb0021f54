#pragma once

#include "shadowtree/model.hpp"

namespace shadowtree {

struct ShadowSolution {
    double c = 0.0;
    double k = 0.0;
    double sbar = 1.0;
    double beta = 0.0;     // beta_p for p != 1/2, beta for p = 1/2
    double r_of_c = 1.0;
    double residual = 0.0; // F(c) - lambda
    ModelParams params;
    DerivedConstants derived;
};

struct RootInterval {
    double lo;
    double hi;  // +inf when p <= 1/2
};

RootInterval admissible_interval(const ModelParams& params,
                                 DriftDomain domain = DriftDomain::Standard);

double big_f(const ModelParams& params, double c, DriftDomain domain = DriftDomain::Standard);
double r_of_c(const ModelParams& params, double c, DriftDomain domain = DriftDomain::Standard);
double k_of_c(const ModelParams& params, double c, DriftDomain domain = DriftDomain::Standard);

// Fills k, sbar, beta and r(c) for a given c. Does not solve anything.
ShadowSolution make_solution(const ModelParams& params, double c,
                             DriftDomain domain = DriftDomain::Standard);

// F continued analytically across cbar; only requires r(c) > 0. Used by difference
// stencils that straddle cbar.
double big_f_unchecked(const ModelParams& params, double c);

ShadowSolution solve_c(const ModelParams& params, DriftDomain domain = DriftDomain::Standard);

struct Calibration {
    double c;
    double lambda;
    ModelParams params;
};

Calibration calibrate_integer_k(double p, double d, int k_target, double s0 = 1.0);

}  // namespace shadowtree
