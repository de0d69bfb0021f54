#pragma once

#include <vector>

#include "shadowtree/shadow.hpp"
#include "shadowtree/solver.hpp"

namespace shadowtree {

using Matrix = std::vector<std::vector<double>>;

struct BoundaryChain {
    int k = 1;
    double p = 0.5;
    Matrix transition;
    std::vector<double> alpha;
};

Matrix transition_matrix(double p, int k);
std::vector<double> invariant_distribution(double p, int k);
BoundaryChain make_chain(double p, int k);

// Dense solve of alpha^T P = alpha^T, sum(alpha) = 1, used as a cross-check.
std::vector<double> invariant_distribution_solve(const Matrix& transition);

// max_j |(alpha^T P)_j - alpha_j|
double invariant_residual(const BoundaryChain& chain);

// Accepts a real-valued k (interpolation aid); exact for integer k.
double growth_rate_closed_form(const ShadowSolution& sol);
double growth_rate_stationary(const ShadowFunction& sf);

}  // namespace shadowtree
