#include "shadowtree/markov.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "shadowtree/errors.hpp"

namespace shadowtree {

Matrix transition_matrix(double p, int k) {
    if (k < 1 || !(p > 0.0 && p < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "transition_matrix needs k >= 1 and p in (0,1)");
    }
    const auto n = static_cast<std::size_t>(k) + 1;
    Matrix P(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        P[i][i + 1 < n ? i + 1 : i] += p;
        P[i][i > 0 ? i - 1 : i] += 1.0 - p;
    }
    return P;
}

std::vector<double> invariant_distribution(double p, int k) {
    if (k < 1 || !(p > 0.0 && p < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "invariant_distribution needs k >= 1 and p in (0,1)");
    }
    const auto n = static_cast<std::size_t>(k) + 1;
    std::vector<double> alpha(n);
    if (is_half(p)) {
        std::fill(alpha.begin(), alpha.end(), 1.0 / static_cast<double>(n));
        return alpha;
    }
    const double log_y = std::log(p / (1.0 - p));
    const double norm = (1.0 - 2.0 * p) / ((1.0 - p) * -std::expm1((k + 1) * log_y));
    for (std::size_t i = 0; i < n; ++i) alpha[i] = norm * std::exp(static_cast<double>(i) * log_y);
    return alpha;
}

BoundaryChain make_chain(double p, int k) {
    return {k, p, transition_matrix(p, k), invariant_distribution(p, k)};
}

std::vector<double> invariant_distribution_solve(const Matrix& P) {
    const auto n = static_cast<Eigen::Index>(P.size());
    Eigen::MatrixXd A(n + 1, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            A(j, i) = P[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] - (i == j ? 1.0 : 0.0);
        }
    }
    A.row(n).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
    rhs(n) = 1.0;
    const Eigen::VectorXd a = A.colPivHouseholderQr().solve(rhs);
    return {a.data(), a.data() + n};
}

double invariant_residual(const BoundaryChain& ch) {
    const std::size_t n = ch.alpha.size();
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += ch.alpha[i] * ch.transition[i][j];
        worst = std::max(worst, std::abs(s - ch.alpha[j]));
    }
    return worst;
}

double growth_rate_closed_form(const ShadowSolution& sol) {
    const double c = sol.c, d = sol.params.d, p = sol.params.p, k = sol.k;
    if (sol.derived.half) {
        return c * (1.0 - d) / (c * c - d) * std::log((c + d) / (std::sqrt(d) * (c + 1.0)));
    }
    const double log_x = sol.derived.log_x;
    const double beta_p = (c + d) * (2.0 * p - 1.0) / ((1.0 - d) * (1.0 - p));
    const double h_k = std::expm1(k * log_x) + beta_p;
    const double h_k1 = std::expm1((k + 1.0) * log_x) + beta_p;
    const double one_minus = -std::expm1(-(k + 1.0) * log_x);
    const double yk = std::exp(-k * log_x);
    return (1.0 - 2.0 * p) / ((1.0 - p) * one_minus) *
           ((1.0 - p) * std::log((c + d) / (c + 1.0)) + p * yk * std::log(h_k / h_k1));
}

double growth_rate_stationary(const ShadowFunction& sf) {
    const double c = sf.solution.c, p = sf.solution.params.p;
    const auto alpha = invariant_distribution(p, sf.k);
    double r = 0.0;
    for (int n = 0; n <= sf.k; ++n) {
        const double here = c + sf.at(n);
        const double term = -p * std::log(here / (c + sf.at(n + 1))) -
                            (1.0 - p) * std::log(here / (c + sf.at(n - 1)));
        r += alpha[static_cast<std::size_t>(n)] * term;
    }
    return r;
}

}  // namespace shadowtree
