#include "shadowtree/asymptotics.hpp"

#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "shadowtree/errors.hpp"
#include "shadowtree/markov.hpp"
#include "shadowtree/series.hpp"

namespace shadowtree {

namespace {

double sq(double v) { return v * v; }


}  // namespace

double lambda1_closed(const ModelParams& params, DriftDomain domain) {
    const auto vm = validate(params, domain);
    const auto& dc = vm.derived;
    return ((1.0 + params.d) * dc.eta - 1.0) / (dc.cbar * (1.0 - params.p));
}

double lambda2_closed(const ModelParams& params, DriftDomain domain) {
    const auto vm = validate(params, domain);
    const auto& dc = vm.derived;
    const double p = params.p, d = params.d, eta = dc.eta;
    const double num = sq(1.0 + d) * eta * eta +
                       (d * d + (2.0 - 2.0 * p) * d - 1.0 - 2.0 * p) / (1.0 - d) * eta +
                       2.0 * p * dc.a1 / (1.0 - d);
    return -num / (2.0 * sq(dc.cbar) * sq(1.0 - p));
}

std::vector<double> lambda_series(const ModelParams& params, int order, DriftDomain domain) {
    namespace ps = series;
    if (order < 1) {
        throw Error(ErrorCode::InvalidArgument, "order must be >= 1");
    }
    const auto vm = validate(params, domain);
    const auto& dc = vm.derived;
    const double p = params.p, d = params.d;
    const std::size_t n = static_cast<std::size_t>(order) + 1;
    ps::Series expo;
    if (dc.half) {
        // 2 log(1+t) + t (1+d+t) / ((1+t)(1-d)) log d
        const ps::Series t = ps::variable(1.0, n);
        const ps::Series inv_c = ps::reciprocal(ps::add(ps::constant(1.0, n), t));
        const ps::Series kk = ps::scale(
            ps::mul(ps::mul(t, ps::add(ps::constant(1.0 + d, n), t)), inv_c), 1.0 / (1.0 - d));
        expo = ps::add(ps::scale(ps::log1p(t), 2.0), ps::scale(kk, dc.log_d));
    } else {
        const double kappa = dc.a1 / ((1.0 - d) * (1.0 - p));
        const ps::Series q = ps::variable(kappa, n);
        ps::Series cser = ps::constant(dc.cbar, n);
        cser[1] = 1.0;
        const ps::Series minus_q_over_c = ps::scale(ps::mul(q, ps::reciprocal(cser)), -1.0);
        expo = ps::add(ps::scale(ps::log1p(q), dc.b + 1.0),
                       ps::scale(ps::log1p(minus_q_over_c), dc.b - 1.0));
    }
    const ps::Series e = ps::exp(expo);
    std::vector<double> out(static_cast<std::size_t>(order));
    for (std::size_t i = 1; i < n; ++i) out[i - 1] = -e[i];
    return out;
}

LambdaTaylor lambda_taylor(const ModelParams& params, int order, DriftDomain domain) {
    if (order < 1 || order > 5) {
        throw Error(ErrorCode::InvalidArgument, "lambda_taylor order must be in [1,5]");
    }
    LambdaTaylor lt;
    lt.coeffs = lambda_series(params, order, domain);
    lt.coeffs[0] = lambda1_closed(params, domain);
    if (order >= 2) lt.coeffs[1] = lambda2_closed(params, domain);
    return lt;
}

LambdaTaylor lambda_taylor_fd(const ModelParams& params, int order, double h0, DriftDomain domain) {
    if (order < 1 || order > 3) {
        throw Error(ErrorCode::InvalidArgument, "lambda_taylor_fd order must be in [1,3]");
    }
    const auto vm = validate(params, domain);
    const double cbar = vm.derived.cbar;
    auto F = [&](double t) { return big_f_unchecked(params, cbar + t); };
    auto stencil = [&](int m, double h) {
        switch (m) {
            case 1: return (F(h) - F(-h)) / (2.0 * h);
            case 2: return (F(h) - 2.0 * F(0.0) + F(-h)) / (h * h) / 2.0;
            default: return (F(2.0 * h) - 2.0 * F(h) + 2.0 * F(-h) - F(-2.0 * h)) / (2.0 * h * h * h) / 6.0;
        }
    };
    LambdaTaylor lt;
    const double h = h0 * std::abs(cbar);
    for (int m = 1; m <= order; ++m) {
        const double d0 = stencil(m, h), d1 = stencil(m, h / 2.0), d2 = stencil(m, h / 4.0);
        const double r0 = (4.0 * d1 - d0) / 3.0, r1 = (4.0 * d2 - d1) / 3.0;
        const double best = (16.0 * r1 - r0) / 15.0;
        if (std::abs(best - r1) > 1e-6 * std::abs(best)) lt.precision_warning = true;
        lt.coeffs.push_back(best);
    }
    return lt;
}

CSeries c_series(const ModelParams& params, int order, DriftDomain domain) {
    const auto lt = lambda_taylor(params, order, domain);
    return {series::lagrange_invert(lt.coeffs), lt.precision_warning};
}

double c1_closed(const ModelParams& params) {
    const auto vm = validate(params);
    return vm.derived.cbar * (1.0 - params.p) / ((1.0 + params.d) * vm.derived.eta - 1.0);
}

double c2_closed(const ModelParams& params) {
    const auto vm = validate(params);
    const double p = params.p, d = params.d, eta = vm.derived.eta;
    const double bracket = sq(1.0 + d) * eta * eta +
                           (d * d + (2.0 - 2.0 * p) * d - 1.0 - 2.0 * p) / (1.0 - d) * eta +
                           2.0 * p * vm.derived.a1 / (1.0 - d);
    const double den = (1.0 + d) * eta - 1.0;
    return vm.derived.cbar * (1.0 - p) * bracket / (2.0 * den * den * den);
}

NtrCoefficients ntr_expansion(const ModelParams& params) {
    const auto vm = validate(params);
    const double p = params.p, d = params.d, eta = vm.derived.eta;
    const double b0 = 1.0 - p - p * d, a1 = vm.derived.a1;
    const double den = ((1.0 + d) * eta - 1.0) * sq(1.0 - d);
    NtrCoefficients nc;
    nc.theta0 = vm.derived.merton_pi;
    nc.lower1 = -b0 * a1 * (1.0 - p) / den;
    nc.upper1 = b0 * a1 * ((1.0 + d) * eta - (1.0 - p)) / den;
    nc.width1 = nc.upper1 - nc.lower1;
    return nc;
}

NtrBoundaries exact_boundaries(const ShadowSolution& sol) {
    const double a = 1.0 / (1.0 + sol.c), b = 1.0 / (1.0 + sol.c / sol.sbar);
    return {std::min(a, b), std::max(a, b)};
}

GrowthExpansion growth_expansion(const ModelParams& params) {
    const auto vm = validate(params);
    const double p = params.p, d = params.d, eta = vm.derived.eta;
    const double w = sq(1.0 + d) * (1.0 - p) * p;
    const double num = vm.derived.a1 * (1.0 - p - p * d) - w * std::log(w / d);
    return {frictionless_growth(params), num / ((1.0 - d * d) * ((1.0 + d) * eta - 1.0))};
}

void validate_bs(const BSLimitParams& b) {
    if (!(b.sigma > 0.0) || !(b.delta > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "need sigma > 0 and delta > 0");
    }
    const double th = b.theta();
    if (!(th > 0.0) || std::abs(th - 1.0) < 1e-9) {
        std::ostringstream os;
        os << "theta=" << th << " must lie in (0,1) or (1,inf)";
        throw Error(ErrorCode::InvalidArgument, os.str());
    }
}

BinomialPair bs_binomial_pair(const BSLimitParams& b) {
    const double sd = std::sqrt(b.delta);
    return {0.5 + (b.mu - 0.5 * b.sigma * b.sigma) / (2.0 * b.sigma) * sd, std::exp(-b.sigma * sd)};
}

ModelParams bs_params(const BSLimitParams& b, double lambda) {
    validate_bs(b);
    const auto pr = bs_binomial_pair(b);
    ModelParams mp{pr.d, pr.p, lambda, 1.0};
    try {
        validate(mp, DriftDomain::Leveraged);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::RejectsDrift) {
            throw Error(ErrorCode::InadmissibleDelta, e.what());
        }
        throw;
    }
    return mp;
}

double g_bs(double c, double theta, double s) {
    if (std::abs(theta - 1.0) < 1e-12) {
        throw Error(ErrorCode::DomainError, "g_bs undefined at theta = 1");
    }
    if (!(s > 0.0)) {
        throw Error(ErrorCode::DomainError, "g_bs needs s > 0");
    }
    if (std::abs(theta - 0.5) < 1e-12) {
        const double ls = std::log(s);
        return ((c + 1.0) + c * ls) / (c + 1.0 - ls);
    }
    const double s2t = std::pow(s, 2.0 * theta);
    return (-c * s + (2.0 * theta - 1.0 + 2.0 * c * theta) * s2t) /
           (s - (2.0 - 2.0 * theta - c * (2.0 * theta - 1.0)) * s2t);
}

double g2_solve(const BSLimitParams& b, double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "lambda must lie in (0,1)");
    }
    const ModelParams mp = bs_params(b, 0.0);
    const auto iv = admissible_interval(mp, DriftDomain::Leveraged);
    const double cbar = iv.lo;
    const double l1 = lambda1_closed(mp, DriftDomain::Leveraged);
    const double l2 = lambda2_closed(mp, DriftDomain::Leveraged);
    auto f = [&](double c) {
        const double t = c - cbar;
        return big_f_unchecked(mp, c) - l1 * t - l2 * t * t - lambda;
    };
    const double scale = std::max(1.0, std::abs(cbar));
    const double edge = std::isinf(iv.hi) ? std::numeric_limits<double>::infinity()
                                          : iv.hi - 1e-12 * std::max(1.0, std::abs(iv.hi));
    double lo = cbar + 1e-12 * scale, t = 1e-6 * scale;
    double hi = cbar + t;
    while (true) {
        if (hi >= edge) hi = edge;
        if (f(hi) > 0.0) break;
        if (hi == edge) throw Error(ErrorCode::NoBracket, "F2 stays below lambda on the interval");
        lo = hi;
        t *= 2.0;
        hi = cbar + t;
    }
    std::uintmax_t iters = 500;
    auto tol = [](double a, double c) {
        return std::abs(c - a) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(a);
    };
    const auto [a, c] = boost::math::tools::toms748_solve(f, lo, hi, f(lo), f(hi), tol, iters);
    if (iters >= 500) {
        throw Error(ErrorCode::NoConvergence, "g2_solve did not converge");
    }
    return std::abs(f(a)) <= std::abs(f(c)) ? a : c;
}

BSLeading bs_lambda_leading(const BSLimitParams& b) {
    validate_bs(b);
    const double th = b.theta(), s = b.sigma, sd = std::sqrt(b.delta);
    return {2.0 / 3.0 * th * th * s * s * b.delta, 2.0 * th * th * th * s * sd / (1.0 - th),
            4.0 * std::pow(th, 4) / (3.0 * sq(th - 1.0))};
}

BSCoefficients bs_ntr_expansion(const BSLimitParams& b) {
    validate_bs(b);
    const double th = b.theta(), s = b.sigma, dl = b.delta, sd = std::sqrt(dl);
    const double base = 3.0 * th * th * sq(1.0 - th);
    const double q6 = std::cbrt(6.0 / (th * (1.0 - th)));
    BSCoefficients out;
    out.theta0 = th + s * s / 24.0 * (2.0 * th - 1.0) * dl;
    out.lower1 = -std::cbrt(base / 4.0) + std::cbrt(base / 32.0) * (4.0 * th - 3.0) * s * sd;
    out.upper1 = std::cbrt(base / 4.0) + std::cbrt(base / 32.0) * s * sd;
    out.width1 = std::cbrt(2.0 * base) * (1.0 + (1.0 - th) * s * sd);
    out.r0 = sq(b.mu) / (2.0 * s * s) + s * s / 24.0 * th * (th - 1.0) * (2.0 * th * th - 2.0 * th + 1.0) * dl;
    out.r1 = std::cbrt(3.0 / 32.0) * s * s * s * std::pow(std::cbrt(th * (th - 1.0)), 5) * sd;
    out.cbar0 = (1.0 - th) / th;
    out.cbar1 = s * s * (1.0 - 2.0 * th) / (24.0 * th * th);
    out.cbar2 = (24.0 * th * th - 22.0 * th + 5.0) * std::pow(s, 4) / (2880.0 * th * th * th);
    out.c3_tilde = (1.0 - th) / (2.0 * th) * q6;
    out.c4_tilde = sq(1.0 - th) / (4.0 * th) * q6 * q6;
    out.sbar1 = q6 + std::cbrt(6.0 * sq(1.0 - th) / th) * s * sd;
    out.sbar2 = 0.5 * q6 * q6 + (7.0 - 2.0 * th) * (1.0 - th) * s / 4.0 * q6 * q6 * sd;
    return out;
}

std::vector<ComparisonRow> bs_limit_comparison(const BSLimitParams& b, double lambda) {
    const auto co = bs_ntr_expansion(b);
    const auto lead = bs_lambda_leading(b);
    const ModelParams mp = bs_params(b, lambda);
    const auto dc = derived_constants(mp.p, mp.d);
    const auto sol = solve_c(mp, DriftDomain::Leveraged);
    const auto nb = exact_boundaries(sol);
    const double l3 = std::cbrt(lambda), l23 = l3 * l3, dl = b.delta;
    std::vector<ComparisonRow> rows;
    auto add = [&](std::string name, double exact, double expansion) {
        rows.push_back({std::move(name), exact, expansion, std::abs(exact - expansion)});
    };
    add("cbar", dc.cbar, co.cbar0 + co.cbar1 * dl + co.cbar2 * dl * dl);
    add("lambda1_over_delta", lambda1_closed(mp, DriftDomain::Leveraged) / dl, lead.lambda1 / dl);
    add("lambda3", lambda_series(mp, 3, DriftDomain::Leveraged)[2], lead.lambda3);
    add("c_minus_cbar", sol.c - dc.cbar, co.c3_tilde * l3);
    add("sbar", sol.sbar, 1.0 + co.sbar1 * l3 + co.sbar2 * l23);
    add("theta_lower", nb.lower, co.theta0 + co.lower1 * l3);
    add("theta_upper", nb.upper, co.theta0 + co.upper1 * l3);
    add("width", nb.upper - nb.lower, co.width1 * l3);
    add("growth_over_delta", growth_rate_closed_form(sol) / dl, co.r0 + co.r1 * l3);
    return rows;
}

}  // namespace shadowtree
