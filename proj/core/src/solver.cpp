#include "shadowtree/solver.hpp"

#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "shadowtree/errors.hpp"

namespace shadowtree {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// q = (c - cbar) a1 / ((1-d)(1-p)); A = 1 + q, B/c = 1 - q/c, r = A B / c.
double q_of(const ModelParams& m, const DerivedConstants& dc, double c) {
    return (c - dc.cbar) * dc.a1 / ((1.0 - m.d) * (1.0 - m.p));
}

double k_half(double d, double c) { return (c + d) * (c - 1.0) / (c * (1.0 - d)); }

void check_inside(const RootInterval& iv, double c) {
    if (!(c >= iv.lo) || !(c < iv.hi)) {
        std::ostringstream os;
        os.precision(17);
        os << "c=" << c << " outside [" << iv.lo << ", " << iv.hi << ")";
        throw Error(ErrorCode::DomainError, os.str());
    }
}

// log r(c) in cancellation-free form.
double log_r(const ModelParams& m, const DerivedConstants& dc, double c) {
    const double q = q_of(m, dc, c);
    const double a = 1.0 + q, b = 1.0 - q / c;
    if (!(a > 0.0) || !(b > 0.0)) {
        throw Error(ErrorCode::DomainError, "r(c) <= 0");
    }
    return std::log1p(q) + std::log1p(-q / c);
}

}  // namespace

RootInterval admissible_interval(const ModelParams& params, DriftDomain domain) {
    const auto vm = validate(params, domain);
    const double p = params.p, d = params.d;
    if (vm.derived.cbar < 0.0) {
        return {vm.derived.cbar, 0.0};
    }
    if (p > 0.5 && !vm.derived.half) {
        return {vm.derived.cbar, (1.0 - p - p * d) / (2.0 * p - 1.0)};
    }
    return {vm.derived.cbar, kInf};
}

double r_of_c(const ModelParams& params, double c, DriftDomain domain) {
    const auto iv = admissible_interval(params, domain);
    check_inside(iv, c);
    const auto dc = derived_constants(params.p, params.d);
    if (dc.half) {
        return std::exp(-k_half(params.d, c) * dc.log_d);
    }
    return std::exp(log_r(params, dc, c));
}

double k_of_c(const ModelParams& params, double c, DriftDomain domain) {
    const auto iv = admissible_interval(params, domain);
    check_inside(iv, c);
    const auto dc = derived_constants(params.p, params.d);
    if (dc.half) {
        return k_half(params.d, c);
    }
    return log_r(params, dc, c) / dc.log_x;
}

double big_f(const ModelParams& params, double c, DriftDomain domain) {
    const auto iv = admissible_interval(params, domain);
    check_inside(iv, c);
    return big_f_unchecked(params, c);
}

double big_f_unchecked(const ModelParams& params, double c) {
    const auto dc = derived_constants(params.p, params.d);
    if (dc.half) {
        return -std::expm1(2.0 * std::log(c) + k_half(params.d, c) * dc.log_d);
    }
    const double q = q_of(params, dc, c);
    if (!(1.0 + q > 0.0) || !(1.0 - q / c > 0.0)) {
        throw Error(ErrorCode::DomainError, "r(c) <= 0");
    }
    return -std::expm1((dc.b + 1.0) * std::log1p(q) + (dc.b - 1.0) * std::log1p(-q / c));
}

ShadowSolution make_solution(const ModelParams& params, double c, DriftDomain domain) {
    ShadowSolution s;
    s.params = params;
    s.derived = derived_constants(params.p, params.d);
    s.c = c;
    s.k = k_of_c(params, c, domain);
    s.sbar = std::exp(-s.k * s.derived.log_d);
    s.r_of_c = r_of_c(params, c, domain);
    const double d = params.d, p = params.p;
    s.beta = s.derived.half ? (c + d) / (1.0 - d)
                            : (c + d) * (2.0 * p - 1.0) / ((1.0 - d) * (1.0 - p));
    s.residual = big_f(params, c, domain) - params.lambda;
    return s;
}

ShadowSolution solve_c(const ModelParams& params, DriftDomain domain) {
    const auto iv = admissible_interval(params, domain);
    const double lam = params.lambda;
    if (!(lam > 0.0) || !(lam < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "solve_c needs lambda in (0,1)");
    }
    const double cbar = iv.lo;
    const double eps = 1e-12 * std::max(1.0, std::abs(cbar));
    auto f = [&](double c) { return big_f(params, c, domain) - lam; };

    double lo = cbar + eps, hi;
    if (std::isinf(iv.hi)) {
        double step = 1.0;
        hi = cbar + step;
        int n = 0;
        while (f(hi) < 0.0) {
            lo = hi;
            step *= 2.0;
            hi = cbar + step;
            if (++n > 1000) {
                throw Error(ErrorCode::NoBracket, "doubling search exhausted");
            }
        }
    } else {
        hi = iv.hi - 1e-12 * std::max(1.0, std::abs(iv.hi));
    }
    double flo = f(lo), fhi = f(hi);
    if (flo > 0.0) {
        // lambda is below F just above cbar; happens only for lambda ~ 1e-16
        throw Error(ErrorCode::NoBracket, "lambda below F(cbar + eps)");
    }
    if (fhi < 0.0) {
        throw Error(ErrorCode::NoBracket, "lambda above the supremum of F on the interval");
    }
    if (flo == 0.0) return make_solution(params, lo, domain);
    if (fhi == 0.0) return make_solution(params, hi, domain);

    std::uintmax_t max_iter = 500;
    auto tol = [](double a, double b) {
        return std::abs(b - a) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(a);
    };
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, max_iter);
    if (max_iter >= 500) {
        throw Error(ErrorCode::NoConvergence, "toms748 did not converge");
    }
    const double c = std::abs(f(a)) <= std::abs(f(b)) ? a : b;
    return make_solution(params, c, domain);
}

Calibration calibrate_integer_k(double p, double d, int k_target, double s0) {
    if (k_target < 1) {
        throw Error(ErrorCode::InvalidArgument, "k_target must be >= 1");
    }
    ModelParams probe{d, p, 0.0, s0};
    const auto iv = admissible_interval(probe);
    const auto dc = derived_constants(p, d);
    const double k = static_cast<double>(k_target);
    double c;
    if (dc.half) {
        const double h = (1.0 - d) * (1.0 + k);
        c = 0.5 * (h + std::sqrt(h * h + 4.0 * d));
    } else {
        const double a0 = d * (2.0 * p - 1.0);
        const double b0 = 1.0 - p - p * d;
        const double b1 = -(2.0 * p - 1.0);
        const double D = (1.0 - d) * (1.0 - d) * (1.0 - p) * (1.0 - p);
        const double y = std::exp(k * dc.log_x);
        const double A = dc.a1 * b1;
        const double B = dc.a1 * b0 + a0 * b1 - y * D;
        const double C = a0 * b0;
        const double disc = B * B - 4.0 * A * C;
        if (disc < 0.0) {
            throw Error(ErrorCode::NoAdmissibleRoot, "complex roots");
        }
        const double qq = -0.5 * (B + std::copysign(std::sqrt(disc), B));
        const double roots[2] = {qq / A, C / qq};
        c = std::numeric_limits<double>::quiet_NaN();
        for (double root : roots) {
            if (root > iv.lo && root < iv.hi) {
                c = root;
                break;
            }
        }
        if (std::isnan(c)) {
            throw Error(ErrorCode::NoAdmissibleRoot, "no quadratic root in the admissible interval");
        }
        // Newton polish on log r(c) - k log x
        for (int it = 0; it < 3; ++it) {
            const double g = log_r(probe, dc, c) - k * dc.log_x;
            const double rr = std::exp(log_r(probe, dc, c));
            const double dr = (1.0 - 2.0 * p) * (dc.a1 * c * c + d * b0) / (D * c * c);
            const double next = c - g * rr / dr;
            if (!(next > iv.lo && next < iv.hi)) break;
            c = next;
        }
    }
    const double lam = big_f(probe, c);
    if (!(lam > 0.0 && lam < 1.0)) {
        throw Error(ErrorCode::NoAdmissibleRoot, "calibrated lambda outside (0,1)");
    }
    return {c, lam, ModelParams{d, p, lam, s0}};
}

}  // namespace shadowtree
