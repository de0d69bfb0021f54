#include "shadowtree/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "shadowtree/errors.hpp"

namespace shadowtree {

bool is_half(double p) { return std::abs(p - 0.5) < kHalfTol; }

DerivedConstants derived_constants(double p, double d) {
    DerivedConstants dc;
    dc.half = is_half(p);
    dc.a1 = (2.0 * p - 1.0) + (1.0 - p) * (1.0 - d);
    dc.log_d = std::log(d);
    if (dc.half) {
        dc.cbar = 1.0;
        dc.x = 1.0;
        dc.log_x = 0.0;
        dc.b = std::numeric_limits<double>::quiet_NaN();
        dc.eta = dc.log_d / (-2.0 * (1.0 - d));
    } else {
        dc.cbar = (1.0 - 2.0 * p + p * (1.0 - d)) / dc.a1;
        dc.x = (1.0 - p) / p;
        dc.log_x = std::log1p((1.0 - 2.0 * p) / p);
        dc.b = dc.log_d / dc.log_x;
        dc.eta = (2.0 * p - 1.0) * dc.log_d / ((1.0 - d) * dc.log_x);
    }
    dc.merton_pi = dc.a1 / (1.0 - d);
    return dc;
}

ValidatedModel validate(const ModelParams& params, DriftDomain domain) {
    const double d = params.d, p = params.p;
    if (!(d > 0.0) || !(d < 1.0)) {
        std::ostringstream os;
        os << "need 0 < d < 1 < u, got d=" << d;
        throw Error(ErrorCode::RejectsArbitrage, os.str());
    }
    if (!(p > 0.0) || !(p < 1.0)) {
        throw Error(ErrorCode::RejectsDrift, "p must lie in (0,1)");
    }
    const double lo = d / (1.0 + d), hi = 1.0 / (1.0 + d);
    const bool standard = p > lo + kBoundaryTol && p < hi - kBoundaryTol;
    const bool leveraged = p > hi + kBoundaryTol && p < 1.0 - kBoundaryTol;
    if (!standard && !(domain == DriftDomain::Leveraged && leveraged)) {
        std::ostringstream os;
        os << "p=" << p << " outside (" << lo << ", " << hi << ")";
        throw Error(ErrorCode::RejectsDrift, os.str());
    }
    if (!(params.lambda >= 0.0) || !(params.lambda < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "lambda must lie in [0,1)");
    }
    if (!(params.s0 > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "s0 must be positive");
    }
    return {params, derived_constants(p, d)};
}

ValidatedModel validate(const MarketInput& in, DriftDomain domain) {
    if (!(in.u > 1.0) || !(in.d < 1.0) || !(in.d > 0.0)) {
        throw Error(ErrorCode::RejectsArbitrage, "need u > 1 > d > 0");
    }
    if (std::abs(in.u * in.d - 1.0) > 1e-12) {
        std::ostringstream os;
        os << "u*d=" << in.u * in.d << " is not 1";
        throw Error(ErrorCode::RejectsRecombining, os.str());
    }
    return validate(ModelParams{in.d, in.p, in.lambda, in.s0}, domain);
}

double frictionless_fraction(double p, double u, double d) {
    if (!(u > 1.0 && d < 1.0 && d > 0.0)) {
        throw Error(ErrorCode::RejectsArbitrage, "need u > 1 > d > 0");
    }
    if (!(p > 0.0 && p < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "p must lie in (0,1)");
    }
    return (p * u + (1.0 - p) * d - 1.0) / ((u - 1.0) * (1.0 - d));
}

double frictionless_growth(const ModelParams& params) {
    const double p = params.p, d = params.d;
    return std::log1p(d) + p * std::log(p) + (1.0 - p) * std::log1p(-p) - p * std::log(d);
}

Path parse_path(std::string_view text) {
    Path path;
    path.reserve(text.size());
    for (char ch : text) {
        if (ch == 'U' || ch == 'u') {
            path.push_back(Move::Up);
        } else if (ch == 'D' || ch == 'd') {
            path.push_back(Move::Down);
        } else {
            throw Error(ErrorCode::InvalidArgument, std::string("bad path character '") + ch + "'");
        }
    }
    return path;
}

double state_price_density(const Path& path, const ModelParams& params) {
    const double d = params.d, u = params.u(), p = params.p;
    const double pt = (1.0 - d) / (u - d);
    double log_z = 0.0;
    for (Move mv : path) {
        log_z += mv == Move::Up ? std::log(pt / p) : std::log((1.0 - pt) / (1.0 - p));
    }
    return std::exp(log_z);
}

}  // namespace shadowtree
