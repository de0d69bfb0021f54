#pragma once

#include <string_view>
#include <vector>

namespace shadowtree {

// Stored as (d, p, lambda, s0); the up-factor is always 1/d.
struct ModelParams {
    double d = 0.5;
    double p = 0.5;
    double lambda = 0.0;
    double s0 = 1.0;

    double u() const { return 1.0 / d; }
};

// Raw market description including an explicit up-factor, as read from user input.
struct MarketInput {
    double u = 2.0;
    double d = 0.5;
    double p = 0.5;
    double lambda = 0.0;
    double s0 = 1.0;
};

struct DerivedConstants {
    double cbar = 0.0;
    double b = 0.0;      // NaN on the p = 1/2 branch
    double eta = 0.0;
    double merton_pi = 0.0;
    double a1 = 0.0;     // p + pd - d
    double x = 1.0;      // (1-p)/p
    double log_x = 0.0;
    double log_d = 0.0;
    bool half = false;
};

// Standard: d/(1+d) < p < 1/(1+d).
// Leveraged additionally admits 1/(1+d) < p < 1, where the Merton fraction exceeds one.
enum class DriftDomain { Standard, Leveraged };

struct ValidatedModel {
    ModelParams params;
    DerivedConstants derived;
};

inline constexpr double kBoundaryTol = 1e-12;
inline constexpr double kHalfTol = 1e-11;

bool is_half(double p);

ValidatedModel validate(const ModelParams& params, DriftDomain domain = DriftDomain::Standard);
ValidatedModel validate(const MarketInput& input, DriftDomain domain = DriftDomain::Standard);

DerivedConstants derived_constants(double p, double d);

double frictionless_fraction(double p_up, double u, double d);
double frictionless_growth(const ModelParams& params);

enum class Move : signed char { Down = -1, Up = 1 };
using Path = std::vector<Move>;

// Parses a string of 'U'/'D' characters (case-insensitive).
Path parse_path(std::string_view text);

double state_price_density(const Path& path, const ModelParams& params);

}  // namespace shadowtree
