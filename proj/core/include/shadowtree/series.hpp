#pragma once

#include <cstddef>
#include <vector>

namespace shadowtree::series {

// Truncated power series a[0] + a[1] t + ... + a[n-1] t^{n-1}.
using Series = std::vector<double>;

Series constant(double value, std::size_t n);
Series variable(double scale, std::size_t n);  // scale * t

Series add(const Series& a, const Series& b);
Series scale(const Series& a, double s);
Series mul(const Series& a, const Series& b);
Series reciprocal(const Series& a);  // a[0] != 0
Series power(const Series& a, int k);

// Both require a[0] == 0.
Series log1p(const Series& a);
Series exp(const Series& a);

// Given f(t) = f1 t + f2 t^2 + ... with f1 != 0, returns the coefficients
// (g1, g2, ...) of the compositional inverse via Lagrange inversion.
std::vector<double> lagrange_invert(const std::vector<double>& f);

}  // namespace shadowtree::series
