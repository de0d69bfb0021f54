#include "shadowtree/series.hpp"

#include <algorithm>

#include "shadowtree/errors.hpp"

namespace shadowtree::series {

Series constant(double value, std::size_t n) {
    Series s(n, 0.0);
    if (n > 0) s[0] = value;
    return s;
}

Series variable(double sc, std::size_t n) {
    Series s(n, 0.0);
    if (n > 1) s[1] = sc;
    return s;
}

Series add(const Series& a, const Series& b) {
    Series out(std::min(a.size(), b.size()));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

Series scale(const Series& a, double s) {
    Series out(a);
    for (double& v : out) v *= s;
    return out;
}

Series mul(const Series& a, const Series& b) {
    const std::size_t n = std::min(a.size(), b.size());
    Series out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; i + j < n; ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

Series reciprocal(const Series& a) {
    if (a.empty() || a[0] == 0.0) {
        throw Error(ErrorCode::DomainError, "series reciprocal needs a nonzero constant term");
    }
    Series out(a.size(), 0.0);
    out[0] = 1.0 / a[0];
    for (std::size_t n = 1; n < a.size(); ++n) {
        double acc = 0.0;
        for (std::size_t j = 1; j <= n; ++j) acc += a[j] * out[n - j];
        out[n] = -acc / a[0];
    }
    return out;
}

Series power(const Series& a, int k) {
    Series out = constant(1.0, a.size());
    for (int i = 0; i < k; ++i) out = mul(out, a);
    return out;
}

// L' (1 + a) = a'
Series log1p(const Series& a) {
    if (a.empty() || a[0] != 0.0) {
        throw Error(ErrorCode::DomainError, "series log1p needs a zero constant term");
    }
    const std::size_t n = a.size();
    Series out(n, 0.0);
    for (std::size_t m = 1; m < n; ++m) {
        double acc = m * a[m];
        for (std::size_t j = 1; j < m; ++j) acc -= j * out[j] * a[m - j];
        out[m] = acc / m;
    }
    return out;
}

// E' = a' E
Series exp(const Series& a) {
    if (a.empty() || a[0] != 0.0) {
        throw Error(ErrorCode::DomainError, "series exp needs a zero constant term");
    }
    const std::size_t n = a.size();
    Series out(n, 0.0);
    out[0] = 1.0;
    for (std::size_t m = 1; m < n; ++m) {
        double acc = 0.0;
        for (std::size_t j = 1; j <= m; ++j) acc += j * a[j] * out[m - j];
        out[m] = acc / m;
    }
    return out;
}

// g_n = (1/n) [t^{n-1}] (t / f(t))^n
std::vector<double> lagrange_invert(const std::vector<double>& f) {
    const std::size_t order = f.size();
    if (order == 0 || f[0] == 0.0) {
        throw Error(ErrorCode::DomainError, "series inversion needs a nonzero linear coefficient");
    }
    Series h(f.begin(), f.end());  // f(t)/t
    const Series inv = reciprocal(h);
    std::vector<double> g(order);
    Series pw = constant(1.0, order);
    for (std::size_t n = 1; n <= order; ++n) {
        pw = mul(pw, inv);
        g[n - 1] = pw[n - 1] / static_cast<double>(n);
    }
    return g;
}

}  // namespace shadowtree::series
