#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace flexsat {

struct QuadratureResult {
    double value = 0.0;
    int panels = 0; ///< panels per axis at the last level
    bool converged = false;
};

/// Composite Simpson rule on [0, l1] x [0, l2] with n x n panels (n even).
template <class F>
double simpson_2d_fixed(F&& f, double l1, double l2, int n) {
    const double h1 = l1 / n, h2 = l2 / n;
    auto weight = [n](int i) { return (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0); };
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x1 = i * h1;
        const double wi = weight(i);
        double row = 0.0;
        for (int j = 0; j <= n; ++j) row += weight(j) * f(x1, j * h2);
        sum += wi * row;
    }
    return sum * h1 * h2 / 9.0;
}

/// Composite Simpson with panel doubling and Romberg extrapolation of the
/// level sequence (Simpson error terms h^4, h^6, h^8, ...). Stops when two
/// successive diagonal entries differ by at most rel_tol times the larger of
/// the estimate and the integral of |f| (sampled once, at 16 panels).
template <class F>
QuadratureResult simpson_2d(F&& f, double l1, double l2, double rel_tol = 1e-12, int max_panels = 4096) {
    auto abs_f = [&f](double a, double b) { return std::abs(f(a, b)); };
    int n = 8;
    std::vector<double> row{simpson_2d_fixed(f, l1, l2, n)};
    QuadratureResult result{row.front(), n, false};
    double abs_integral = -1.0;
    while (2 * n <= max_panels) {
        n *= 2;
        std::vector<double> next{simpson_2d_fixed(f, l1, l2, n)};
        double factor = 16.0;
        for (double prev : row) {
            next.push_back(next.back() + (next.back() - prev) / (factor - 1.0));
            factor *= 4.0;
        }
        if (abs_integral < 0.0) abs_integral = simpson_2d_fixed(abs_f, l1, l2, n);
        const double estimate = next.back();
        const double scale = std::max(std::abs(estimate), abs_integral);
        const bool settled = n > 16 && std::abs(estimate - row.back()) <= rel_tol * scale;
        result = {estimate, n, false};
        if (settled || scale == 0.0) {
            result.converged = true;
            return result;
        }
        row = std::move(next);
    }
    return result;
}

} // namespace flexsat
