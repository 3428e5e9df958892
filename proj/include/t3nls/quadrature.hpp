#pragma once

// Composite Simpson weights on a uniform grid, with a 3-point Newton-Cotes
// patch when the interval count is odd, and a fourth-order cumulative
// integral built from cubic interpolation panels.

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace t3nls {

inline std::vector<double> composite_simpson_weights(std::size_t nodes, double h) {
    std::vector<double> w(nodes, 0.0);
    if (nodes <= 1) return w;
    if (nodes == 2) { w[0] = w[1] = h / 2.0; return w; }

    std::size_t intervals = nodes - 1;
    std::size_t simpson_end = (intervals % 2 == 0) ? nodes - 1 : nodes - 2;
    for (std::size_t j = 0; j + 2 <= simpson_end; j += 2) {
        w[j] += h / 3.0;
        w[j + 1] += 4.0 * h / 3.0;
        w[j + 2] += h / 3.0;
    }
    if (intervals % 2 != 0) {
        // odd interval count (so nodes >= 4): close with the cubic through
        // the final four nodes
        w[nodes - 4] += h / 24.0;
        w[nodes - 3] += -5.0 * h / 24.0;
        w[nodes - 2] += 19.0 * h / 24.0;
        w[nodes - 1] += 9.0 * h / 24.0;
    }
    return w;
}

// I[j] = integral of f from node 0 to node j, one cubic panel per interval.
inline std::vector<double> cumulative_integral(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> acc(n, 0.0);
    if (n < 2) return acc;
    if (n == 2) { acc[1] = h * (f[0] + f[1]) / 2.0; return acc; }
    if (n == 3) {
        acc[1] = h * (5.0 * f[0] + 8.0 * f[1] - f[2]) / 12.0;
        acc[2] = acc[1] + h * (-f[0] + 8.0 * f[1] + 5.0 * f[2]) / 12.0;
        return acc;
    }
    for (std::size_t j = 1; j < n; ++j) {
        double piece;
        if (j == 1) {
            piece = h * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]) / 24.0;
        } else if (j == n - 1) {
            piece = h * (f[n - 4] - 5.0 * f[n - 3] + 19.0 * f[n - 2] + 9.0 * f[n - 1]) / 24.0;
        } else {
            piece = h * (-f[j - 2] + 13.0 * f[j - 1] + 13.0 * f[j] - f[j + 1]) / 24.0;
        }
        acc[j] = acc[j - 1] + piece;
    }
    return acc;
}

} // namespace t3nls
