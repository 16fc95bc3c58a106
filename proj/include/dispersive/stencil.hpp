#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace dispersive {

/// Finite-difference weights for the `order`-th derivative at `x0` on the
/// nodes `xs` (Fornberg's recurrence). Works for arbitrary node placement.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> fd_weights(Scalar x0, std::span<const Scalar> xs, int order) {
    const int n = static_cast<int>(xs.size());
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> c =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(order + 1, n);
    Scalar c1 = 1;
    Scalar c4 = xs[0] - x0;
    c(0, 0) = 1;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, order);
        Scalar c2 = 1;
        const Scalar c5 = c4;
        c4 = xs[i] - x0;
        for (int j = 0; j < i; ++j) {
            const Scalar c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k > 0; --k) {
                    c(k, i) = c1 * (k * c(k - 1, i - 1) - c5 * c(k, i - 1)) / c2;
                }
                c(0, i) = -c1 * c5 * c(0, i - 1) / c2;
            }
            for (int k = mn; k > 0; --k) {
                c(k, j) = (c4 * c(k, j) - k * c(k - 1, j)) / c3;
            }
            c(0, j) = c4 * c(0, j) / c3;
        }
        c1 = c2;
    }
    return c.row(order).transpose();
}

/// Weights on integer offsets (unit spacing) for the `order`-th derivative
/// at offset 0; divide by h^order for a physical grid.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> unit_weights(int first_offset, int count, int order) {
    std::vector<Scalar> xs(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) xs[static_cast<std::size_t>(i)] = Scalar(first_offset + i);
    return fd_weights<Scalar>(Scalar(0), xs, order);
}

}  // namespace dispersive
