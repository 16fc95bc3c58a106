#pragma once

#include "dispersive/grid.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace dispersive {

/// Smooth random functions that meet boundary conditions exactly: a random
/// trigonometric series with 1/q^2 decay times a polynomial envelope.
template <typename Scalar = double>
class SmoothRandomField {
public:
    /// Envelope x^left (L - x)^right.
    SmoothRandomField(int left_order, int right_order, int modes = 8)
        : left_(left_order), right_(right_order), modes_(modes) {}

    /// Vanishing of u .. D^{l-1} u at both ends.
    static SmoothRandomField h0(int l, int modes = 8) { return SmoothRandomField(l, l, modes); }
    /// Additionally D^l u(L) = 0.
    static SmoothRandomField domain(int l, int modes = 8) { return SmoothRandomField(l, l + 1, modes); }

    template <typename Rng>
    GridFunction<Scalar> operator()(const Grid<Scalar>& grid, Rng& rng) const {
        std::normal_distribution<double> normal(0.0, 1.0);
        std::vector<Scalar> a(static_cast<std::size_t>(modes_ + 1)), b(static_cast<std::size_t>(modes_ + 1));
        for (int q = 0; q <= modes_; ++q) {
            const Scalar decay = Scalar(1) / Scalar((q + 1) * (q + 1));
            a[static_cast<std::size_t>(q)] = Scalar(normal(rng)) * decay;
            b[static_cast<std::size_t>(q)] = Scalar(normal(rng)) * decay;
        }
        const Scalar L = grid.length();
        const Scalar scale = std::pow(Scalar(2) / L, left_ + right_);
        auto f = [&](Scalar x) {
            Scalar s = 0;
            for (int q = 0; q <= modes_; ++q) {
                const Scalar w = Scalar(q) * std::numbers::pi_v<Scalar> * x / L;
                s += a[static_cast<std::size_t>(q)] * std::cos(w) + b[static_cast<std::size_t>(q)] * std::sin(w);
            }
            return s * std::pow(x, left_) * std::pow(L - x, right_) * scale;
        };
        return GridFunction<Scalar>::sample(grid, f);
    }

private:
    int left_;
    int right_;
    int modes_;
};

}  // namespace dispersive
