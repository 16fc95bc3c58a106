#pragma once

#include <cmath>
#include <vector>

namespace dispersolve {

/// p(x) e^{mu x} with all derivatives in closed form.
struct PolyExp {
    std::vector<double> coeffs;  // ascending powers
    double mu = 0;

    template <typename T>
    T operator()(T x, int order = 0) const {
        // D^n (p e^{mu x}) = e^{mu x} sum_i C(n,i) mu^{n-i} p^{(i)}
        std::vector<T> p(coeffs.begin(), coeffs.end());
        T sum = 0;
        T binom = 1;
        for (int i = 0; i <= order; ++i) {
            T value = 0;
            for (auto it = p.rbegin(); it != p.rend(); ++it) value = value * x + *it;
            sum += binom * std::pow(T(mu), T(order - i)) * value;
            binom = binom * T(order - i) / T(i + 1);
            if (p.size() <= 1) {
                p.assign(1, T(0));
            } else {
                for (std::size_t j = 1; j < p.size(); ++j) p[j - 1] = T(j) * p[j];
                p.pop_back();
            }
        }
        return std::exp(T(mu) * x) * sum;
    }

    /// sum_{j=1}^l (-1)^{j+1} D^{2j+1}
    template <typename T>
    T dispersion(T x, int l) const {
        T s = 0;
        for (int j = 1; j <= l; ++j) s += (j % 2 == 1 ? T(1) : T(-1)) * (*this)(x, 2 * j + 1);
        return s;
    }
};

/// (x/L)^l (1 - x/L)^{l+1} e^{x/L}: satisfies every boundary condition of order l.
inline PolyExp domain_profile(int l, double L) {
    // expand (x/L)^l (1 - x/L)^{l+1} in powers of x
    std::vector<double> c(static_cast<std::size_t>(2 * l + 2), 0.0);
    double binom = 1;
    for (int i = 0; i <= l + 1; ++i) {
        c[static_cast<std::size_t>(l + i)] = binom * (i % 2 == 0 ? 1 : -1) / std::pow(L, l + i);
        binom = binom * (l + 1 - i) / (i + 1);
    }
    return PolyExp{c, 1.0 / L};
}

}  // namespace dispersolve
