#pragma once

// Analytic references for the test suites. Nothing here calls into the
// library's discretization.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

/// p(x) exp(mu x) with p given by ascending coefficients; closed under d/dx.
struct PolyExp {
    std::vector<double> coeffs;
    double mu = 0;

    template <typename T>
    T operator()(T x) const {
        T p = 0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) p = p * x + T(*it);
        return p * std::exp(T(mu) * x);
    }

    PolyExp derivative() const {
        std::vector<double> d(coeffs.size(), 0.0);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            d[i] += mu * coeffs[i];
            if (i > 0) d[i - 1] += double(i) * coeffs[i];
        }
        return {d, mu};
    }

    PolyExp derivative(int n) const {
        PolyExp r = *this;
        for (int i = 0; i < n; ++i) r = r.derivative();
        return r;
    }

    PolyExp operator*(const PolyExp& o) const {
        std::vector<double> c(coeffs.size() + o.coeffs.size() - 1, 0.0);
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            for (std::size_t j = 0; j < o.coeffs.size(); ++j) c[i + j] += coeffs[i] * o.coeffs[j];
        return {c, mu + o.mu};
    }
};

/// Polynomial with ascending coefficients.
inline PolyExp poly(std::vector<double> c) { return {std::move(c), 0.0}; }

/// x^a (1 - x)^b.
inline PolyExp bump(int a, int b) {
    PolyExp r = poly({1.0});
    for (int i = 0; i < a; ++i) r = r * poly({0.0, 1.0});
    for (int i = 0; i < b; ++i) r = r * poly({1.0, -1.0});
    return r;
}

/// sum_{j=1}^l (-1)^{j+1} D^{2j+1} f, evaluated symbolically.
inline std::function<double(double)> dispersion(const PolyExp& f, int l) {
    std::vector<PolyExp> terms;
    for (int j = 1; j <= l; ++j) terms.push_back(f.derivative(2 * j + 1));
    return [terms](double x) {
        double s = 0;
        for (std::size_t j = 0; j < terms.size(); ++j) s += (j % 2 == 0 ? 1.0 : -1.0) * terms[j](x);
        return s;
    };
}

/// Composite 5-point Gauss-Legendre quadrature on [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b, int panels = 400) {
    static const double xs[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                 0.9061798459386640};
    static const double ws[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                 0.2369268850561891, 0.2369268850561891};
    const double h = (b - a) / panels;
    double s = 0;
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * h;
        for (int i = 0; i < 5; ++i) s += ws[i] * f(c + 0.5 * h * xs[i]);
    }
    return 0.5 * h * s;
}

inline double observed_order(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace oracle
