#include "doctest.h"
#include "oracles.hpp"

#include "dispersive/dispersion_operator.hpp"
#include "dispersive/random_fields.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace dispersive;

namespace {

/// Max interior error of A_h f against the symbolic operator.
template <typename Scalar = double>
double interior_error(int l, int n, const oracle::PolyExp& f) {
    Grid<Scalar> g(1, n);
    const auto a = assemble(l, g);
    const auto au = apply(a, GridFunction<Scalar>::sample(g, [&](Scalar x) { return f(x); }));
    std::vector<oracle::PolyExp> terms;
    for (int j = 1; j <= l; ++j) terms.push_back(f.derivative(2 * j + 1));
    Scalar err = 0;
    for (int i = 1; i <= n; ++i) {
        Scalar exact = 0;
        for (int j = 0; j < l; ++j) exact += (j % 2 == 0 ? 1 : -1) * terms[static_cast<std::size_t>(j)](g.node(i));
        err = std::max(err, std::abs(au.at(i) - exact));
    }
    return static_cast<double>(err);
}

}  // namespace

TEST_CASE("assembly rejects coarse grids and bad orders") {
    CHECK_THROWS_AS(assemble(1, Grid<>(1.0, 6)), SizingError);
    CHECK_NOTHROW(assemble(1, Grid<>(1.0, 7)));
    CHECK_THROWS_AS(assemble(2, Grid<>(1.0, 10)), SizingError);
    CHECK_THROWS_AS(assemble(0, Grid<>(1.0, 40)), ParameterError);
}

TEST_CASE("closure encodes 2l+1 conditions") {
    for (int l = 1; l <= 4; ++l) {
        const auto a = assemble(l, Grid<>(1.0, 64));
        CHECK(a.closure().left_conditions + a.closure().right_conditions == 2 * l + 1);
        CHECK(a.closure().left.size() == static_cast<std::size_t>(l + 1));
        CHECK(a.closure().right.size() == static_cast<std::size_t>(l + 1));
    }
}

TEST_CASE("bandwidth is l+1 away from the closure rows") {
    for (int l = 1; l <= 3; ++l) {
        const int n = 80;
        const auto a = assemble(l, Grid<>(1.0, n));
        CHECK(bandwidth(a.bands(), 2 * l + 1, n - 2 * l - 2) == l + 1);
        CHECK(a.bands().lower() <= l + 2);
        CHECK(a.bands().upper() <= l + 2);
    }
}

TEST_CASE("KdV operator: zero, linearity, and D^3 of x^2 (1-x)^2") {
    Grid<> g(1.0, 100);
    const auto a = assemble(1, g);
    CHECK(apply(a, GridFunction<>(g)).values().cwiseAbs().maxCoeff() == 0.0);

    std::mt19937_64 rng(1);
    auto field = SmoothRandomField<>::domain(1);
    auto u = field(g, rng), v = field(g, rng);
    const auto lhs = apply(a, u + v);
    const auto rhs = apply(a, u) + apply(a, v);
    CHECK((lhs.values() - rhs.values()).cwiseAbs().maxCoeff() <= 1e-12 * (1 + lhs.values().cwiseAbs().maxCoeff()));

    const double h = g.spacing();
    // D^3 [x^2 (1-x)^2] = 24x - 12
    CHECK(interior_error(1, 100, oracle::bump(2, 2)) <= 10.0 * h * h);
}

TEST_CASE("Kawahara operator D^3 - D^5 on x^3 (1-x)^3 converges at second order") {
    // extended precision keeps h^-5 rounding below the truncation error at N = 256
    const double e1 = interior_error<long double>(2, 64, oracle::bump(3, 3));
    const double e2 = interior_error<long double>(2, 128, oracle::bump(3, 3));
    const double e3 = interior_error<long double>(2, 256, oracle::bump(3, 3));
    CHECK(oracle::observed_order(e1, e2) >= 1.7);
    CHECK(oracle::observed_order(e2, e3) >= 1.7);
}

TEST_CASE("consistency on smooth functions in the domain, l = 1..3") {
    for (int l = 1; l <= 3; ++l) {
        // x^l (1-x)^{l+1} e^{x}: satisfies all 2l+1 conditions
        oracle::PolyExp f = oracle::bump(l, l + 1);
        f.mu = 1.0;
        const double e1 = interior_error<long double>(l, 48, f);
        const double e2 = interior_error<long double>(l, 96, f);
        INFO("l = " << l << " errors " << e1 << " " << e2);
        CHECK(oracle::observed_order(e1, e2) >= 1.7);
    }
}

TEST_CASE("dissipation residual") {
    Grid<> g(1.0, 64);
    const auto a = assemble(1, g);
    CHECK(dissipation_residual(a, GridFunction<>(g)) == 0.0);

    // (A u, u) = (1/2)(Du(0))^2 = 1/2 for u = x (1-x)^2
    const auto f = oracle::bump(1, 2);
    CHECK(oracle::integrate([&](double x) { return f(x) * f.derivative(3)(x); }, 0, 1) == doctest::Approx(0.5));
    double prev = 0;
    for (int n : {64, 128, 256}) {
        Grid<> gn(1.0, n);
        const double r = std::abs(dissipation_residual(assemble(1, gn), GridFunction<>::sample(gn, f)));
        CHECK(r <= gn.spacing());
        if (prev > 0) CHECK(r < prev);
        prev = r;
    }
}

TEST_CASE("dissipation residual shrinks for random smooth members of the domain") {
    std::mt19937_64 rng(21);
    for (int l = 1; l <= 2; ++l) {
        for (int trial = 0; trial < 5; ++trial) {
            const auto seed = rng();
            std::vector<double> res;
            for (int n : {128, 256}) {
                std::mt19937_64 local(seed);
                Grid<> g(1.0, n);
                res.push_back(std::abs(dissipation_residual(assemble(l, g), SmoothRandomField<>::domain(l, 4)(g, local))));
            }
            CHECK(res[1] < res[0]);
        }
    }
}

TEST_CASE("near-dissipativity on smooth functions and spectrum in the right half-plane") {
    for (int l = 1; l <= 2; ++l) {
        std::vector<double> worst;
        for (int n : {64, 128, 256}) {
            std::mt19937_64 rng(7);
            Grid<> g(1.0, n);
            const auto a = assemble(l, g);
            double w = 0;
            for (int t = 0; t < 20; ++t) {
                const auto u = SmoothRandomField<>::domain(l, 4)(g, rng);
                w = std::min(w, inner(apply(a, u), u) / inner(u, u));
            }
            worst.push_back(-w);
        }
        INFO("l = " << l);
        CHECK(worst[2] <= worst[0]);

        const auto a = assemble(l, Grid<>(1.0, 48));
        const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(a.bands().dense()).eigenvalues();
        CHECK(ev.real().minCoeff() > 0.0);
    }
}
