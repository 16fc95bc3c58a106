#include "doctest.h"

#include "dispersive/banded.hpp"

#include <Eigen/Dense>

#include <random>

using namespace dispersive;

namespace {

BandedMatrix<> random_band(int n, int kl, int ku, std::mt19937_64& rng, double diag_boost) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    BandedMatrix<> a(n, kl, ku);
    for (int i = 0; i < n; ++i)
        for (int j = std::max(0, i - kl); j <= std::min(n - 1, i + ku); ++j) a.ref(i, j) = u(rng) + (i == j ? diag_boost : 0.0);
    return a;
}

}  // namespace

TEST_CASE("band solve agrees with a dense solve, including pivoting") {
    std::mt19937_64 rng(5);
    for (auto [n, kl, ku] : {std::tuple{12, 1, 1}, {30, 3, 2}, {40, 2, 5}, {25, 4, 4}, {9, 0, 3}, {9, 3, 0}}) {
        // no diagonal boost: pivoting is exercised
        const auto a = random_band(n, kl, ku, rng, 0.0);
        const Eigen::MatrixXd d = a.dense();
        const Eigen::VectorXd b = Eigen::VectorXd::Random(n);
        BandedLU<> lu(a);
        REQUIRE_FALSE(lu.singular());
        const Eigen::VectorXd x = lu.solve(b);
        const Eigen::VectorXd ref = d.fullPivLu().solve(b);
        CHECK((x - ref).norm() <= 1e-9 * (1 + ref.norm()));
        const Eigen::VectorXd xt = lu.solve_transposed(b);
        const Eigen::VectorXd reft = d.transpose().fullPivLu().solve(b);
        CHECK((xt - reft).norm() <= 1e-9 * (1 + reft.norm()));
        CHECK((a * x - b).norm() <= 1e-9 * (1 + b.norm()));
    }
}

TEST_CASE("condition estimate is a usable lower bound") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_band(30, 2, 3, rng, 0.5);
        const Eigen::MatrixXd d = a.dense();
        const double exact = d.cwiseAbs().colwise().sum().maxCoeff() * d.inverse().cwiseAbs().colwise().sum().maxCoeff();
        const double est = BandedLU<>(a).condition_estimate();
        CHECK(est <= exact * (1 + 1e-10));
        CHECK(est >= exact / 10.0);
    }
}

TEST_CASE("singular and ill-conditioned matrices are rejected") {
    BandedMatrix<> z(5, 1, 1);
    CHECK(BandedLU<>(z).singular());
    CHECK_THROWS_AS(guarded_factorization(z, 1e14), NumericalFailure);

    BandedMatrix<> nearly(4, 0, 0);
    for (int i = 0; i < 4; ++i) nearly.ref(i, i) = 1.0;
    nearly.ref(3, 3) = 1e-16;
    CHECK_THROWS_AS(guarded_factorization(nearly, 1e14), NumericalFailure);
    CHECK_NOTHROW(guarded_factorization(nearly, 1e17));

    BandedLU<> lu(BandedMatrix<>(3, 1, 1).shifted(1.0));
    CHECK_THROWS_AS(lu.solve(Eigen::VectorXd::Ones(4)), ShapeError);
}
