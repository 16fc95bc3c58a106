#pragma once

#include "dispersive/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace dispersive {

/// Square band matrix with kl sub- and ku super-diagonals. Entry (i, j) is
/// kept at storage(ku + i - j, j), the LAPACK general-band layout.
template <typename Scalar = double>
class BandedMatrix {
public:
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using Storage = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    BandedMatrix() = default;
    BandedMatrix(int n, int kl, int ku) : n_(n), kl_(kl), ku_(ku), ab_(Storage::Zero(kl + ku + 1, n)) {}

    int rows() const { return n_; }
    int lower() const { return kl_; }
    int upper() const { return ku_; }

    bool in_band(int i, int j) const { return j - i <= ku_ && i - j <= kl_; }

    Scalar operator()(int i, int j) const { return in_band(i, j) ? ab_(ku_ + i - j, j) : Scalar(0); }
    Scalar& ref(int i, int j) { return ab_(ku_ + i - j, j); }

    const Storage& storage() const { return ab_; }

    Vector operator*(const Vector& x) const {
        Vector y = Vector::Zero(n_);
        for (int j = 0; j < n_; ++j) {
            const int i0 = std::max(0, j - ku_);
            const int i1 = std::min(n_ - 1, j + kl_);
            for (int i = i0; i <= i1; ++i) y(i) += ab_(ku_ + i - j, j) * x(j);
        }
        return y;
    }

    BandedMatrix scaled(Scalar s) const {
        BandedMatrix out = *this;
        out.ab_ *= s;
        return out;
    }

    /// Returns a*I + this.
    BandedMatrix shifted(Scalar a) const {
        BandedMatrix out = *this;
        for (int i = 0; i < n_; ++i) out.ref(i, i) += a;
        return out;
    }

    /// Maximum absolute column sum.
    Scalar norm1() const { return ab_.cwiseAbs().colwise().sum().maxCoeff(); }

    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dense() const {
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> d =
            Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n_, n_);
        for (int j = 0; j < n_; ++j)
            for (int i = std::max(0, j - ku_); i <= std::min(n_ - 1, j + kl_); ++i) d(i, j) = (*this)(i, j);
        return d;
    }

private:
    int n_ = 0;
    int kl_ = 0;
    int ku_ = 0;
    Storage ab_;
};

/// LU factorization with partial pivoting of a band matrix (unblocked gbtrf).
/// Row interchanges widen the upper band of U to kl + ku.
template <typename Scalar = double>
class BandedLU {
public:
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    explicit BandedLU(const BandedMatrix<Scalar>& a)
        : n_(a.rows()), kl_(a.lower()), ku_(a.upper()), kv_(a.lower() + a.upper()), anorm_(a.norm1()) {
        lu_ = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(2 * kl_ + ku_ + 1, n_);
        lu_.bottomRows(kl_ + ku_ + 1) = a.storage();
        piv_.resize(static_cast<std::size_t>(n_));
        factor();
    }

    int size() const { return n_; }

    /// Smallest |u_jj| met during elimination.
    Scalar min_pivot() const { return min_pivot_; }
    Scalar max_pivot() const { return max_pivot_; }
    bool singular() const { return singular_; }

    Vector solve(Vector b) const {
        check(b);
        for (int j = 0; j < n_; ++j) {
            const int km = std::min(kl_, n_ - 1 - j);
            const int p = piv_[static_cast<std::size_t>(j)];
            if (p != j) std::swap(b(p), b(j));
            for (int i = j + 1; i <= j + km; ++i) b(i) -= at(i, j) * b(j);
        }
        for (int j = n_ - 1; j >= 0; --j) {
            b(j) /= at(j, j);
            for (int i = std::max(0, j - kv_); i < j; ++i) b(i) -= at(i, j) * b(j);
        }
        return b;
    }

    /// Solves A^T x = b with the same factors.
    Vector solve_transposed(Vector b) const {
        check(b);
        for (int j = 0; j < n_; ++j) {
            Scalar s = b(j);
            for (int i = std::max(0, j - kv_); i < j; ++i) s -= at(i, j) * b(i);
            b(j) = s / at(j, j);
        }
        for (int j = n_ - 1; j >= 0; --j) {
            const int km = std::min(kl_, n_ - 1 - j);
            for (int i = j + 1; i <= j + km; ++i) b(j) -= at(i, j) * b(i);
            const int p = piv_[static_cast<std::size_t>(j)];
            if (p != j) std::swap(b(p), b(j));
        }
        return b;
    }

    /// 1-norm condition estimate ||A||_1 ||A^{-1}||_1 (Hager's method).
    Scalar condition_estimate() const {
        if (singular_) return std::numeric_limits<Scalar>::infinity();
        Vector x = Vector::Constant(n_, Scalar(1) / Scalar(n_));
        Scalar est = 0;
        int last = -1;
        for (int iter = 0; iter < 5; ++iter) {
            const Vector y = solve(x);
            est = y.cwiseAbs().sum();
            Vector xi(n_);
            for (int i = 0; i < n_; ++i) xi(i) = y(i) >= 0 ? Scalar(1) : Scalar(-1);
            const Vector z = solve_transposed(xi);
            Eigen::Index jmax = 0;
            const Scalar zmax = z.cwiseAbs().maxCoeff(&jmax);
            if (zmax <= z.dot(x) || static_cast<int>(jmax) == last) break;
            last = static_cast<int>(jmax);
            x.setZero();
            x(jmax) = 1;
        }
        return anorm_ * est;
    }

private:
    Scalar& at(int i, int j) { return lu_(kv_ + i - j, j); }
    Scalar at(int i, int j) const { return lu_(kv_ + i - j, j); }

    void check(const Vector& b) const {
        if (b.size() != n_) throw ShapeError("right-hand side length does not match the factorization");
        if (singular_) throw NumericalFailure("solve with a singular band factorization");
    }

    void factor() {
        int ju = 0;
        min_pivot_ = std::numeric_limits<Scalar>::infinity();
        max_pivot_ = 0;
        for (int j = 0; j < n_; ++j) {
            const int km = std::min(kl_, n_ - 1 - j);
            int p = j;
            Scalar best = std::abs(at(j, j));
            for (int i = j + 1; i <= j + km; ++i) {
                if (std::abs(at(i, j)) > best) {
                    best = std::abs(at(i, j));
                    p = i;
                }
            }
            piv_[static_cast<std::size_t>(j)] = p;
            min_pivot_ = std::min(min_pivot_, best);
            max_pivot_ = std::max(max_pivot_, best);
            if (best == Scalar(0)) {
                singular_ = true;
                continue;
            }
            ju = std::max(ju, std::min(p + ku_, n_ - 1));
            if (p != j)
                for (int c = j; c <= ju; ++c) std::swap(at(p, c), at(j, c));
            if (km == 0) continue;
            const Scalar inv = Scalar(1) / at(j, j);
            for (int i = j + 1; i <= j + km; ++i) at(i, j) *= inv;
            for (int c = j + 1; c <= ju; ++c) {
                const Scalar ujc = at(j, c);
                if (ujc == Scalar(0)) continue;
                for (int i = j + 1; i <= j + km; ++i) at(i, c) -= at(i, j) * ujc;
            }
        }
    }

    int n_;
    int kl_;
    int ku_;
    int kv_;
    Scalar anorm_;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> lu_;
    std::vector<int> piv_;
    Scalar min_pivot_ = 0;
    Scalar max_pivot_ = 0;
    bool singular_ = false;
};

/// Factorizes `a` and rejects it when the condition estimate exceeds `max_condition`.
template <typename Scalar>
BandedLU<Scalar> guarded_factorization(const BandedMatrix<Scalar>& a, Scalar max_condition) {
    BandedLU<Scalar> lu(a);
    if (lu.singular()) {
        throw NumericalFailure("band factorization is singular (zero pivot)");
    }
    const Scalar cond = lu.condition_estimate();
    if (!(cond <= max_condition)) {
        std::ostringstream msg;
        msg << "band factorization is ill-conditioned: condition estimate " << static_cast<double>(cond)
            << ", smallest pivot " << static_cast<double>(lu.min_pivot());
        throw NumericalFailure(msg.str());
    }
    return lu;
}

}  // namespace dispersive
