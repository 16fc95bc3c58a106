#pragma once

#include "dispersive/error.hpp"
#include "dispersive/stencil.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace dispersive {

/// Uniform partition of (0, L) with N interior nodes x_i = i h, i = 1..N,
/// and boundary nodes x_0 = 0, x_{N+1} = L.
template <typename Scalar = double>
class Grid {
public:
    Grid(Scalar length, int interior_nodes) : L_(length), N_(interior_nodes) {
        if (!(length > 0) || !std::isfinite(static_cast<double>(length))) {
            throw ParameterError("grid length must be positive and finite");
        }
        if (interior_nodes < 2) {
            throw SizingError("grid needs at least 2 interior nodes, got " + std::to_string(interior_nodes));
        }
        h_ = L_ / Scalar(N_ + 1);
    }

    Scalar length() const { return L_; }
    int size() const { return N_; }
    Scalar spacing() const { return h_; }

    /// Coordinate of node i, i = 0..N+1.
    Scalar node(int i) const { return i == N_ + 1 ? L_ : Scalar(i) * h_; }

    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> interior_nodes() const {
        return Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::LinSpaced(N_, h_, Scalar(N_) * h_);
    }

    /// Throws SizingError unless the grid admits a stencil of the given order l.
    void require_order(int l) const {
        if (N_ < 4 * l + 3) {
            throw SizingError("grid with N = " + std::to_string(N_) + " is too coarse for l = " + std::to_string(l) +
                              " (need N >= " + std::to_string(4 * l + 3) + ")");
        }
    }

    friend bool operator==(const Grid& a, const Grid& b) { return a.N_ == b.N_ && a.L_ == b.L_; }

private:
    Scalar L_;
    int N_;
    Scalar h_;
};

/// Nodal samples of a function on a Grid: N interior values plus the two
/// boundary values (zero unless set explicitly).
template <typename Scalar = double>
class GridFunction {
public:
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    explicit GridFunction(const Grid<Scalar>& grid) : grid_(grid), values_(Vector::Zero(grid.size())) {}

    GridFunction(const Grid<Scalar>& grid, Vector values, Scalar left = 0, Scalar right = 0)
        : grid_(grid), values_(std::move(values)), left_(left), right_(right) {
        if (values_.size() != grid_.size()) {
            throw ShapeError("grid function has " + std::to_string(values_.size()) + " values, grid has " +
                             std::to_string(grid_.size()));
        }
    }

    /// Samples f at every node, including both boundary nodes.
    static GridFunction sample(const Grid<Scalar>& grid, const std::function<Scalar(Scalar)>& f) {
        Vector v(grid.size());
        for (int i = 1; i <= grid.size(); ++i) v(i - 1) = f(grid.node(i));
        return GridFunction(grid, std::move(v), f(Scalar(0)), f(grid.length()));
    }

    /// Samples f at interior nodes; boundary values are left at zero.
    static GridFunction sample_interior(const Grid<Scalar>& grid, const std::function<Scalar(Scalar)>& f) {
        Vector v(grid.size());
        for (int i = 1; i <= grid.size(); ++i) v(i - 1) = f(grid.node(i));
        return GridFunction(grid, std::move(v));
    }

    const Grid<Scalar>& grid() const { return grid_; }
    const Vector& values() const { return values_; }
    Vector& values() { return values_; }
    Scalar left() const { return left_; }
    Scalar right() const { return right_; }
    void set_boundary(Scalar left, Scalar right) {
        left_ = left;
        right_ = right;
    }

    /// Value at node i = 0..N+1.
    Scalar at(int i) const {
        if (i == 0) return left_;
        if (i == grid_.size() + 1) return right_;
        return values_(i - 1);
    }

    /// All N+2 nodal values.
    Vector full() const {
        Vector out(grid_.size() + 2);
        out(0) = left_;
        out.segment(1, grid_.size()) = values_;
        out(grid_.size() + 1) = right_;
        return out;
    }

    bool all_finite() const {
        return values_.allFinite() && std::isfinite(static_cast<double>(left_)) &&
               std::isfinite(static_cast<double>(right_));
    }

    GridFunction& operator+=(const GridFunction& o) {
        check_same_grid(o);
        values_ += o.values_;
        left_ += o.left_;
        right_ += o.right_;
        return *this;
    }
    GridFunction& operator-=(const GridFunction& o) {
        check_same_grid(o);
        values_ -= o.values_;
        left_ -= o.left_;
        right_ -= o.right_;
        return *this;
    }
    GridFunction& operator*=(Scalar a) {
        values_ *= a;
        left_ *= a;
        right_ *= a;
        return *this;
    }

    friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
    friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
    friend GridFunction operator*(Scalar s, GridFunction a) { return a *= s; }
    friend GridFunction operator*(GridFunction a, Scalar s) { return a *= s; }

    void check_same_grid(const GridFunction& o) const {
        if (!(grid_ == o.grid_)) throw ShapeError("grid functions live on different grids");
    }

private:
    Grid<Scalar> grid_;
    Vector values_;
    Scalar left_ = 0;
    Scalar right_ = 0;
};

/// Norms of one grid function. l2 and seminorms are plain norms, weighted_l2
/// is the squared pairing (1+x, u^2).
template <typename Scalar = double>
struct NormReport {
    Scalar l2 = 0;
    Scalar weighted_l2 = 0;
    std::vector<Scalar> seminorms;  // seminorms[j-1] = ||D^j u||
    Scalar sup = 0;

    /// Sum of squares of ||D^j u||, j = 0..m.
    Scalar sobolev_squared(int m) const {
        Scalar s = l2 * l2;
        for (int j = 1; j <= m; ++j) s += seminorms.at(static_cast<std::size_t>(j - 1)) * seminorms.at(static_cast<std::size_t>(j - 1));
        return s;
    }
};

/// Composite trapezoid rule over all N+2 nodes.
template <typename Scalar>
Scalar trapezoid(const Grid<Scalar>& grid, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& full_values) {
    const auto n = full_values.size();
    return grid.spacing() * (full_values.sum() - Scalar(0.5) * (full_values(0) + full_values(n - 1)));
}

/// Plain L2 pairing (u, v) by the trapezoid rule.
template <typename Scalar>
Scalar inner(const GridFunction<Scalar>& u, const GridFunction<Scalar>& v) {
    u.check_same_grid(v);
    return trapezoid(u.grid(), Eigen::Matrix<Scalar, Eigen::Dynamic, 1>(u.full().cwiseProduct(v.full())));
}

/// Weighted pairing int_0^L (1+x) u v dx by the trapezoid rule.
template <typename Scalar>
Scalar weighted_inner(const GridFunction<Scalar>& u, const GridFunction<Scalar>& v) {
    u.check_same_grid(v);
    const auto& grid = u.grid();
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x(grid.size() + 2);
    for (int i = 0; i < grid.size() + 2; ++i) x(i) = Scalar(1) + grid.node(i);
    return trapezoid(grid, Eigen::Matrix<Scalar, Eigen::Dynamic, 1>(x.cwiseProduct(u.full()).cwiseProduct(v.full())));
}

template <typename Scalar>
Scalar l2_norm(const GridFunction<Scalar>& u) {
    return std::sqrt(std::max(Scalar(0), inner(u, u)));
}

/// Second-order approximation of D^order u at every node, returned with the
/// boundary-node derivatives stored as boundary values. Centered stencils in
/// the interior, shifted (one-sided) stencils of order+2 points near the ends.
template <typename Scalar>
GridFunction<Scalar> diff(const GridFunction<Scalar>& u, int order) {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    if (order < 1) throw ParameterError("derivative order must be >= 1");
    const auto& grid = u.grid();
    const int nodes = grid.size() + 2;
    const int one_sided = order + 2;
    if (nodes < one_sided) {
        throw SizingError("grid with N = " + std::to_string(grid.size()) + " cannot resolve derivative of order " +
                          std::to_string(order));
    }
    const int half = (order + 1) / 2;
    const Scalar scale = Scalar(1) / std::pow(grid.spacing(), order);
    const Vector centered = unit_weights<Scalar>(-half, 2 * half + 1, order) * scale;
    const Vector full = u.full();

    Vector out(nodes);
    for (int i = 0; i < nodes; ++i) {
        if (i - half >= 0 && i + half < nodes) {
            out(i) = centered.dot(full.segment(i - half, 2 * half + 1));
            continue;
        }
        const int start = std::clamp(i - half, 0, nodes - one_sided);
        const Vector w = unit_weights<Scalar>(start - i, one_sided, order) * scale;
        out(i) = w.dot(full.segment(start, one_sided));
    }
    return GridFunction<Scalar>(grid, out.segment(1, grid.size()), out(0), out(nodes - 1));
}

/// L2, weighted L2, sup and the seminorms ||D^j u||, j = 1..m.
template <typename Scalar>
NormReport<Scalar> norms(const GridFunction<Scalar>& u, int m) {
    if (m < 0) throw ParameterError("seminorm order must be >= 0");
    NormReport<Scalar> r;
    r.l2 = l2_norm(u);
    r.weighted_l2 = weighted_inner(u, u);
    r.sup = u.full().cwiseAbs().maxCoeff();
    r.seminorms.reserve(static_cast<std::size_t>(m));
    for (int j = 1; j <= m; ++j) r.seminorms.push_back(l2_norm(diff(u, j)));
    return r;
}

/// ||u||^2_{H^m} = sum_{j=0}^m ||D^j u||^2.
template <typename Scalar>
Scalar sobolev_squared(const GridFunction<Scalar>& u, int m) {
    return norms(u, m).sobolev_squared(m);
}

}  // namespace dispersive
