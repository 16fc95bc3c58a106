#pragma once

#include "dispersive/banded.hpp"
#include "dispersive/grid.hpp"
#include "dispersive/stencil.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <utility>
#include <vector>

namespace dispersive {

/// A node outside the unknown set (boundary node or ghost node) written as a
/// linear combination of interior values.
template <typename Scalar>
struct GhostRow {
    int node;                                       // 0, -1, ... on the left; N+1, N+2, ... on the right
    std::vector<std::pair<int, Scalar>> weights;    // (interior node 1..N, coefficient)
};

/// Eliminated boundary conditions. On the left D^i u(0) = 0, i < l; on the
/// right D^i u(L) = 0, i <= l. The ghost values come from the unique
/// polynomial of degree 2l+2 meeting those conditions and interpolating the
/// nearest interior nodes, so ghost values carry O(h^{2l+3}) error.
template <typename Scalar>
struct BoundaryClosure {
    int left_conditions = 0;
    int right_conditions = 0;
    std::vector<GhostRow<Scalar>> left;
    std::vector<GhostRow<Scalar>> right;
};

namespace detail {

template <typename Scalar>
std::vector<GhostRow<Scalar>> ghost_rows(int conditions, const std::vector<int>& interp_nodes,
                                         const std::vector<int>& ghosts, int boundary_node) {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    const int ni = static_cast<int>(interp_nodes.size());
    const int dim = conditions + ni;

    // Monomials in s = (x - x_b)/h; derivative conditions have zero data.
    Matrix m = Matrix::Zero(dim, dim);
    Scalar factorial = 1;
    for (int i = 0; i < conditions; ++i) {
        if (i > 0) factorial *= Scalar(i);
        m(i, i) = factorial;
    }
    for (int r = 0; r < ni; ++r) {
        const Scalar s = Scalar(interp_nodes[static_cast<std::size_t>(r)] - boundary_node);
        Scalar p = 1;
        for (int c = 0; c < dim; ++c, p *= s) m(conditions + r, c) = p;
    }
    const Matrix inv = m.fullPivLu().inverse();

    std::vector<GhostRow<Scalar>> rows;
    for (int g : ghosts) {
        const Scalar s = Scalar(g - boundary_node);
        Vector phi(dim);
        Scalar p = 1;
        for (int c = 0; c < dim; ++c, p *= s) phi(c) = p;
        const Vector coeff = inv.transpose() * phi;
        GhostRow<Scalar> row{g, {}};
        for (int r = 0; r < ni; ++r) {
            const Scalar w = coeff(conditions + r);
            if (w != Scalar(0)) row.weights.emplace_back(interp_nodes[static_cast<std::size_t>(r)], w);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace detail

template <typename Scalar>
BoundaryClosure<Scalar> make_closure(int l, int n) {
    BoundaryClosure<Scalar> bc;
    bc.left_conditions = l;
    bc.right_conditions = l + 1;
    const int degree = 2 * l + 2;

    std::vector<int> left_nodes, left_ghosts;
    for (int i = 1; i <= degree + 1 - l; ++i) left_nodes.push_back(i);
    for (int g = 0; g >= -l; --g) left_ghosts.push_back(g);
    bc.left = detail::ghost_rows<Scalar>(l, left_nodes, left_ghosts, 0);

    std::vector<int> right_nodes, right_ghosts;
    for (int i = n; i > n - (degree - l); --i) right_nodes.push_back(i);
    for (int g = n + 1; g <= n + l + 1; ++g) right_ghosts.push_back(g);
    bc.right = detail::ghost_rows<Scalar>(l + 1, right_nodes, right_ghosts, n + 1);
    return bc;
}

/// Discrete A = sum_{j=1}^l (-1)^{j+1} D^{2j+1} on interior nodes with the
/// 2l+1 boundary conditions eliminated.
template <typename Scalar = double>
class DispersionOperator {
public:
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    DispersionOperator(int l, Grid<Scalar> grid, BandedMatrix<Scalar> bands, BoundaryClosure<Scalar> closure)
        : l_(l), grid_(std::move(grid)), bands_(std::move(bands)), closure_(std::move(closure)) {}

    int order() const { return l_; }
    const Grid<Scalar>& grid() const { return grid_; }
    const BandedMatrix<Scalar>& bands() const { return bands_; }
    const BoundaryClosure<Scalar>& closure() const { return closure_; }

    /// Value the closure assigns to a boundary or ghost node.
    Scalar ghost_value(const Vector& interior, int node) const {
        for (const auto* side : {&closure_.left, &closure_.right}) {
            for (const auto& row : *side) {
                if (row.node != node) continue;
                Scalar v = 0;
                for (const auto& [i, w] : row.weights) v += w * interior(i - 1);
                return v;
            }
        }
        throw ParameterError("node " + std::to_string(node) + " is not a ghost node");
    }

private:
    int l_;
    Grid<Scalar> grid_;
    BandedMatrix<Scalar> bands_;
    BoundaryClosure<Scalar> closure_;
};

template <typename Scalar>
DispersionOperator<Scalar> assemble(int l, const Grid<Scalar>& grid) {
    if (l < 1) throw ParameterError("dispersion order l must be >= 1");
    grid.require_order(l);
    const int n = grid.size();
    const auto closure = make_closure<Scalar>(l, n);

    std::vector<std::map<int, Scalar>> rows(static_cast<std::size_t>(n));
    auto add = [&](int row, int node, Scalar w) {
        auto& r = rows[static_cast<std::size_t>(row - 1)];
        if (node >= 1 && node <= n) {
            r[node] += w;
            return;
        }
        const auto& side = node < 1 ? closure.left : closure.right;
        for (const auto& g : side) {
            if (g.node != node) continue;
            for (const auto& [i, c] : g.weights) r[i] += w * c;
            return;
        }
        throw SizingError("stencil reaches beyond the eliminated ghost nodes");
    };

    for (int j = 1; j <= l; ++j) {
        const int m = 2 * j + 1;
        const int half = j + 1;
        const Scalar sign = (j % 2 == 1) ? Scalar(1) : Scalar(-1);
        const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> w = unit_weights<Scalar>(-half, 2 * half + 1, m) * (sign / std::pow(grid.spacing(), m));
        for (int i = 1; i <= n; ++i)
            for (int o = -half; o <= half; ++o) add(i, i + o, w(o + half));
    }

    int kl = 0, ku = 0;
    for (int i = 1; i <= n; ++i) {
        for (const auto& [c, v] : rows[static_cast<std::size_t>(i - 1)]) {
            if (v == Scalar(0)) continue;
            kl = std::max(kl, i - c);
            ku = std::max(ku, c - i);
        }
    }
    BandedMatrix<Scalar> bands(n, kl, ku);
    for (int i = 1; i <= n; ++i)
        for (const auto& [c, v] : rows[static_cast<std::size_t>(i - 1)])
            if (v != Scalar(0)) bands.ref(i - 1, c - 1) = v;
    return DispersionOperator<Scalar>(l, grid, std::move(bands), closure);
}

/// A_h u. Boundary values of the result are zero.
template <typename Scalar>
GridFunction<Scalar> apply(const DispersionOperator<Scalar>& a, const GridFunction<Scalar>& u) {
    if (!(u.grid() == a.grid())) throw ShapeError("operator and grid function live on different grids");
    return GridFunction<Scalar>(a.grid(), a.bands() * u.values());
}

/// One-sided D^l u at x = 0.
template <typename Scalar>
Scalar boundary_trace(const GridFunction<Scalar>& u, int l) {
    return diff(u, l).left();
}

/// (A_h u, u) - (1/2)(D^l_h u(0))^2; tends to zero under refinement for
/// smooth u in the operator's domain.
template <typename Scalar>
Scalar dissipation_residual(const DispersionOperator<Scalar>& a, const GridFunction<Scalar>& u) {
    const Scalar trace = boundary_trace(u, a.order());
    return inner(apply(a, u), u) - Scalar(0.5) * trace * trace;
}

/// Largest |i - j| of a nonzero entry over rows first..last (0-based, inclusive).
template <typename Scalar>
int bandwidth(const BandedMatrix<Scalar>& m, int first, int last) {
    int w = 0;
    for (int i = first; i <= last; ++i)
        for (int j = std::max(0, i - m.lower()); j <= std::min(m.rows() - 1, i + m.upper()); ++j)
            if (m(i, j) != Scalar(0)) w = std::max(w, std::abs(i - j));
    return w;
}

}  // namespace dispersive
