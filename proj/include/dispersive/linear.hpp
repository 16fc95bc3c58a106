#pragma once

#include "dispersive/banded.hpp"
#include "dispersive/dispersion_operator.hpp"
#include "dispersive/grid.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace dispersive {

/// Condition-number ceiling for every band factorization in the solvers.
inline constexpr double kMaxCondition = 1e14;

/// Time samples t_0 = 0 .. t_M of a solution and of its time derivative.
template <typename Scalar = double>
struct Trajectory {
    std::vector<Scalar> times;
    std::vector<GridFunction<Scalar>> states;
    std::vector<GridFunction<Scalar>> dstates;
    Scalar dt = 0;

    std::size_t size() const { return states.size(); }
    Scalar end_time() const { return times.empty() ? Scalar(0) : times.back(); }
    const Grid<Scalar>& grid() const { return states.front().grid(); }

    /// u0 held constant on the given time samples (u_t = 0).
    static Trajectory constant(const GridFunction<Scalar>& u0, const std::vector<Scalar>& times, Scalar dt) {
        Trajectory t;
        t.times = times;
        t.dt = dt;
        t.states.assign(times.size(), u0);
        t.dstates.assign(times.size(), GridFunction<Scalar>(u0.grid()));
        return t;
    }

    /// Largest || dstates_m - (states_{m+1} - states_{m-1}) / (2 dt) || over interior samples.
    Scalar consistency_defect() const {
        Scalar worst = 0;
        for (std::size_t m = 1; m + 1 < states.size(); ++m) {
            auto centered = (states[m + 1] - states[m - 1]) * (Scalar(1) / (times[m + 1] - times[m - 1]));
            worst = std::max(worst, l2_norm(dstates[m] - centered));
        }
        return worst;
    }
};

/// Uniform time samples 0, dt, ..., T_end with dt shrunk so the steps fit exactly.
template <typename Scalar>
std::vector<Scalar> time_samples(Scalar dt, Scalar t_end, Scalar* effective_dt = nullptr) {
    if (!(dt > 0)) throw ParameterError("time step must be positive");
    if (!(t_end > 0)) throw ParameterError("end time must be positive");
    const auto steps = static_cast<long>(std::max<Scalar>(Scalar(1), std::ceil(t_end / dt - Scalar(1e-9))));
    const Scalar step = t_end / Scalar(steps);
    std::vector<Scalar> t(static_cast<std::size_t>(steps + 1));
    for (long m = 0; m <= steps; ++m) t[static_cast<std::size_t>(m)] = step * Scalar(m);
    t.back() = t_end;
    if (effective_dt) *effective_dt = step;
    return t;
}

template <typename Scalar = double>
struct StationaryResult {
    GridFunction<Scalar> u;
    Scalar residual;     // ||(aI + A_h) u - g||
    Scalar bound_ratio;  // ||u||_{H^{2l+1}} / ||g||
};

/// Solves (aI + A_h) u = g with one step of iterative refinement.
template <typename Scalar>
StationaryResult<Scalar> stationary_solve(const DispersionOperator<Scalar>& a_op, Scalar a,
                                          const GridFunction<Scalar>& g) {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    if (!(a > 0)) throw ParameterError("stationary shift a must be positive");
    if (!(g.grid() == a_op.grid())) throw ShapeError("forcing and operator live on different grids");
    const auto shifted = a_op.bands().shifted(a);
    const auto lu = guarded_factorization(shifted, Scalar(kMaxCondition));

    Vector u = lu.solve(g.values());
    Vector r = g.values() - shifted * u;
    u += lu.solve(r);
    r = shifted * u - g.values();
    if (!u.allFinite()) throw NumericalFailure("stationary solve produced non-finite values");

    GridFunction<Scalar> sol(a_op.grid(), std::move(u));
    GridFunction<Scalar> res(a_op.grid(), std::move(r));
    const Scalar gnorm = l2_norm(g);
    const Scalar unorm = std::sqrt(sobolev_squared(sol, 2 * a_op.order() + 1));
    const Scalar ratio = gnorm > 0 ? unorm / gnorm : Scalar(0);
    return StationaryResult<Scalar>{std::move(sol), l2_norm(res), ratio};
}

template <typename Scalar>
using Forcing = std::function<GridFunction<Scalar>(Scalar)>;

namespace detail {

template <typename Scalar, typename HalfStep, typename AtSample>
Trajectory<Scalar> crank_nicolson(const DispersionOperator<Scalar>& a_op, const GridFunction<Scalar>& u0,
                                  const std::vector<Scalar>& times, Scalar dt, HalfStep&& half_step,
                                  AtSample&& at_sample) {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    if (!(u0.grid() == a_op.grid())) throw ShapeError("initial data and operator live on different grids");
    const auto& grid = a_op.grid();
    const auto half_a = a_op.bands().scaled(dt / 2);
    const auto lu = guarded_factorization(half_a.shifted(Scalar(1)), Scalar(kMaxCondition));

    Trajectory<Scalar> out;
    out.times = times;
    out.dt = dt;
    out.states.reserve(times.size());
    out.dstates.reserve(times.size());

    Vector u = u0.values();
    auto derivative = [&](const Vector& state, std::size_t m) {
        return GridFunction<Scalar>(grid, at_sample(m) - a_op.bands() * state);
    };
    out.states.emplace_back(grid, u);
    out.dstates.push_back(derivative(u, 0));
    for (std::size_t m = 0; m + 1 < times.size(); ++m) {
        Vector rhs = u - half_a * u + dt * half_step(m);
        u = lu.solve(std::move(rhs));
        if (!u.allFinite()) {
            throw NumericalFailure("non-finite state at time step " + std::to_string(m + 1));
        }
        out.states.emplace_back(grid, u);
        out.dstates.push_back(derivative(u, m + 1));
    }
    return out;
}

}  // namespace detail

/// Crank-Nicolson for u_t + A_h u = f with f evaluated at half steps.
template <typename Scalar>
Trajectory<Scalar> linear_evolve(const DispersionOperator<Scalar>& a_op, const GridFunction<Scalar>& u0,
                                 const Forcing<Scalar>& f, Scalar dt, Scalar t_end) {
    Scalar step = 0;
    const auto times = time_samples(dt, t_end, &step);
    return detail::crank_nicolson(
        a_op, u0, times, step, [&](std::size_t m) { return f(times[m] + step / 2).values(); },
        [&](std::size_t m) { return f(times[m]).values(); });
}

/// Crank-Nicolson with forcing given on the same time samples; half-step
/// values are averages of neighbouring samples.
template <typename Scalar>
Trajectory<Scalar> linear_evolve(const DispersionOperator<Scalar>& a_op, const GridFunction<Scalar>& u0,
                                 const Trajectory<Scalar>& f) {
    if (f.size() < 2) throw SizingError("forcing trajectory needs at least two samples");
    return detail::crank_nicolson(
        a_op, u0, f.times, f.dt,
        [&](std::size_t m) { return ((f.states[m].values() + f.states[m + 1].values()) / Scalar(2)).eval(); },
        [&](std::size_t m) { return f.states[m].values(); });
}

/// Same as above, with the sample times rebuilt from (dt, T_end).
template <typename Scalar>
Trajectory<Scalar> linear_evolve(const DispersionOperator<Scalar>& a_op, const GridFunction<Scalar>& u0,
                                 const Trajectory<Scalar>& f, Scalar dt, Scalar t_end) {
    Scalar step = 0;
    const auto times = time_samples(dt, t_end, &step);
    if (times.size() != f.size()) throw ShapeError("forcing trajectory does not match the time grid");
    return linear_evolve(a_op, u0, f);
}

}  // namespace dispersive
