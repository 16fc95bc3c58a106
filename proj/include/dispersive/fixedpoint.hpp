#pragma once

#include "dispersive/dispersion_operator.hpp"
#include "dispersive/grid.hpp"
#include "dispersive/linear.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace dispersive {

/// Squared V-norm split into its sup-in-time and time-integrated parts.
struct VNorm {
    double sup_part = 0;
    double integral_part = 0;
    double total = 0;
};

/// Per-iteration record of a Picard solve.
struct ContractionLog {
    int iterates = 0;
    std::vector<double> vnorm_history;   // ||u^(n)||_V^2
    std::vector<double> update_history;  // ||u^(n+1) - u^(n)||_V^2
    std::vector<double> ratio_history;   // consecutive quotients of update_history
    std::vector<bool> in_ball;           // ||u^(n)||_V^2 <= 8 R^2
    double radius = 0;
};

/// Picard iteration hit its iteration cap; carries the log gathered so far.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, ContractionLog log) : Error(what), log_(std::move(log)) {}
    const ContractionLog& log() const { return log_; }

private:
    ContractionLog log_;
};

/// f = -v^k Dv and its time derivative f_t = -k v^{k-1} v_t Dv - v^k Dv_t.
template <typename Scalar>
Trajectory<Scalar> nonlinear_forcing(const Trajectory<Scalar>& v, int k) {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    if (k < 1) throw ParameterError("nonlinearity exponent k must be >= 1");
    if (v.dstates.size() != v.states.size()) throw ShapeError("trajectory is missing time derivatives");
    Trajectory<Scalar> f;
    f.times = v.times;
    f.dt = v.dt;
    f.states.reserve(v.size());
    f.dstates.reserve(v.size());
    for (std::size_t m = 0; m < v.size(); ++m) {
        const Vector u = v.states[m].full();
        const Vector ut = v.dstates[m].full();
        const Vector du = diff(v.states[m], 1).full();
        const Vector dut = diff(v.dstates[m], 1).full();
        const Vector uk1 = u.array().pow(Scalar(k - 1)).matrix();
        const Vector uk = uk1.cwiseProduct(u);
        const Vector fv = -uk.cwiseProduct(du);
        const Vector ft = -(Scalar(k) * uk1.cwiseProduct(ut).cwiseProduct(du) + uk.cwiseProduct(dut));
        const auto n = fv.size();
        f.states.emplace_back(v.grid(), fv.segment(1, n - 2), fv(0), fv(n - 1));
        f.dstates.emplace_back(v.grid(), ft.segment(1, n - 2), ft(0), ft(n - 1));
    }
    return f;
}

/// Pointwise difference of two trajectories on the same samples.
template <typename Scalar>
Trajectory<Scalar> difference(const Trajectory<Scalar>& a, const Trajectory<Scalar>& b) {
    if (a.size() != b.size()) throw ShapeError("trajectories have different numbers of samples");
    Trajectory<Scalar> d;
    d.times = a.times;
    d.dt = a.dt;
    for (std::size_t m = 0; m < a.size(); ++m) {
        d.states.push_back(a.states[m] - b.states[m]);
        d.dstates.push_back(a.dstates[m] - b.dstates[m]);
    }
    return d;
}

/// max_t (||v||^2 + ||v_t||^2) + int_0^T sum_{j=1}^l (||D^j v||^2 + ||D^j v_t||^2) dt.
template <typename Scalar>
VNorm vnorm(const Trajectory<Scalar>& v, int l) {
    VNorm out;
    std::vector<double> integrand(v.size(), 0.0);
    for (std::size_t m = 0; m < v.size(); ++m) {
        const auto a = norms(v.states[m], l);
        const auto b = norms(v.dstates[m], l);
        out.sup_part = std::max(out.sup_part, static_cast<double>(a.l2 * a.l2 + b.l2 * b.l2));
        double s = 0;
        for (int j = 0; j < l; ++j) {
            s += static_cast<double>(a.seminorms[static_cast<std::size_t>(j)] * a.seminorms[static_cast<std::size_t>(j)]);
            s += static_cast<double>(b.seminorms[static_cast<std::size_t>(j)] * b.seminorms[static_cast<std::size_t>(j)]);
        }
        integrand[m] = s;
    }
    for (std::size_t m = 0; m + 1 < v.size(); ++m) {
        out.integral_part += 0.5 * static_cast<double>(v.times[m + 1] - v.times[m]) * (integrand[m] + integrand[m + 1]);
    }
    out.total = out.sup_part + out.integral_part;
    return out;
}

/// u = P v: the linear evolution driven by f = -v^k Dv from u0.
template <typename Scalar>
Trajectory<Scalar> picard_map(const DispersionOperator<Scalar>& a_op, const GridFunction<Scalar>& u0,
                              const Trajectory<Scalar>& v, int k) {
    if (v.size() < 2) throw SizingError("Picard map needs at least two time samples");
    return linear_evolve(a_op, u0, nonlinear_forcing(v, k));
}

template <typename Scalar>
Trajectory<Scalar> picard_map(const DispersionOperator<Scalar>& a_op, const GridFunction<Scalar>& u0,
                              const Trajectory<Scalar>& v, int k, Scalar dt, Scalar t_end) {
    Scalar step = 0;
    if (time_samples(dt, t_end, &step).size() != v.size()) {
        throw ShapeError("trajectory does not match the time grid");
    }
    return picard_map(a_op, u0, v, k);
}

struct PicardOptions {
    std::optional<double> tol_fp;  // default 1e-8 (1 + ||u0||)
    int max_iter = 50;
    double radius = 0;             // R for the ball test; 0 disables it
};

template <typename Scalar>
struct PicardResult {
    Trajectory<Scalar> solution;
    ContractionLog log;
};

/// Global-in-time Picard iteration on [0, t_end] starting from u0 held
/// constant in time. Stops once ||u^(n+1) - u^(n)||_V <= tol_fp.
template <typename Scalar>
PicardResult<Scalar> solve(const DispersionOperator<Scalar>& a_op, const GridFunction<Scalar>& u0, int k, Scalar dt,
                           Scalar t_end, const PicardOptions& opts = {}) {
    if (k < 1) throw ParameterError("nonlinearity exponent k must be >= 1");
    if (opts.max_iter < 1) throw ParameterError("max_iter must be >= 1");
    const double tol = opts.tol_fp.value_or(1e-8 * (1.0 + static_cast<double>(l2_norm(u0))));
    if (!(tol > 0)) throw ParameterError("tol_fp must be positive");
    const int l = a_op.order();
    const double ball = 8.0 * opts.radius * opts.radius;

    Scalar step = 0;
    const auto times = time_samples(dt, t_end, &step);
    Trajectory<Scalar> current = Trajectory<Scalar>::constant(u0, times, step);

    ContractionLog log;
    log.radius = opts.radius;
    auto record = [&](const Trajectory<Scalar>& t) {
        const double v = vnorm(t, l).total;
        log.vnorm_history.push_back(v);
        log.in_ball.push_back(opts.radius > 0 ? v <= ball : true);
    };
    record(current);

    for (int n = 0; n < opts.max_iter; ++n) {
        Trajectory<Scalar> next = picard_map(a_op, u0, current, k);
        const double update = vnorm(difference(next, current), l).total;
        if (!std::isfinite(update)) throw NumericalFailure("Picard iterate is not finite at iteration " + std::to_string(n + 1));
        if (!log.update_history.empty()) {
            const double prev = log.update_history.back();
            log.ratio_history.push_back(prev > 0 ? update / prev : 0.0);
        }
        log.update_history.push_back(update);
        log.iterates = n + 1;
        record(next);
        current = std::move(next);
        if (std::sqrt(update) <= tol) return PicardResult<Scalar>{std::move(current), std::move(log)};
    }
    // A ratio near 1 means the updates stopped shrinking at rounding level, not a lack of contraction.
    const bool stalled = !log.ratio_history.empty() && log.ratio_history.back() > 0.5 && log.ratio_history.back() < 2.0 &&
                         log.update_history.size() > 3 && log.update_history.back() < 1e-6 * log.update_history.front();
    throw NonConvergence("Picard iteration did not reach tol_fp within " + std::to_string(opts.max_iter) +
                             (stalled ? " iterations; updates stalled at the rounding floor, raise tol_fp"
                                      : " iterations; the time interval is likely too long for contraction"),
                         std::move(log));
}

template <typename Scalar>
struct MarchResult {
    Trajectory<Scalar> solution;
    std::vector<ContractionLog> logs;  // one per window
};

/// Restarts the global Picard solve on consecutive windows of length `window`.
template <typename Scalar>
MarchResult<Scalar> solve_windowed(const DispersionOperator<Scalar>& a_op, const GridFunction<Scalar>& u0, int k,
                                   Scalar dt, Scalar t_end, Scalar window, const PicardOptions& opts = {}) {
    if (!(window > 0)) throw ParameterError("window length must be positive");
    const auto windows = static_cast<long>(std::max<Scalar>(Scalar(1), std::ceil(t_end / window - Scalar(1e-9))));
    const Scalar length = t_end / Scalar(windows);

    MarchResult<Scalar> out;
    GridFunction<Scalar> start = u0;
    Scalar offset = 0;
    for (long w = 0; w < windows; ++w) {
        auto piece = solve(a_op, start, k, dt, length, opts);
        auto& traj = piece.solution;
        const std::size_t first = w == 0 ? 0 : 1;
        for (std::size_t m = first; m < traj.size(); ++m) {
            out.solution.times.push_back(offset + traj.times[m]);
            out.solution.states.push_back(traj.states[m]);
            out.solution.dstates.push_back(traj.dstates[m]);
        }
        out.solution.dt = traj.dt;
        start = traj.states.back();
        offset += length;
        out.logs.push_back(std::move(piece.log));
    }
    out.solution.times.back() = t_end;
    return out;
}

}  // namespace dispersive
