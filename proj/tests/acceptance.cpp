// Runs every acceptance criterion once and prints one PASS/FAIL line per criterion.
// Exit status is the number of failed criteria.

#include "oracles.hpp"

#include "dispersolve/commands.hpp"

#include "dispersive/dispersive.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

using namespace dispersive;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string g4(double v) { return fmt("%.4g", v); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome gagliardo_nirenberg() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(11);
    long failures = 0;
    for (int l = 1; l <= 3; ++l) {
        Grid<> g(1.0, 256);
        const auto field = SmoothRandomField<>::h0(l);
        for (int t = 0; t < 1000; ++t) failures += !gn_check(field(g, rng), l).satisfied;
    }
    const double s = seconds_since(t0);
    return {failures == 0 && s < 10, "3000 functions (l = 1,2,3, N = 256), failures " + std::to_string(failures) + ", " +
                                         g4(s) + " s"};
}

Outcome power_difference() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> d(-10, 10);
    long failures = 0;
    for (int t = 0; t < 1000000; ++t) {
        const double v1 = d(rng), v2 = d(rng);
        failures += !tvm_check(v1, v2, 1 + t % 8).satisfied;
    }
    const double s = seconds_since(t0);
    return {failures == 0 && s < 5, "1e6 samples, k = 1..8, failures " + std::to_string(failures) + ", " + g4(s) + " s"};
}

Outcome dissipation() {
    bool ok = true;
    std::string detail;
    for (int l = 1; l <= 2; ++l) {
        // x^l (1-x)^{l+1} e^{0.7 x}
        oracle::PolyExp f = oracle::bump(l, l + 1);
        f.mu = 0.7;
        std::vector<double> res;
        for (int n : {128, 256, 512}) {
            Grid<long double> g(1.0L, n);
            const auto u = GridFunction<long double>::sample(g, [&](long double x) { return f(x); });
            res.push_back(std::abs(static_cast<double>(dissipation_residual(assemble(l, g), u))));
        }
        const double o1 = oracle::observed_order(res[0], res[1]), o2 = oracle::observed_order(res[1], res[2]);
        ok = ok && o1 >= 0.8 && o2 >= 0.8;
        detail += "l = " + std::to_string(l) + " orders " + g4(o1) + ", " + g4(o2) + "; ";
    }
    return {ok, detail + "N = 128, 256, 512"};
}

template <typename Scalar>
void stationary_ladder(int l, const oracle::PolyExp& exact, std::vector<double>& err, double& worst_residual) {
    const auto disp = oracle::dispersion(exact, l);
    for (int n : {64, 128, 256}) {
        Grid<Scalar> g(1, n);
        const auto rhs = GridFunction<Scalar>::sample_interior(g, [&](Scalar x) {
            return Scalar(exact(x)) + Scalar(disp(static_cast<double>(x)));
        });
        const auto r = stationary_solve(assemble(l, g), Scalar(1), rhs);
        const auto ref = GridFunction<Scalar>::sample(g, [&](Scalar x) { return exact(x); });
        err.push_back(static_cast<double>(l2_norm(r.u - ref)));
        worst_residual = std::max(worst_residual, static_cast<double>(r.residual) / (static_cast<double>(l2_norm(rhs)) + 1));
    }
}

Outcome stationary() {
    oracle::PolyExp kdv = oracle::bump(2, 2);
    kdv.mu = 1.0;
    oracle::PolyExp kaw = oracle::bump(2, 3);
    kaw.mu = -0.5;
    std::vector<double> e1, e2;
    double r1 = 0, r2 = 0;
    stationary_ladder<double>(1, kdv, e1, r1);
    stationary_ladder<long double>(2, kaw, e2, r2);
    const double o[] = {oracle::observed_order(e1[0], e1[1]), oracle::observed_order(e1[1], e1[2]),
                        oracle::observed_order(e2[0], e2[1]), oracle::observed_order(e2[1], e2[2])};
    bool ok = r1 <= 1e-10 && r2 <= 1e-10;
    for (double v : o) ok = ok && v >= 1.7;
    return {ok, "l = 1 (double) orders " + g4(o[0]) + ", " + g4(o[1]) + ", relative residual " + g4(r1) +
                    "; l = 2 (long double) orders " + g4(o[2]) + ", " + g4(o[3]) + ", relative residual " + g4(r2)};
}

Outcome evolution() {
    oracle::PolyExp phi = oracle::bump(2, 2);
    phi.mu = 1.0;
    const auto aphi = oracle::dispersion(phi, 1);
    std::vector<double> errs;
    for (int level = 0; level < 3; ++level) {
        Grid<> g(1.0, 32 << level);
        const auto a = assemble(1, g);
        Forcing<double> f = [&](double t) {
            return GridFunction<>::sample_interior(g, [&](double x) { return std::exp(-t) * (aphi(x) - phi(x)); });
        };
        const auto traj = linear_evolve(a, GridFunction<>::sample(g, phi), f, 0.04 / (1 << level), 0.5);
        double err = 0;
        for (std::size_t m = 0; m < traj.size(); ++m) {
            const double t = traj.times[m];
            err = std::max(err, l2_norm(traj.states[m] - GridFunction<>::sample(g, [&](double x) { return std::exp(-t) * phi(x); })));
        }
        errs.push_back(err);
    }
    const double o1 = oracle::observed_order(errs[0], errs[1]), o2 = oracle::observed_order(errs[1], errs[2]);

    // f = 0: per-step growth of ||u|| bounded by h and shrinking with h
    std::vector<double> growth, h;
    for (int n : {200, 400}) {
        Grid<> g(20.0, n);
        const auto u0 = GridFunction<>::sample(g, [](double x) { return 1.0 / std::pow(std::cosh(x - 10.0), 2); });
        const auto traj = linear_evolve<double>(assemble(1, g), u0, [&](double) { return GridFunction<>(g); }, 0.01, 2.0);
        double worst = 0;
        for (std::size_t m = 1; m < traj.size(); ++m)
            worst = std::max(worst, l2_norm(traj.states[m]) / l2_norm(traj.states[m - 1]) - 1.0);
        growth.push_back(worst);
        h.push_back(g.spacing());
    }
    const bool ok = o1 >= 1.7 && o2 >= 1.7 && growth[0] <= h[0] && growth[1] <= h[1] && growth[1] < growth[0];
    return {ok, "manufactured orders " + g4(o1) + ", " + g4(o2) + "; unforced max step growth " + g4(growth[0]) + " -> " +
                    g4(growth[1])};
}

Outcome budget() {
    const auto b = existence_time(1.0, 1, 1, 1.0, 1.0);
    const double exact = std::log(2.0) / 18560;
    const double rel = std::abs(b.T_star - exact) / exact;
    bool round_trip = true;
    for (const auto& c : check_budget(b)) round_trip = round_trip && c.verdict.slack >= 0;
    const bool ok = b.alpha_k == 52 && b.beta_k == 106 && b.gamma_k == 116 && rel <= 1e-9 && round_trip;
    return {ok, "alpha, beta, gamma = " + g4(b.alpha_k) + ", " + g4(b.beta_k) + ", " + g4(b.gamma_k) + "; T* = " +
                    fmt("%.6e", b.T_star) + " (relative error " + g4(rel) + "); round trip " + (round_trip ? "ok" : "violated")};
}

Outcome radius_check() {
    const double n0 = 3.0 / 8, n1 = pi * pi / 2, n2 = 2 * std::pow(pi, 4), n3 = 8 * std::pow(pi, 6);
    const double exact = std::sqrt(4 * (2 * std::pow(n0 + n1, 2) + (n0 + n1 + n2 + n3)));
    const auto u0 = GridFunction<>::sample(Grid<>(1.0, 512), [](double x) { return std::pow(std::sin(pi * x), 2); });
    const double R = radius(u0, 1, 1);
    const double rel = std::abs(R - exact) / exact;
    return {rel <= 0.01, "R = " + g4(R) + ", analytic " + g4(exact) + ", relative error " + g4(rel)};
}

Outcome contraction() {
    Grid<> g(1.0, 128);
    const auto u0 = GridFunction<>::sample(g, [](double x) { return std::pow(std::sin(pi * x), 2); });
    const double R = radius(u0, 1, 1);
    const double t_star = existence_time(R, 1, 1, 1.0, 1.0).T_star;
    PicardOptions opts;
    opts.tol_fp = 1e-8;
    opts.max_iter = 25;
    opts.radius = R;
    try {
        const auto r = solve(assemble(1, g), u0, 1, t_star / 16, t_star, opts);
        double worst = 0;
        for (double q : r.log.ratio_history) worst = std::max(worst, q);
        bool ball = true;
        for (bool b : r.log.in_ball) ball = ball && b;
        bool decreasing = true;
        for (std::size_t n = 1; n < r.log.update_history.size(); ++n)
            decreasing = decreasing && r.log.update_history[n] < r.log.update_history[n - 1];
        const bool ok = worst <= 1 && decreasing && ball;
        return {ok, "T* = " + g4(t_star) + ", " + std::to_string(r.log.iterates) + " iterations, max squared ratio " + g4(worst) +
                        (ball ? ", iterates in ball" : ", left the ball")};
    } catch (const NonConvergence& e) {
        return {false, std::string("no convergence within 25 iterations: ") + e.what()};
    }
}

Outcome soliton() {
    const auto t0 = std::chrono::steady_clock::now();
    const double c = 16, L = 40, x0 = L / 3, width = 2 / std::sqrt(c);
    // pulse edge reaches L - 5 widths at (L - 5 width - x0) / c; stop well before
    const double t_end = 1.0;
    dispersolve::RunConfig cfg;
    cfg.k = 1;
    cfg.l = 1;
    cfg.L = L;
    cfg.N = 2048;
    cfg.dt = 2e-4;
    cfg.window = 0.004;
    cfg.T_horizon = t_end;
    cfg.u0.type = "soliton";
    cfg.u0.c = c;
    cfg.u0.x0 = x0;
    const auto sim = dispersolve::simulate(cfg);
    if (sim.status != 0) return {false, "simulation failed: " + sim.message};
    const auto& traj = sim.solution;
    const Grid<> g = traj.grid();

    // parabolic peak fit at each sample
    std::vector<double> pos, height;
    for (const auto& u : traj.states) {
        Eigen::Index i;
        u.values().maxCoeff(&i);
        const double y0 = u.values()(i - 1), y1 = u.values()(i), y2 = u.values()(i + 1);
        const double d = 0.5 * (y0 - y2) / (y0 - 2 * y1 + y2);
        pos.push_back(g.node(static_cast<int>(i) + 1) + d * g.spacing());
        height.push_back(y1 - 0.25 * (y0 - y2) * d);
    }
    // least-squares slope of position against time
    double st = 0, sx = 0, stt = 0, stx = 0;
    const double n = static_cast<double>(pos.size());
    for (std::size_t m = 0; m < pos.size(); ++m) {
        st += traj.times[m];
        sx += pos[m];
        stt += traj.times[m] * traj.times[m];
        stx += traj.times[m] * pos[m];
    }
    const double speed = (n * stx - st * sx) / (n * stt - st * st);
    double drift = 0, nearest = L;
    for (std::size_t m = 0; m < pos.size(); ++m) {
        drift = std::max(drift, std::abs(height[m] - height[0]) / height[0]);
        nearest = std::min({nearest, pos[m], L - pos[m]});
    }
    const double s = seconds_since(t0);
    const bool ok = std::abs(speed - c) / c <= 0.05 && drift <= 0.05 && nearest >= 5 * width && s < 120;
    return {ok, "speed " + g4(speed) + " (c = 16), height drift " + g4(drift) + ", closest approach " + g4(nearest / width) +
                    " widths, " + g4(s) + " s"};
}

Outcome energy_identity() {
    std::vector<double> worst;
    for (int level = 0; level < 3; ++level) {
        Grid<> g(1.0, 32 << level);
        const auto u0 = GridFunction<>::sample(g, [](double x) { return 0.5 * std::pow(std::sin(pi * x), 6); });
        PicardOptions opts;
        opts.tol_fp = 1e-6;
        const auto r = solve(assemble(1, g), u0, 1, 1e-4 / (1 << level), 0.01, opts);
        double w = 0;
        for (double e : energy_residual(r.solution, 1, 1)) w = std::max(w, std::abs(e));
        worst.push_back(w);
    }
    const double o1 = oracle::observed_order(worst[0], worst[1]), o2 = oracle::observed_order(worst[1], worst[2]);
    return {o1 >= 1 && o2 >= 1, "max residual " + g4(worst[0]) + ", " + g4(worst[1]) + ", " + g4(worst[2]) + "; orders " +
                                    g4(o1) + ", " + g4(o2)};
}

Outcome smoothing() {
    std::vector<double> integral;
    for (int n : {128, 256, 512}) {
        dispersolve::RunConfig cfg;
        cfg.N = n;
        cfg.T_horizon = 1.0;
        cfg.u0.type = "sin2";
        const auto sim = dispersolve::simulate(cfg);
        if (sim.status != 0) return {false, "simulation failed at N = " + std::to_string(n) + ": " + sim.message};
        integral.push_back(sim.report["smoothing"]["integral_D3l1_squared"].get<double>());
    }
    bool ok = true;
    double worst = 0;
    for (std::size_t j = 0; j + 1 < integral.size(); ++j) {
        const double change = std::abs(integral[j + 1] - integral[j]) / integral[j];
        worst = std::max(worst, change);
        ok = ok && std::isfinite(integral[j + 1]) && change < 0.2;
    }
    return {ok, "int_0^T* ||D^4 u||^2 = " + g4(integral[0]) + ", " + g4(integral[1]) + ", " + g4(integral[2]) +
                    " (N = 128, 256, 512), max relative change " + g4(worst)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"inequality suite (Gagliardo-Nirenberg)", gagliardo_nirenberg},
        {"power difference inequality", power_difference},
        {"dissipation identity", dissipation},
        {"stationary solve", stationary},
        {"linear evolution", evolution},
        {"existence budget", budget},
        {"radius", radius_check},
        {"contraction", contraction},
        {"KdV soliton", soliton},
        {"energy identity", energy_identity},
        {"smoothing witness", smoothing},
    };
    int failed = 0;
    int index = 1;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index++, name, o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed;
}
