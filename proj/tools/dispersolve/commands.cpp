#include "dispersolve/commands.hpp"

#include "dispersolve/manufactured.hpp"
#include "dispersolve/sweep.hpp"

#include "dispersive/random_fields.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <random>

namespace dispersolve {

using namespace dispersive;
using nlohmann::ordered_json;

namespace {

std::string num(double v, int digits = 10) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

ordered_json to_json(const InequalityVerdict& v) {
    return {{"lhs", v.lhs}, {"rhs", v.rhs}, {"slack", v.slack}, {"satisfied", v.satisfied}};
}

ordered_json to_json(const ContractionLog& log) {
    ordered_json j;
    j["iterates"] = log.iterates;
    j["radius"] = log.radius;
    j["vnorm_history"] = log.vnorm_history;
    j["update_history"] = log.update_history;
    j["ratio_history"] = log.ratio_history;
    j["in_ball"] = log.in_ball;
    return j;
}

std::mt19937_64 suite_rng(std::uint64_t seed, std::uint32_t index) {
    std::seed_seq s{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), index};
    return std::mt19937_64(s);
}

void finish(OrderStudy& s) {
    s.order.clear();
    s.exact = std::all_of(s.error.begin(), s.error.end(), [](double e) { return e == 0.0; });
    s.passed = true;
    for (std::size_t j = 0; j + 1 < s.error.size(); ++j) {
        const double coarse = s.error[j], fine = s.error[j + 1];
        double order;
        if (coarse == 0.0 && fine == 0.0) {
            order = std::numeric_limits<double>::infinity();
        } else if (fine == 0.0) {
            order = std::numeric_limits<double>::infinity();
        } else {
            order = std::log2(coarse / fine);
        }
        s.order.push_back(order);
        if (!(order >= s.threshold)) s.passed = false;
    }
}

template <typename Scalar>
GridFunction<Scalar> sample_profile(const Grid<Scalar>& g, const PolyExp& phi, bool zero) {
    if (zero) return GridFunction<Scalar>(g);
    return GridFunction<Scalar>::sample(g, [&](Scalar x) { return phi(x); });
}

template <typename Scalar>
OrderStudy stationary_impl(const RunConfig& cfg, int levels) {
    OrderStudy s;
    s.name = "stationary_solve";
    s.threshold = 1.7;
    const bool zero = cfg.manufactured == "zero";
    const PolyExp phi = domain_profile(cfg.l, cfg.L);
    const auto n_levels = static_cast<std::size_t>(levels);
    s.N.resize(n_levels);
    s.dt.assign(n_levels, 0.0);
    s.error.resize(n_levels);
    std::vector<double> residual(n_levels);
    parallel_for(n_levels, [&](std::size_t j) {
        const int n = cfg.N << j;
        Grid<Scalar> g(Scalar(cfg.L), n);
        const auto a = assemble(cfg.l, g);
        const auto exact = sample_profile(g, phi, zero);
        const auto rhs = zero ? GridFunction<Scalar>(g) : GridFunction<Scalar>::sample_interior(g, [&](Scalar x) {
            return phi(x) + phi.dispersion(x, cfg.l);
        });
        const auto r = stationary_solve(a, Scalar(1), rhs);
        s.N[j] = n;
        s.error[j] = static_cast<double>(l2_norm(r.u - exact));
        residual[j] = static_cast<double>(r.residual) / (static_cast<double>(l2_norm(rhs)) + 1);
    });
    s.worst_residual = *std::max_element(residual.begin(), residual.end());
    finish(s);
    return s;
}

template <typename Scalar>
OrderStudy evolution_impl(const RunConfig& cfg, int levels) {
    OrderStudy s;
    s.name = "linear_evolve";
    s.threshold = 1.7;
    const bool zero = cfg.manufactured == "zero";
    const PolyExp phi = domain_profile(cfg.l, cfg.L);
    const auto n_levels = static_cast<std::size_t>(levels);
    s.N.resize(n_levels);
    s.dt.resize(n_levels);
    s.error.resize(n_levels);
    parallel_for(n_levels, [&](std::size_t j) {
        const int n = cfg.N << j;
        const Scalar dt = Scalar(cfg.dt) / Scalar(1 << j);
        Grid<Scalar> g(Scalar(cfg.L), n);
        const auto a = assemble(cfg.l, g);
        const auto shape = sample_profile(g, phi, zero);
        // u* = e^{-t} phi, so f = e^{-t} (A phi - phi)
        const auto source = zero ? GridFunction<Scalar>(g) : GridFunction<Scalar>::sample_interior(g, [&](Scalar x) {
            return phi.dispersion(x, cfg.l) - phi(x);
        });
        Forcing<Scalar> f = [&](Scalar t) { return std::exp(-t) * source; };
        const auto traj = linear_evolve(a, shape, f, dt, Scalar(cfg.T_horizon));
        double err = 0;
        for (std::size_t m = 0; m < traj.size(); ++m) {
            err = std::max(err, static_cast<double>(l2_norm(traj.states[m] - std::exp(-traj.times[m]) * shape)));
        }
        s.N[j] = n;
        s.dt[j] = static_cast<double>(traj.dt);
        s.error[j] = err;
    });
    finish(s);
    return s;
}

}  // namespace

OrderStudy stationary_study(const RunConfig& cfg, int levels) {
    // one-sided stencils of order >= 5 lose eps h^{-j} in double
    if (cfg.l >= 2) return stationary_impl<long double>(cfg, levels);
    return stationary_impl<double>(cfg, levels);
}

OrderStudy evolution_study(const RunConfig& cfg, int levels) {
    if (cfg.l >= 2) return evolution_impl<long double>(cfg, levels);
    return evolution_impl<double>(cfg, levels);
}

OrderStudy energy_study(const RunConfig& cfg, int levels) {
    OrderStudy s;
    s.name = "energy_residual";
    s.threshold = 1.0;
    const bool zero = cfg.manufactured == "zero";
    const auto n_levels = static_cast<std::size_t>(levels);
    s.N.resize(n_levels);
    s.dt.resize(n_levels);
    s.error.resize(n_levels);
    parallel_for(n_levels, [&](std::size_t j) {
        const int n = cfg.N << j;
        const double dt = std::min(cfg.dt / (1 << j), cfg.T_horizon / kMinSteps);
        Grid<double> g(cfg.L, n);
        const auto a = assemble(cfg.l, g);
        const auto u0 = zero ? GridFunction<double>(g) : make_initial(cfg.u0, g);
        PicardOptions opts;
        opts.tol_fp = cfg.tol_fp;
        opts.max_iter = cfg.max_iter;
        Trajectory<double> u = cfg.window ? solve_windowed(a, u0, cfg.k, dt, cfg.T_horizon, *cfg.window, opts).solution
                                          : solve(a, u0, cfg.k, dt, cfg.T_horizon, opts).solution;
        double worst = 0;
        for (double r : energy_residual(u, cfg.k, cfg.l)) worst = std::max(worst, std::abs(r));
        s.N[j] = n;
        s.dt[j] = u.dt;
        s.error[j] = worst;
    });
    finish(s);
    return s;
}

Simulation simulate(const RunConfig& cfg) {
    Simulation sim;
    Grid<double> grid(cfg.L, cfg.N);
    const auto op = assemble(cfg.l, grid);
    double mismatch = 0;
    const auto u0 = make_initial(cfg.u0, grid, &mismatch);
    const double R = radius(u0, cfg.k, cfg.l);
    sim.budget = existence_time(R, cfg.k, cfg.l, cfg.L, cfg.T_horizon);
    const bool marching = cfg.window.has_value();
    sim.T_end = (marching || R == 0) ? cfg.T_horizon : std::min(sim.budget.T_star, cfg.T_horizon);
    const double dt_request = std::min(cfg.dt, sim.T_end / kMinSteps);

    PicardOptions opts;
    opts.tol_fp = cfg.tol_fp;
    opts.max_iter = cfg.max_iter;
    opts.radius = R;
    try {
        if (marching) {
            auto r = solve_windowed(op, u0, cfg.k, dt_request, sim.T_end, *cfg.window, opts);
            sim.solution = std::move(r.solution);
            sim.logs = std::move(r.logs);
        } else {
            auto r = solve(op, u0, cfg.k, dt_request, sim.T_end, opts);
            sim.solution = std::move(r.solution);
            sim.logs.push_back(std::move(r.log));
        }
        sim.dt = sim.solution.dt;
        sim.message = "converged";
    } catch (const NonConvergence& e) {
        sim.status = exit_code::non_convergence;
        sim.message = e.what();
        sim.logs.push_back(e.log());
    } catch (const NumericalFailure& e) {
        sim.status = exit_code::non_convergence;
        sim.message = e.what();
    }

    ordered_json& rep = sim.report;
    rep["config"] = to_json(cfg);
    rep["status"] = sim.status == exit_code::ok ? "converged" : "non_convergence";
    rep["message"] = sim.message;
    rep["run"] = {{"T_end", sim.T_end},
                  {"dt", sim.dt},
                  {"samples", sim.solution.size()},
                  {"windowed", marching},
                  {"beyond_guarantee", sim.T_end > sim.budget.T_star && R > 0},
                  {"u0_boundary_mismatch", mismatch}};
    rep["budget"] = to_json(sim.budget);
    ordered_json logs = ordered_json::array();
    for (const auto& log : sim.logs) logs.push_back(to_json(log));
    rep["contraction"] = logs;

    if (sim.status != exit_code::ok) return sim;

    const int l = cfg.l;
    const int top = 3 * l + 1;
    const auto& traj = sim.solution;
    ordered_json t = ordered_json::array(), l2 = ordered_json::array(), wl2 = ordered_json::array();
    std::vector<ordered_json> semis(static_cast<std::size_t>(top), ordered_json::array());
    std::vector<double> d2l1(traj.size()), d3l1(traj.size());
    double sup_h2l1 = 0;
    for (std::size_t m = 0; m < traj.size(); ++m) {
        const auto r = norms(traj.states[m], top);
        t.push_back(traj.times[m]);
        l2.push_back(r.l2);
        wl2.push_back(r.weighted_l2);
        for (int j = 0; j < top; ++j) semis[static_cast<std::size_t>(j)].push_back(r.seminorms[static_cast<std::size_t>(j)]);
        d2l1[m] = std::pow(r.seminorms[static_cast<std::size_t>(2 * l)], 2);
        d3l1[m] = std::pow(r.seminorms[static_cast<std::size_t>(top - 1)], 2);
        sup_h2l1 = std::max(sup_h2l1, r.sobolev_squared(2 * l + 1));
    }
    double int2 = 0, int3 = 0;
    for (std::size_t m = 0; m + 1 < traj.size(); ++m) {
        const double w = 0.5 * (traj.times[m + 1] - traj.times[m]);
        int2 += w * (d2l1[m] + d2l1[m + 1]);
        int3 += w * (d3l1[m] + d3l1[m + 1]);
    }
    ordered_json series;
    series["t"] = t;
    series["l2"] = l2;
    series["weighted_l2"] = wl2;
    for (int j = 0; j < top; ++j) series["seminorm_" + std::to_string(j + 1)] = semis[static_cast<std::size_t>(j)];
    rep["norm_series"] = series;
    rep["residual_series"] = energy_residual(traj, cfg.k, l);
    rep["smoothing"] = {{"sup_H2l1_squared", sup_h2l1},
                        {"integral_D2l1_squared", int2},
                        {"integral_D3l1_squared", int3}};
    ordered_json verdicts = ordered_json::array();
    verdicts.push_back({{"name", "gn t=0"}, {"verdict", to_json(gn_check(traj.states.front(), l, cfg.gn_constant))}});
    verdicts.push_back({{"name", "gn t=T_end"}, {"verdict", to_json(gn_check(traj.states.back(), l, cfg.gn_constant))}});
    rep["verdicts"] = verdicts;
    return sim;
}

void write_outputs(const Simulation& sim, const RunConfig& cfg) {
    const std::filesystem::path dir(cfg.output_dir);
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "report.json");
        out << sim.report.dump(2) << "\n";
        if (!out) throw Error("cannot write " + (dir / "report.json").string());
    }
    std::ofstream csv(dir / "series.csv");
    const int top = 3 * cfg.l + 1;
    csv << "t,l2,weighted_l2";
    for (int j = 1; j <= top; ++j) csv << ",seminorm_" << j;
    csv << ",energy_residual\n";
    const auto& traj = sim.solution;
    std::vector<double> residual;
    if (traj.size() >= 3) residual = energy_residual(traj, cfg.k, cfg.l);
    for (std::size_t m = 0; m < traj.size(); ++m) {
        const auto r = norms(traj.states[m], top);
        csv << num(traj.times[m], 17) << ',' << num(r.l2, 17) << ',' << num(r.weighted_l2, 17);
        for (double s : r.seminorms) csv << ',' << num(s, 17);
        csv << ',';
        if (m >= 1 && m + 1 < traj.size()) csv << num(residual[m - 1], 17);
        csv << '\n';
    }
    if (!csv) throw Error("cannot write " + (dir / "series.csv").string());
}

std::vector<SuiteResult> verify_suites(const RunConfig& cfg) {
    std::vector<std::function<SuiteResult(std::uint32_t)>> suites;

    for (int l = 1; l <= 3; ++l) {
        suites.push_back([&cfg, l](std::uint32_t index) {
            SuiteResult r;
            r.name = "gagliardo_nirenberg_l" + std::to_string(l);
            auto rng = suite_rng(cfg.seed, index);
            Grid<double> g(cfg.L, std::max(cfg.N, 4 * l + 3));
            const auto field = SmoothRandomField<double>::h0(l);
            double worst = std::numeric_limits<double>::infinity();
            for (int t = 0; t < 1000; ++t) {
                const auto v = gn_check(field(g, rng), l, cfg.gn_constant);
                ++r.cases;
                if (!v.satisfied) ++r.failures;
                if (v.rhs > 0) worst = std::min(worst, v.slack / v.rhs);
            }
            r.detail = "min relative slack " + num(worst, 4);
            r.passed = r.failures == 0;
            return r;
        });
    }
    for (auto [m, i] : {std::pair{2, 1}, std::pair{3, 1}, std::pair{3, 2}}) {
        suites.push_back([&cfg, m = m, i = i](std::uint32_t index) {
            SuiteResult r;
            r.name = "interpolation_m" + std::to_string(m) + "_i" + std::to_string(i);
            auto rng = suite_rng(cfg.seed, index);
            Grid<double> g(cfg.L, cfg.N);
            const SmoothRandomField<double> field(1, 1, 6);
            std::vector<GridFunction<double>> train, held;
            for (int t = 0; t < 500; ++t) train.push_back(field(g, rng));
            for (int t = 0; t < 500; ++t) held.push_back(field(g, rng));
            const double a1 = calibrate_interpolation(train, m, i, 1.0, 1.25);
            for (const auto* corpus : {&train, &held}) {
                for (const auto& u : *corpus) {
                    ++r.cases;
                    if (!interpolation_check(u, m, i, a1, 1.0).verdict.satisfied) ++r.failures;
                }
            }
            r.detail = "A1 " + num(a1, 6) + ", A2 1, calibrated on 500, checked on 500 held out";
            r.passed = r.failures == 0;
            return r;
        });
    }
    for (int k = 1; k <= 8; ++k) {
        suites.push_back([&cfg, k](std::uint32_t index) {
            SuiteResult r;
            r.name = "power_difference_k" + std::to_string(k);
            auto rng = suite_rng(cfg.seed, index);
            std::uniform_real_distribution<double> d(-10, 10);
            for (int t = 0; t < 125000; ++t) {
                const double v1 = d(rng), v2 = d(rng);
                ++r.cases;
                if (!tvm_check(v1, v2, k).satisfied) ++r.failures;
            }
            r.detail = "(v1, v2) uniform on [-10, 10]^2";
            r.passed = r.failures == 0;
            return r;
        });
    }
    for (int l = 1; l <= 2; ++l) {
        suites.push_back([&cfg, l](std::uint32_t) {
            SuiteResult r;
            r.name = "dissipation_l" + std::to_string(l);
            const PolyExp phi = domain_profile(l, cfg.L);
            std::vector<double> res;
            for (int n : {128, 256, 512}) {
                Grid<long double> g(cfg.L, n);
                const auto u = GridFunction<long double>::sample(g, [&](long double x) { return phi(x); });
                res.push_back(std::abs(static_cast<double>(dissipation_residual(assemble(l, g), u))));
            }
            r.detail = "residuals";
            for (double v : res) r.detail += " " + num(v, 4);
            r.detail += ", orders";
            for (std::size_t j = 0; j + 1 < res.size(); ++j) {
                const double order = std::log2(res[j] / res[j + 1]);
                ++r.cases;
                if (!(order >= 0.8)) ++r.failures;
                r.detail += " " + num(order, 3);
            }
            r.passed = r.failures == 0;
            return r;
        });
    }

    std::vector<SuiteResult> results(suites.size());
    parallel_for(suites.size(), [&](std::size_t s) { results[s] = suites[s](static_cast<std::uint32_t>(s)); });
    return results;
}

ordered_json to_json(const ExistenceBudget& b) {
    ordered_json j;
    j["k"] = b.k;
    j["l"] = b.l;
    j["L"] = b.L;
    j["R"] = b.R;
    j["horizon"] = b.horizon;
    j["alpha_k"] = b.alpha_k;
    j["beta_k"] = b.beta_k;
    j["gamma_k"] = b.gamma_k;
    for (int i = 0; i < 8; ++i) j["T" + std::to_string(i + 1)] = b.T[static_cast<std::size_t>(i)];
    j["T0"] = b.T0;
    j["T_star"] = b.T_star;
    ordered_json checks = ordered_json::array();
    for (const auto& c : check_budget(b)) checks.push_back({{"name", c.name}, {"verdict", to_json(c.verdict)}});
    j["checks"] = checks;
    return j;
}

ExistenceBudget estimate(const EstimateArgs& args) {
    if (args.k < 1) throw ConfigError("k must be >= 1");
    if (args.l < 1) throw ConfigError("l must be >= 1");
    if (!(args.L > 0)) throw ConfigError("L must be positive");
    if (!(args.horizon > 0)) throw ConfigError("horizon must be positive");
    if (args.R.has_value() == args.u0.has_value()) throw ConfigError("give exactly one of --R and --u0");
    double R = 0;
    if (args.R) {
        R = *args.R;
    } else {
        if (args.N < 4 * args.l + 3) throw ConfigError("N must be at least 4l+3");
        Grid<double> g(args.L, args.N);
        R = radius(make_initial(parse_initial(*args.u0), g), args.k, args.l);
    }
    return existence_time(R, args.k, args.l, args.L, args.horizon);
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto sim = simulate(cfg);
    write_outputs(sim, cfg);
    out << "R        " << num(sim.budget.R) << "\n";
    out << "T_star   " << num(sim.budget.T_star) << "\n";
    out << "T_end    " << num(sim.T_end) << "\n";
    int iterates = 0;
    for (const auto& log : sim.logs) iterates += log.iterates;
    out << "windows  " << sim.logs.size() << "\n";
    out << "iterates " << iterates << "\n";
    out << "status   " << sim.report["status"].get<std::string>() << "\n";
    out << "output   " << cfg.output_dir << "\n";
    if (sim.status != exit_code::ok) err << "simulate: " << sim.message << "\n";
    return sim.status;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto results = verify_suites(cfg);
    ordered_json rep;
    rep["seed"] = cfg.seed;
    rep["gn_constant"] = cfg.gn_constant;
    ordered_json rows = ordered_json::array();
    bool all = true;
    char line[256];
    std::snprintf(line, sizeof line, "%-28s %8s %8s  %s\n", "suite", "cases", "failures", "result");
    out << line;
    for (const auto& r : results) {
        std::snprintf(line, sizeof line, "%-28s %8ld %8ld  %s  %s\n", r.name.c_str(), r.cases, r.failures,
                      r.passed ? "PASS" : "FAIL", r.detail.c_str());
        out << line;
        rows.push_back({{"suite", r.name}, {"cases", r.cases}, {"failures", r.failures}, {"passed", r.passed}, {"detail", r.detail}});
        if (!r.passed) {
            all = false;
            err << "verify: " << r.name << " failed (" << r.failures << " of " << r.cases << ")\n";
        }
    }
    rep["suites"] = rows;
    rep["passed"] = all;
    std::filesystem::create_directories(cfg.output_dir);
    std::ofstream(std::filesystem::path(cfg.output_dir) / "verify.json") << rep.dump(2) << "\n";
    return all ? exit_code::ok : exit_code::verification;
}

int cmd_estimate(const EstimateArgs& args, std::ostream& out, std::ostream&) {
    const auto b = estimate(args);
    if (args.json) {
        out << to_json(b).dump(2) << "\n";
        return exit_code::ok;
    }
    auto row = [&](const std::string& name, double v) { out << name << std::string(10 - name.size(), ' ') << num(v) << "\n"; };
    row("k", b.k);
    row("l", b.l);
    row("L", b.L);
    row("R", b.R);
    row("horizon", b.horizon);
    row("alpha_k", b.alpha_k);
    row("beta_k", b.beta_k);
    row("gamma_k", b.gamma_k);
    for (int i = 0; i < 8; ++i) row("T" + std::to_string(i + 1), b.T[static_cast<std::size_t>(i)]);
    row("T0", b.T0);
    row("T_star", b.T_star);
    return exit_code::ok;
}

int cmd_convergence(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::vector<OrderStudy> studies{stationary_study(cfg), evolution_study(cfg), energy_study(cfg)};
    ordered_json rep;
    rep["config"] = to_json(cfg);
    ordered_json rows = ordered_json::array();
    bool all = true;
    for (const auto& s : studies) {
        out << s.name << " (order >= " << num(s.threshold) << ")\n";
        for (std::size_t j = 0; j < s.N.size(); ++j) {
            out << "  N " << s.N[j];
            if (s.dt[j] > 0) out << "  dt " << num(s.dt[j], 6);
            out << "  error " << num(s.error[j], 6);
            if (j > 0) out << "  order " << (s.exact ? std::string("exact") : num(s.order[j - 1], 4));
            out << "\n";
        }
        out << "  " << (s.passed ? "PASS" : "FAIL") << "\n";
        ordered_json orders = ordered_json::array();
        for (double o : s.order) {
            if (s.exact) orders.push_back("exact");
            else if (std::isinf(o)) orders.push_back("inf");
            else orders.push_back(o);
        }
        rows.push_back({{"study", s.name},
                        {"N", s.N},
                        {"dt", s.dt},
                        {"error", s.error},
                        {"order", orders},
                        {"threshold", s.threshold},
                        {"passed", s.passed}});
        if (!s.passed) {
            all = false;
            err << "convergence: " << s.name << " order below " << num(s.threshold) << "\n";
        }
    }
    rep["studies"] = rows;
    rep["passed"] = all;
    std::filesystem::create_directories(cfg.output_dir);
    std::ofstream(std::filesystem::path(cfg.output_dir) / "convergence.json") << rep.dump(2) << "\n";
    return all ? exit_code::ok : exit_code::order;
}

}  // namespace dispersolve
