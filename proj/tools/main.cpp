#include "dispersolve/commands.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
    using namespace dispersolve;
    CLI::App app{"Finite-difference solver for odd-order dispersive equations on a bounded interval"};
    app.require_subcommand(1);
    std::string output_dir;

    std::string config_path;
    auto* sim = app.add_subcommand("simulate", "Solve the nonlinear problem on the guaranteed existence interval");
    sim->add_option("config", config_path, "JSON run configuration")->required();
    sim->add_option("-o,--output-dir", output_dir, "overrides output_dir from the config");
    auto* ver = app.add_subcommand("verify", "Run the randomized inequality suites");
    ver->add_option("config", config_path, "JSON run configuration")->required();
    ver->add_option("-o,--output-dir", output_dir, "overrides output_dir from the config");
    auto* conv = app.add_subcommand("convergence", "Refinement study on manufactured solutions");
    conv->add_option("config", config_path, "JSON run configuration")->required();
    conv->add_option("-o,--output-dir", output_dir, "overrides output_dir from the config");

    EstimateArgs est;
    double R = 0;
    std::string u0;
    auto* estc = app.add_subcommand("estimate", "Print the existence budget");
    estc->add_option("--k", est.k, "nonlinearity exponent")->required();
    estc->add_option("--l", est.l, "dispersion order")->required();
    estc->add_option("--L", est.L, "interval length")->required();
    auto* r_opt = estc->add_option("--R", R, "radius of the data");
    auto* u_opt = estc->add_option("--u0", u0, "initial data: zero, sin2:A, soliton:c,x0, poly:c0,c1,..., file:path");
    r_opt->excludes(u_opt);
    estc->add_option("--horizon", est.horizon, "time horizon");
    estc->add_option("--N", est.N, "grid size used to evaluate --u0");
    estc->add_flag("--json", est.json, "print JSON instead of a table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_code::config;
    }

    try {
        if (*estc) {
            if (*r_opt) est.R = R;
            if (*u_opt) est.u0 = u0;
            return cmd_estimate(est, std::cout, std::cerr);
        }
        RunConfig cfg = load_config(config_path);
        if (!output_dir.empty()) cfg.output_dir = output_dir;
        if (*sim) return cmd_simulate(cfg, std::cout, std::cerr);
        if (*ver) return cmd_verify(cfg, std::cout, std::cerr);
        return cmd_convergence(cfg, std::cout, std::cerr);
    } catch (const dispersive::NonConvergence& e) {
        std::cerr << "dispersolve: " << e.what() << "\n";
        return exit_code::non_convergence;
    } catch (const dispersive::NumericalFailure& e) {
        std::cerr << "dispersolve: " << e.what() << "\n";
        return exit_code::non_convergence;
    } catch (const std::exception& e) {
        std::cerr << "dispersolve: " << e.what() << "\n";
        return exit_code::config;
    }
}
