#pragma once

#include "dispersolve/config.hpp"

#include "dispersive/estimates.hpp"
#include "dispersive/fixedpoint.hpp"

#include "json.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dispersolve {

namespace exit_code {
constexpr int ok = 0;
constexpr int config = 1;
constexpr int non_convergence = 2;
constexpr int verification = 3;
constexpr int order = 4;
}  // namespace exit_code

/// Fewest time steps a simulate run takes; the energy residual needs interior samples.
constexpr int kMinSteps = 8;

struct Simulation {
    int status = exit_code::ok;
    std::string message;
    dispersive::ExistenceBudget budget;
    double T_end = 0;
    double dt = 0;
    dispersive::Trajectory<double> solution;       // empty unless converged
    std::vector<dispersive::ContractionLog> logs;  // one per window
    nlohmann::ordered_json report;
};

/// radius -> existence_time -> Picard solve on [0, min(T*, T_horizon)]; with a window
/// the solve marches to T_horizon.
Simulation simulate(const RunConfig& cfg);

/// Writes report.json and series.csv into cfg.output_dir.
void write_outputs(const Simulation& sim, const RunConfig& cfg);

struct SuiteResult {
    std::string name;
    long cases = 0;
    long failures = 0;
    std::string detail;
    bool passed = false;
};

std::vector<SuiteResult> verify_suites(const RunConfig& cfg);

struct OrderStudy {
    std::string name;
    std::vector<int> N;
    std::vector<double> dt;
    std::vector<double> error;
    std::vector<double> order;
    double threshold = 0;
    double worst_residual = 0;  // stationary residual; unused elsewhere
    bool exact = false;
    bool passed = false;
};

OrderStudy stationary_study(const RunConfig& cfg, int levels = 3);
OrderStudy evolution_study(const RunConfig& cfg, int levels = 3);
OrderStudy energy_study(const RunConfig& cfg, int levels = 3);

struct EstimateArgs {
    int k = 1;
    int l = 1;
    double L = 1;
    std::optional<double> R;
    std::optional<std::string> u0;
    double horizon = 1;
    int N = 512;
    bool json = false;
};

dispersive::ExistenceBudget estimate(const EstimateArgs& args);
nlohmann::ordered_json to_json(const dispersive::ExistenceBudget& b);

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_estimate(const EstimateArgs& args, std::ostream& out, std::ostream& err);
int cmd_convergence(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace dispersolve
