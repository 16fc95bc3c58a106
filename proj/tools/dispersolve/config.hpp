#pragma once

#include "dispersive/grid.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace dispersolve {

/// Bad or inconsistent run configuration (exit code 1).
class ConfigError : public dispersive::Error {
public:
    using Error::Error;
};

/// Initial condition family.
struct InitialSpec {
    std::string type = "zero";  // zero | soliton | sin2 | poly | file
    double c = 0;               // soliton speed
    double x0 = 0;              // soliton centre
    double amplitude = 1;       // sin2
    std::vector<double> coeffs; // poly, ascending powers of x
    std::string path;           // file, resolved against the config directory
};

struct RunConfig {
    int k = 1;
    int l = 1;
    double L = 1;
    double T_horizon = 1;
    int N = 64;
    double dt = 1e-3;
    InitialSpec u0;
    std::optional<double> tol_fp;
    int max_iter = 50;
    std::string output_dir = ".";
    std::uint64_t seed = 0;
    std::optional<double> window;        // restart Picard on windows of this length
    std::string manufactured = "poly_exp";  // poly_exp | zero
    double gn_constant = 1.4142135623730951;
};

/// Strict parse: unknown keys, wrong types and out-of-range values throw ConfigError.
RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& file);

/// Short forms for the estimate command: zero, sin2:A, soliton:c,x0, poly:c0,c1,..., file:path,
/// or an inline JSON object.
InitialSpec parse_initial(const std::string& text);

nlohmann::ordered_json to_json(const RunConfig& cfg);
nlohmann::ordered_json to_json(const InitialSpec& spec);

/// Samples the initial data; boundary nodes are set to zero and the dropped values
/// are reported through `boundary_mismatch`.
dispersive::GridFunction<double> make_initial(const InitialSpec& spec, const dispersive::Grid<double>& grid,
                                              double* boundary_mismatch = nullptr);

}  // namespace dispersolve
