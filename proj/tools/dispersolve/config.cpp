#include "dispersolve/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace dispersolve {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

template <typename T>
T field(const json& doc, const char* key) {
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config key '") + key + "' is missing or has the wrong type");
    }
}

template <typename T>
void optional_field(const json& doc, const char* key, T& out) {
    if (doc.contains(key)) out = field<T>(doc, key);
}

void reject_unknown(const json& doc, const std::set<std::string>& allowed, const std::string& where) {
    if (!doc.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& item : doc.items()) {
        if (!allowed.count(item.key())) throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

InitialSpec parse_initial_json(const json& doc, const std::filesystem::path& base_dir) {
    InitialSpec s;
    if (doc.is_string()) {
        s.type = doc.get<std::string>();
        require(s.type == "zero", "u0_spec given as a string must be \"zero\"");
        return s;
    }
    require(doc.is_object(), "u0_spec must be a string or an object");
    s.type = field<std::string>(doc, "type");
    if (s.type == "zero") {
        reject_unknown(doc, {"type"}, "u0_spec");
    } else if (s.type == "soliton") {
        reject_unknown(doc, {"type", "c", "x0"}, "u0_spec");
        s.c = field<double>(doc, "c");
        s.x0 = field<double>(doc, "x0");
        require(s.c > 0, "soliton speed c must be positive");
    } else if (s.type == "sin2") {
        reject_unknown(doc, {"type", "amplitude"}, "u0_spec");
        optional_field(doc, "amplitude", s.amplitude);
        require(std::isfinite(s.amplitude), "sin2 amplitude must be finite");
    } else if (s.type == "poly") {
        reject_unknown(doc, {"type", "coeffs"}, "u0_spec");
        s.coeffs = field<std::vector<double>>(doc, "coeffs");
        require(!s.coeffs.empty(), "poly needs at least one coefficient");
    } else if (s.type == "file") {
        reject_unknown(doc, {"type", "path"}, "u0_spec");
        std::filesystem::path p = field<std::string>(doc, "path");
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        s.path = p.string();
    } else {
        throw ConfigError("unknown u0_spec type '" + s.type + "'");
    }
    return s;
}

std::vector<double> split_numbers(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            require(used == item.size(), "bad number '" + item + "'");
        } catch (const std::logic_error&) {
            throw ConfigError("bad number '" + item + "'");
        }
    }
    return out;
}

}  // namespace

RunConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
    reject_unknown(doc,
                   {"k", "l", "L", "T_horizon", "N", "dt", "u0_spec", "tol_fp", "max_iter", "output_dir", "seed", "window",
                    "manufactured", "gn_constant"},
                   "config");
    RunConfig c;
    c.k = field<int>(doc, "k");
    c.l = field<int>(doc, "l");
    c.L = field<double>(doc, "L");
    c.T_horizon = field<double>(doc, "T_horizon");
    c.N = field<int>(doc, "N");
    c.dt = field<double>(doc, "dt");
    if (!doc.contains("u0_spec")) throw ConfigError("config key 'u0_spec' is missing");
    c.u0 = parse_initial_json(doc.at("u0_spec"), base_dir);
    if (doc.contains("tol_fp")) c.tol_fp = field<double>(doc, "tol_fp");
    optional_field(doc, "max_iter", c.max_iter);
    optional_field(doc, "output_dir", c.output_dir);
    optional_field(doc, "seed", c.seed);
    if (doc.contains("window")) c.window = field<double>(doc, "window");
    optional_field(doc, "manufactured", c.manufactured);
    optional_field(doc, "gn_constant", c.gn_constant);

    require(c.k >= 1, "k must be >= 1");
    require(c.l >= 1, "l must be >= 1");
    require(c.L > 0 && std::isfinite(c.L), "L must be positive");
    require(c.T_horizon > 0 && std::isfinite(c.T_horizon), "T_horizon must be positive");
    require(c.N >= 4 * c.l + 3, "N must be at least 4l+3 = " + std::to_string(4 * c.l + 3));
    require(c.dt > 0 && std::isfinite(c.dt), "dt must be positive");
    require(!c.tol_fp || *c.tol_fp > 0, "tol_fp must be positive");
    require(c.max_iter >= 1, "max_iter must be >= 1");
    require(!c.window || *c.window > 0, "window must be positive");
    require(c.manufactured == "poly_exp" || c.manufactured == "zero", "manufactured must be \"poly_exp\" or \"zero\"");
    require(c.gn_constant > 0, "gn_constant must be positive");
    require(!c.output_dir.empty(), "output_dir must not be empty");
    if (c.u0.type == "soliton") require(c.u0.x0 > 0 && c.u0.x0 < c.L, "soliton x0 must lie inside (0, L)");
    if (!c.output_dir.empty() && std::filesystem::path(c.output_dir).is_relative() && !base_dir.empty()) {
        c.output_dir = (base_dir / c.output_dir).string();
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config file " + file.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file " + file.string() + " is not valid JSON: " + e.what());
    }
    return parse_config(doc, file.parent_path());
}

InitialSpec parse_initial(const std::string& text) {
    if (!text.empty() && text.front() == '{') {
        try {
            return parse_initial_json(json::parse(text), {});
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("u0 spec is not valid JSON: ") + e.what());
        }
    }
    const auto colon = text.find(':');
    const std::string type = text.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
    json doc = {{"type", type}};
    if (type == "sin2") {
        if (!rest.empty()) doc["amplitude"] = split_numbers(rest).at(0);
    } else if (type == "soliton") {
        const auto v = split_numbers(rest);
        require(v.size() == 2, "soliton spec is soliton:c,x0");
        doc["c"] = v[0];
        doc["x0"] = v[1];
    } else if (type == "poly") {
        doc["coeffs"] = split_numbers(rest);
    } else if (type == "file") {
        doc["path"] = rest;
    } else if (type != "zero") {
        throw ConfigError("unknown u0 spec '" + text + "'");
    }
    return parse_initial_json(doc, {});
}

ordered_json to_json(const InitialSpec& s) {
    ordered_json j;
    j["type"] = s.type;
    if (s.type == "soliton") {
        j["c"] = s.c;
        j["x0"] = s.x0;
    } else if (s.type == "sin2") {
        j["amplitude"] = s.amplitude;
    } else if (s.type == "poly") {
        j["coeffs"] = s.coeffs;
    } else if (s.type == "file") {
        j["path"] = s.path;
    }
    return j;
}

ordered_json to_json(const RunConfig& c) {
    ordered_json j;
    j["k"] = c.k;
    j["l"] = c.l;
    j["L"] = c.L;
    j["T_horizon"] = c.T_horizon;
    j["N"] = c.N;
    j["dt"] = c.dt;
    j["u0_spec"] = to_json(c.u0);
    if (c.tol_fp) j["tol_fp"] = *c.tol_fp;
    j["max_iter"] = c.max_iter;
    j["output_dir"] = c.output_dir;
    j["seed"] = c.seed;
    if (c.window) j["window"] = *c.window;
    j["manufactured"] = c.manufactured;
    j["gn_constant"] = c.gn_constant;
    return j;
}

dispersive::GridFunction<double> make_initial(const InitialSpec& s, const dispersive::Grid<double>& grid,
                                              double* boundary_mismatch) {
    using dispersive::GridFunction;
    const double L = grid.length();
    GridFunction<double> u(grid);
    if (s.type == "zero") {
    } else if (s.type == "soliton") {
        u = GridFunction<double>::sample(grid, [&](double x) {
            const double q = 1.0 / std::cosh(std::sqrt(s.c) * (x - s.x0) / 2);
            return 3 * s.c * q * q;
        });
    } else if (s.type == "sin2") {
        u = GridFunction<double>::sample(grid, [&](double x) {
            const double q = std::sin(std::numbers::pi * x / L);
            return s.amplitude * q * q;
        });
    } else if (s.type == "poly") {
        u = GridFunction<double>::sample(grid, [&](double x) {
            double v = 0;
            for (auto it = s.coeffs.rbegin(); it != s.coeffs.rend(); ++it) v = v * x + *it;
            return v;
        });
    } else if (s.type == "file") {
        std::ifstream in(s.path);
        if (!in) throw ConfigError("cannot open initial data file " + s.path);
        std::vector<double> v;
        double x;
        while (in >> x) v.push_back(x);
        if (!in.eof()) throw ConfigError("initial data file " + s.path + " contains a non-numeric entry");
        const auto n = static_cast<std::size_t>(grid.size());
        Eigen::VectorXd interior(grid.size());
        double left = 0, right = 0;
        if (v.size() == n) {
            for (std::size_t i = 0; i < n; ++i) interior(static_cast<Eigen::Index>(i)) = v[i];
        } else if (v.size() == n + 2) {
            for (std::size_t i = 0; i < n; ++i) interior(static_cast<Eigen::Index>(i)) = v[i + 1];
            left = v.front();
            right = v.back();
        } else {
            throw ConfigError("initial data file " + s.path + " has " + std::to_string(v.size()) + " values, expected N = " +
                              std::to_string(n) + " or N+2");
        }
        u = GridFunction<double>(grid, interior, left, right);
    } else {
        throw ConfigError("unknown u0_spec type '" + s.type + "'");
    }
    if (!u.all_finite()) throw ConfigError("initial data contains non-finite values");
    if (boundary_mismatch) *boundary_mismatch = std::max(std::abs(u.left()), std::abs(u.right()));
    u.set_boundary(0.0, 0.0);
    return u;
}

}  // namespace dispersolve
