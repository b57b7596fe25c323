#include "pcool/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

namespace pcool {

namespace {

std::string with_line(const std::string& what, std::size_t line) {
    return line ? "line " + std::to_string(line) + ": " + what : what;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& value, std::size_t line) {
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != value.size() || !std::isfinite(out)) {
        throw ConfigError("'" + key + "' expects a number, got '" + value + "'", line);
    }
    return out;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& value, std::size_t line) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ConfigError("'" + key + "' expects a non-negative integer, got '" + value + "'", line);
    }
    return out;
}

bool to_bool(const std::string& key, const std::string& value, std::size_t line) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("'" + key + "' expects true or false, got '" + value + "'", line);
}

double rate_from_lifetime(const std::string& key, double lifetime, std::size_t line) {
    if (lifetime < 0.0) throw ConfigError("'" + key + "' must be non-negative", line);
    // zero lifetime is read as "no decay"
    return lifetime == 0.0 ? 0.0 : 1.0 / lifetime;
}

}  // namespace

ConfigError::ConfigError(const std::string& what, std::size_t line)
    : std::runtime_error(with_line(what, line)), line_(line) {}

PhysicalParams ExperimentConfig::resolved_physical() const {
    PhysicalParams p = physical;
    p.n_t_bath = n_t_bath.value_or(n_t);
    return p;
}

void ExperimentConfig::validate() const {
    static const std::vector<std::string> modes = {"cool-closed", "cool-open", "fidelity-sweep",
                                                   "wigner", "verify"};
    if (std::find(modes.begin(), modes.end(), mode) == modes.end()) {
        throw ConfigError("unknown mode '" + mode + "'");
    }
    if (n_t < 0.0) throw ConfigError("n-t must be non-negative");
    if (n_atoms < 1) throw ConfigError("atoms must be at least 1");
    if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw ConfigError("tail-tol must lie in (0, 1)");
    try {
        resolved_physical().validate();
    } catch (const PreconditionError& e) {
        throw ConfigError(e.what());
    }
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "mode",     "n-t",      "atoms",           "out",          "tail-tol",   "dt",
        "gap",      "seed",     "n-t-bath",        "g-hz",         "delta-hz",   "omega-hz",
        "kappa",    "gamma",    "cavity-lifetime", "atom-lifetime", "x-min",     "x-max",
        "p-min",    "p-max",    "nx",              "np",           "verify-cases",
        "trajectory-stride",    "inject-fault"};
    return keys;
}

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value,
                   std::size_t line) {
    using constants::two_pi;
    auto num = [&] { return to_double(key, value, line); };
    auto count = [&] { return static_cast<std::size_t>(to_unsigned(key, value, line)); };
    auto grid_update = [&](double x_min, double x_max, double p_min, double p_max, std::size_t nx,
                           std::size_t np) {
        try {
            c.grid = PhaseGrid(x_min, x_max, p_min, p_max, nx, np);
        } catch (const PreconditionError& e) {
            throw ConfigError(std::string(e.what()) + " (setting '" + key + "')", line);
        }
    };
    const PhaseGrid& g = c.grid;

    if (key == "mode") {
        c.mode = value;
    } else if (key == "n-t") {
        c.n_t = num();
    } else if (key == "atoms") {
        c.n_atoms = count();
    } else if (key == "out") {
        c.output_dir = value;
    } else if (key == "tail-tol") {
        c.tail_tol = num();
    } else if (key == "dt") {
        c.physical.dt = num();
    } else if (key == "gap") {
        c.physical.gap = num();
    } else if (key == "seed") {
        c.seed = to_unsigned(key, value, line);
    } else if (key == "n-t-bath") {
        c.n_t_bath = num();
    } else if (key == "g-hz") {
        c.physical.g = two_pi * num();
    } else if (key == "delta-hz") {
        c.physical.delta = two_pi * num();
    } else if (key == "omega-hz") {
        c.physical.omega = two_pi * num();
    } else if (key == "kappa") {
        c.physical.kappa = num();
    } else if (key == "gamma") {
        c.physical.gamma = num();
    } else if (key == "cavity-lifetime") {
        c.physical.kappa = rate_from_lifetime(key, num(), line);
    } else if (key == "atom-lifetime") {
        c.physical.gamma = rate_from_lifetime(key, num(), line);
    } else if (key == "x-min") {
        grid_update(num(), g.x_max(), g.p_min(), g.p_max(), g.nx(), g.np());
    } else if (key == "x-max") {
        grid_update(g.x_min(), num(), g.p_min(), g.p_max(), g.nx(), g.np());
    } else if (key == "p-min") {
        grid_update(g.x_min(), g.x_max(), num(), g.p_max(), g.nx(), g.np());
    } else if (key == "p-max") {
        grid_update(g.x_min(), g.x_max(), g.p_min(), num(), g.nx(), g.np());
    } else if (key == "nx") {
        grid_update(g.x_min(), g.x_max(), g.p_min(), g.p_max(), count(), g.np());
    } else if (key == "np") {
        grid_update(g.x_min(), g.x_max(), g.p_min(), g.p_max(), g.nx(), count());
    } else if (key == "verify-cases") {
        c.verify_cases = count();
    } else if (key == "trajectory-stride") {
        c.trajectory_stride = count();
    } else if (key == "inject-fault") {
        c.inject_fault = to_bool(key, value, line);
    } else {
        throw ConfigError("unknown key '" + key + "'", line);
    }
}

void parse_config(std::istream& in, ExperimentConfig& config) {
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (content.empty()) continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("expected 'key = value', got '" + content + "'", line);
        }
        const std::string key = trim(content.substr(0, eq));
        const std::string value = trim(content.substr(eq + 1));
        if (key.empty()) throw ConfigError("missing key before '='", line);
        if (value.empty()) throw ConfigError("missing value for '" + key + "'", line);
        apply_setting(config, key, value, line);
    }
}

void load_config_file(const std::filesystem::path& path, ExperimentConfig& config) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    parse_config(in, config);
}

}  // namespace pcool
