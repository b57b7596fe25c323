#include "pcool/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace pcool {

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void write_distribution_csv(std::ostream& out, const Vector& populations) {
    out << "n,p_n\n";
    for (Eigen::Index n = 0; n < populations.size(); ++n) {
        out << n << ',' << format_double(populations(n)) << '\n';
    }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "N,fidelity,p_post\n";
    for (const auto& row : rows) {
        out << row.n_atoms << ',' << format_double(row.fidelity) << ','
            << format_double(row.p_post) << '\n';
    }
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryPoint>& points) {
    out << "time_s,mean_photon\n";
    for (const auto& pt : points) {
        out << format_double(pt.time) << ',' << format_double(pt.mean_photon) << '\n';
    }
}

void write_wigner_csv(std::ostream& out, const Eigen::MatrixXd& w, const PhaseGrid& grid) {
    out << "x,p,W\n";
    for (std::size_t i = 0; i < grid.nx(); ++i) {
        for (std::size_t j = 0; j < grid.np(); ++j) {
            out << format_double(grid.x(i)) << ',' << format_double(grid.p(j)) << ','
                << format_double(w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))
                << '\n';
        }
    }
}

namespace {

std::vector<double> to_vector(const Vector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

nlohmann::json to_json(const CoolingResult& result) {
    return {
        {"n_t", result.n_t},
        {"phases", std::vector<double>(result.phases.begin(), result.phases.end())},
        {"p_trace", result.p_trace},
        {"fidelity_trace", result.fidelity_trace},
        {"p_post", result.p_post},
        {"distribution", to_vector(photon_distribution(result.final_state))},
    };
}

nlohmann::json to_json(const OpenRunResult& result) {
    nlohmann::json j = {
        {"distribution", to_vector(photon_distribution(result.final_field))},
        {"interaction_times_s", result.interaction_times},
        {"p_stage", result.p_stage},
        {"p_total", result.p_total},
        {"vacuum_fidelity", result.vacuum_fidelity},
        {"best_thermal", {{"n_t", result.best_thermal_nbar}, {"fidelity", result.fidelity_to_best_thermal}}},
        {"max_trace_drift", result.max_trace_drift},
        {"min_eigenvalue", result.min_eigenvalue},
    };
    return j;
}

nlohmann::json to_json(const PhysicalParams& params) {
    using constants::two_pi;
    return {
        {"g_hz", params.g / two_pi},
        {"delta_hz", params.delta / two_pi},
        {"omega_hz", params.omega / two_pi},
        {"kappa_per_s", params.kappa},
        {"gamma_per_s", params.gamma},
        {"n_t_bath", params.n_t_bath},
        {"gap_s", params.gap},
        {"dt_s", params.dt},
    };
}

nlohmann::json to_json(const PhaseGrid& grid) {
    return {{"x_min", grid.x_min()}, {"x_max", grid.x_max()}, {"p_min", grid.p_min()},
            {"p_max", grid.p_max()}, {"nx", grid.nx()},       {"np", grid.np()}};
}

std::string state_hash(const FieldState& rho) {
    std::uint64_t h = 14695981039346656037ULL;
    const Vector pop = photon_distribution(rho);
    for (Eigen::Index n = 0; n < pop.size(); ++n) {
        for (char c : format_double(pop(n)) + ";") {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ULL;
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

nlohmann::json wigner_header(const PhaseGrid& grid, const FieldState& rho, std::optional<double> n_t) {
    nlohmann::json j = {{"grid", to_json(grid)}, {"dim", rho.dim()}, {"columns", {"x", "p", "W"}}};
    if (n_t) {
        j["n_t"] = *n_t;
    } else {
        j["state_hash"] = state_hash(rho);
    }
    return j;
}

Vector read_distribution_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "n,p_n") {
        throw PreconditionError("distribution CSV must start with header n,p_n");
    }
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw PreconditionError("malformed distribution row: " + line);
        const auto n = std::stoul(line.substr(0, comma));
        if (n != values.size()) throw PreconditionError("distribution rows out of order");
        values.push_back(std::stod(line.substr(comma + 1)));
    }
    return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << contents;
}

}  // namespace pcool
