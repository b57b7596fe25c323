// CSV and JSON serialization of results. Floats in CSV are written with 17
// significant digits.
#ifndef PCOOL_IO_HPP
#define PCOOL_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcool/lindblad.hpp"
#include "pcool/protocol.hpp"
#include "pcool/wigner.hpp"

namespace pcool {

std::string format_double(double value);

struct SweepRow {
    std::size_t n_atoms;
    double fidelity;
    double p_post;
};

void write_distribution_csv(std::ostream& out, const Vector& populations);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryPoint>& points);
/// Row-major "x,p,W" with x varying slowest.
void write_wigner_csv(std::ostream& out, const Eigen::MatrixXd& w, const PhaseGrid& grid);

nlohmann::json to_json(const CoolingResult& result);
nlohmann::json to_json(const OpenRunResult& result);
nlohmann::json to_json(const PhysicalParams& params);
nlohmann::json to_json(const PhaseGrid& grid);

/// Header stored next to a Wigner CSV: the grid plus n_t (thermal input) or
/// a hash of the populations.
nlohmann::json wigner_header(const PhaseGrid& grid, const FieldState& rho,
                             std::optional<double> n_t = std::nullopt);

/// FNV-1a over the 17-digit decimal populations; stable across platforms.
std::string state_hash(const FieldState& rho);

/// Parse a "n,p_n" CSV back into populations.
Vector read_distribution_csv(std::istream& in);

void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace pcool

#endif  // PCOOL_IO_HPP
