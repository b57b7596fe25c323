// Experiment configuration: flat "key = value" text with '#' comments.
//
// Frequencies are ordinary frequencies in Hz (g-hz, delta-hz, omega-hz) and
// are converted to angular frequencies on load. Every key can also be given
// as a command-line flag of the same name.
#ifndef PCOOL_CONFIG_HPP
#define PCOOL_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcool/lindblad.hpp"
#include "pcool/wigner.hpp"

namespace pcool {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what, std::size_t line = 0);
    /// 1-based line in the config file, 0 when not from a file.
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct ExperimentConfig {
    std::string mode = "cool-closed";
    double n_t = 3.6;
    std::size_t n_atoms = 5;
    /// Reservoir occupancy; follows n_t unless set explicitly.
    std::optional<double> n_t_bath;
    PhysicalParams physical = PhysicalParams::laboratory();
    double tail_tol = 1e-8;
    PhaseGrid grid = PhaseGrid::standard();
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 1;
    std::size_t verify_cases = 1000;
    std::size_t trajectory_stride = 0;
    /// Test hook: corrupt closed-form results inside `verify`.
    bool inject_fault = false;

    /// Physical parameters with the bath occupancy resolved.
    PhysicalParams resolved_physical() const;
    void validate() const;
};

/// Keys understood by apply_setting, in documentation order.
const std::vector<std::string>& config_keys();

void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value,
                   std::size_t line = 0);
void parse_config(std::istream& in, ExperimentConfig& config);
void load_config_file(const std::filesystem::path& path, ExperimentConfig& config);

}  // namespace pcool

#endif  // PCOOL_CONFIG_HPP
