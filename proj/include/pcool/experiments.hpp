// Experiment runners behind the command-line tool. Each writes its files
// under config.output_dir and a short summary to `log`.
#ifndef PCOOL_EXPERIMENTS_HPP
#define PCOOL_EXPERIMENTS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcool/config.hpp"
#include "pcool/io.hpp"

namespace pcool {

enum ExitCode : int {
    kSuccess = 0,
    kConfigError = 1,
    kNumericalFailure = 2,
    kVerificationFailure = 3,
};

CoolingResult cmd_cool_closed(const ExperimentConfig& config, std::ostream& log);
std::vector<SweepRow> cmd_fidelity_sweep(const ExperimentConfig& config, std::ostream& log);
OpenRunResult cmd_cool_open(const ExperimentConfig& config, std::ostream& log);
void cmd_wigner(const ExperimentConfig& config, std::ostream& log);

/// Fidelity to vacuum and success probability for N = 1..n_atoms of the
/// dyadic sequence, from a single sequential run.
std::vector<SweepRow> fidelity_sweep(double n_t, std::size_t n_atoms, double tail_tol);

struct VerifyReport {
    std::uint64_t seed = 0;
    std::size_t instances = 0;
    /// Individual (instance, outcome pattern) comparisons.
    std::size_t cases = 0;
    double max_probability_deviation = 0.0;
    double max_state_deviation = 0.0;
    double max_count_deviation = 0.0;
    double max_coherence_deviation = 0.0;
    double max_completeness_deviation = 0.0;
    double tolerance = 1e-10;
    bool passed = true;
    /// First failing case, serialized for replay.
    nlohmann::json first_failure;
};

/// Randomized oracle-versus-closed-form comparison: small Fock-diagonal and
/// general states, random phases, every outcome pattern.
VerifyReport run_verification(std::uint64_t seed, std::size_t instances, bool inject_fault = false);
nlohmann::json to_json(const VerifyReport& report);

VerifyReport cmd_verify(const ExperimentConfig& config, std::ostream& log);

/// Dispatches on config.mode and maps failures to exit codes; error text
/// goes to `err`.
int run_command(const ExperimentConfig& config, std::ostream& log, std::ostream& err);

}  // namespace pcool

#endif  // PCOOL_EXPERIMENTS_HPP
