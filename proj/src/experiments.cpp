#include "pcool/experiments.hpp"

#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

#include "pcool/oracle.hpp"

namespace pcool {

namespace {

namespace fs = std::filesystem;

std::string distribution_csv(const FieldState& rho) {
    std::ostringstream out;
    write_distribution_csv(out, photon_distribution(rho));
    return out.str();
}

void write_wigner_files(const fs::path& dir, const std::string& stem, const FieldState& rho,
                        const PhaseGrid& grid, std::optional<double> n_t = std::nullopt) {
    const Eigen::MatrixXd w = wigner_diagonal(rho, grid);
    std::ostringstream csv;
    write_wigner_csv(csv, w, grid);
    write_text_file(dir / (stem + ".csv"), csv.str());
    write_text_file(dir / (stem + ".json"), wigner_header(grid, rho, n_t).dump(2) + "\n");
}

}  // namespace

CoolingResult cmd_cool_closed(const ExperimentConfig& config, std::ostream& log) {
    const Truncation trunc = choose_truncation(config.n_t, config.tail_tol);
    const FieldState initial = thermal_state(config.n_t, trunc);
    CoolingResult result = run_cooling(initial, dyadic_sequence(config.n_atoms), config.n_t);

    const fs::path& dir = config.output_dir;
    write_text_file(dir / "initial_distribution.csv", distribution_csv(initial));
    write_text_file(dir / "final_distribution.csv", distribution_csv(result.final_state));
    write_text_file(dir / "cooling_result.json", to_json(result).dump(2) + "\n");
    write_wigner_files(dir, "wigner_initial", initial, config.grid, config.n_t);
    write_wigner_files(dir, "wigner_final", result.final_state, config.grid);

    log << "dim = " << trunc.dim() << "\n"
        << "p_post = " << format_double(result.p_post) << "\n"
        << "vacuum_fidelity = " << format_double(vacuum_fidelity(result.final_state)) << "\n";
    return result;
}

std::vector<SweepRow> fidelity_sweep(double n_t, std::size_t n_atoms, double tail_tol) {
    // dyadic sequences are nested, so one run of n_atoms covers every N
    const CoolingResult run = cool_to_vacuum(n_t, n_atoms, choose_truncation(n_t, tail_tol));
    std::vector<SweepRow> rows;
    for (std::size_t k = 0; k < n_atoms; ++k) {
        rows.push_back({k + 1, run.fidelity_trace[k], run.p_trace[k]});
    }
    return rows;
}

std::vector<SweepRow> cmd_fidelity_sweep(const ExperimentConfig& config, std::ostream& log) {
    const auto rows = fidelity_sweep(config.n_t, config.n_atoms, config.tail_tol);
    std::ostringstream csv;
    write_sweep_csv(csv, rows);
    write_text_file(config.output_dir / "fidelity_sweep.csv", csv.str());
    log << csv.str();
    return rows;
}

OpenRunResult cmd_cool_open(const ExperimentConfig& config, std::ostream& log) {
    const PhysicalParams params = config.resolved_physical();
    const Truncation trunc = choose_truncation(config.n_t, config.tail_tol);
    const FieldState initial = thermal_state(config.n_t, trunc);
    OpenRunOptions options;
    options.trajectory_stride = config.trajectory_stride;
    OpenRunResult result = run_open_protocol(params, dyadic_sequence(config.n_atoms), initial, options);

    const fs::path& dir = config.output_dir;
    nlohmann::json j = to_json(result);
    j["n_t"] = config.n_t;
    j["n_atoms"] = config.n_atoms;
    j["params"] = to_json(params);
    write_text_file(dir / "open_result.json", j.dump(2) + "\n");
    write_text_file(dir / "initial_distribution.csv", distribution_csv(initial));
    write_text_file(dir / "open_final_distribution.csv", distribution_csv(result.final_field));
    write_wigner_files(dir, "wigner_open_final", result.final_field, config.grid);
    if (!result.trajectory.empty()) {
        std::ostringstream csv;
        write_trajectory_csv(csv, result.trajectory);
        write_text_file(dir / "trajectory.csv", csv.str());
    }

    log << "dim = " << trunc.dim() << "\n"
        << "p_total = " << format_double(result.p_total) << "\n"
        << "vacuum_fidelity = " << format_double(result.vacuum_fidelity) << "\n"
        << "best_thermal_n_t = " << format_double(result.best_thermal_nbar) << "\n"
        << "best_thermal_fidelity = " << format_double(result.fidelity_to_best_thermal) << "\n";
    return result;
}

void cmd_wigner(const ExperimentConfig& config, std::ostream& log) {
    const Truncation trunc = choose_truncation(config.n_t, config.tail_tol);
    const FieldState thermal = thermal_state(config.n_t, trunc);
    const CoolingResult cooled = run_cooling(thermal, dyadic_sequence(config.n_atoms), config.n_t);
    write_wigner_files(config.output_dir, "wigner_thermal", thermal, config.grid, config.n_t);
    write_wigner_files(config.output_dir, "wigner_cooled", cooled.final_state, config.grid);
    log << "W_thermal(0) = " << format_double(wigner_point(photon_distribution(thermal), {0.0, 0.0}))
        << "\n"
        << "W_cooled(0) = "
        << format_double(wigner_point(photon_distribution(cooled.final_state), {0.0, 0.0})) << "\n";
}

namespace {

// States are compared only when the postselected branch is well conditioned.
constexpr double kConditioning = 1e-4;

struct Draw {
    std::size_t dim;
    std::vector<double> phases;
    std::vector<double> populations;
};

}  // namespace

VerifyReport run_verification(std::uint64_t seed, std::size_t instances, bool inject_fault) {
    VerifyReport report;
    report.seed = seed;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> dim_dist(2, 16);
    std::uniform_int_distribution<std::size_t> atoms_dist(1, 4);
    std::uniform_real_distribution<double> phase_dist(0.0, constants::two_pi);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    auto fail = [&](std::size_t instance, const std::string& kind, double deviation,
                    const Draw& draw, const std::string& pattern) {
        if (!(deviation > report.tolerance)) return;
        if (!report.passed) return;
        report.passed = false;
        report.first_failure = {{"seed", seed},         {"instance", instance},
                                {"check", kind},        {"deviation", deviation},
                                {"dim", draw.dim},      {"phases", draw.phases},
                                {"populations", draw.populations}, {"outcomes", pattern}};
    };
    const double fault = inject_fault ? 1e-6 : 0.0;

    for (std::size_t instance = 0; instance < instances; ++instance) {
        Draw draw{dim_dist(rng), {}, {}};
        const std::size_t n_atoms = atoms_dist(rng);
        for (std::size_t k = 0; k < n_atoms; ++k) draw.phases.push_back(phase_dist(rng));
        const PhaseSequence seq(draw.phases);
        const auto d = static_cast<Eigen::Index>(draw.dim);

        Vector pop(d);
        for (Eigen::Index n = 0; n < d; ++n) pop(n) = unit(rng);
        const FieldState diagonal = FieldState::from_distribution(pop, true);
        const Vector normalized = photon_distribution(diagonal);
        draw.populations.assign(normalized.data(), normalized.data() + d);

        Matrix g(d, d);
        for (Eigen::Index i = 0; i < d; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) g(i, j) = cplx(gauss(rng), gauss(rng));
        }
        Matrix general = g * g.adjoint();
        general /= general.trace().real();
        general = (0.5 * (general + general.adjoint())).eval();
        const FieldState coherent{general};

        std::vector<double> count_prob(n_atoms + 1, 0.0);
        std::vector<Vector> count_mix(n_atoms + 1, Vector::Zero(d));

        for (std::size_t mask = 0; mask < (std::size_t{1} << n_atoms); ++mask) {
            std::vector<Outcome> outcomes;
            std::string pattern;
            std::size_t n_excited = 0;
            for (std::size_t k = 0; k < n_atoms; ++k) {
                const bool excited = (mask >> k) & 1U;
                outcomes.push_back(excited ? Outcome::Excited : Outcome::Ground);
                pattern += excited ? 'e' : 'g';
                n_excited += excited ? 1 : 0;
            }

            for (const FieldState* input : {&diagonal, &coherent}) {
                const bool is_diag = input == &diagonal;
                double p_oracle = 0.0;
                double p_closed = 0.0;
                std::optional<FieldState> s_oracle;
                std::optional<FieldState> s_closed;
                bool oracle_ill_conditioned = false;
                try {
                    Postselected o = simulate_sequence(*input, seq, outcomes);
                    p_oracle = o.p_post;
                    s_oracle.emplace(std::move(o.state));
                } catch (const ImpossiblePostselection&) {
                } catch (const NumericalError&) {
                    oracle_ill_conditioned = true;
                }
                try {
                    Postselected c = postselect_pattern(*input, seq, outcomes);
                    p_closed = c.p_post + fault;
                    s_closed.emplace(std::move(c.state));
                } catch (const ImpossiblePostselection&) {
                    p_closed = fault;
                }
                ++report.cases;
                if (oracle_ill_conditioned) {
                    // normalization of a near-zero branch amplified roundoff
                    if (p_closed > kConditioning) {
                        fail(instance, "oracle failed on a well-conditioned branch", 1.0, draw, pattern);
                    }
                    continue;
                }
                const double dp = std::abs(p_oracle - p_closed);
                report.max_probability_deviation = std::max(report.max_probability_deviation, dp);
                fail(instance, is_diag ? "probability" : "probability (coherent input)", dp, draw,
                     pattern);

                if (s_oracle && s_closed && p_oracle > kConditioning) {
                    const double dt = trace_distance(s_oracle->matrix(), s_closed->matrix());
                    if (is_diag) {
                        report.max_state_deviation = std::max(report.max_state_deviation, dt);
                    } else {
                        report.max_coherence_deviation = std::max(report.max_coherence_deviation, dt);
                    }
                    fail(instance, is_diag ? "state" : "coherent state", dt, draw, pattern);
                }
                if (is_diag && s_oracle) {
                    count_prob[n_excited] += p_oracle;
                    count_mix[n_excited] += p_oracle * photon_distribution(*s_oracle);
                }
            }
        }

        for (std::size_t n_excited = 0; n_excited <= n_atoms; ++n_excited) {
            double p_closed = 0.0;
            std::optional<FieldState> s_closed;
            try {
                Postselected c = postselect_evolve(diagonal, seq, PostselectionSpec{n_excited});
                p_closed = c.p_post + fault;
                s_closed.emplace(std::move(c.state));
            } catch (const ImpossiblePostselection&) {
                p_closed = fault;
            }
            double dev = std::abs(count_prob[n_excited] - p_closed);
            if (s_closed && count_prob[n_excited] > kConditioning) {
                const Vector mix = count_mix[n_excited] / count_prob[n_excited];
                dev = std::max(dev, 0.5 * (mix - photon_distribution(*s_closed)).cwiseAbs().sum());
            }
            report.max_count_deviation = std::max(report.max_count_deviation, dev);
            fail(instance, "excited-count postselection N_e=" + std::to_string(n_excited), dev, draw,
                 "");
        }

        // the two measurement branches of one atom must recombine to the input
        // populations: the dispersive coupling exchanges no photons
        const JointState joint = evolve_one_atom(attach_atom(diagonal), draw.phases.front());
        const Matrix recombined = measure_atom(joint, Outcome::Ground).matrix +
                                  measure_atom(joint, Outcome::Excited).matrix;
        const double dev = std::max(trace_distance(recombined, partial_trace_atom(joint.matrix(), draw.dim)),
                                    trace_distance(recombined, diagonal.matrix()));
        report.max_completeness_deviation = std::max(report.max_completeness_deviation, dev);
        fail(instance, "outcome completeness", dev, draw, "");
    }
    report.instances = instances;
    return report;
}

nlohmann::json to_json(const VerifyReport& report) {
    nlohmann::json j = {
        {"seed", report.seed},
        {"instances", report.instances},
        {"cases", report.cases},
        {"tolerance", report.tolerance},
        {"max_probability_deviation", report.max_probability_deviation},
        {"max_state_deviation", report.max_state_deviation},
        {"max_count_deviation", report.max_count_deviation},
        {"max_coherence_deviation", report.max_coherence_deviation},
        {"max_completeness_deviation", report.max_completeness_deviation},
        {"passed", report.passed},
    };
    if (!report.passed) j["first_failure"] = report.first_failure;
    return j;
}

VerifyReport cmd_verify(const ExperimentConfig& config, std::ostream& log) {
    VerifyReport report = run_verification(config.seed, config.verify_cases, config.inject_fault);
    write_text_file(config.output_dir / "verify_report.json", to_json(report).dump(2) + "\n");
    log << "instances = " << report.instances << "\n"
        << "cases = " << report.cases << "\n"
        << "max_probability_deviation = " << format_double(report.max_probability_deviation) << "\n"
        << "max_state_deviation = " << format_double(report.max_state_deviation) << "\n"
        << "max_count_deviation = " << format_double(report.max_count_deviation) << "\n"
        << "max_coherence_deviation = " << format_double(report.max_coherence_deviation) << "\n"
        << (report.passed ? "PASS" : "FAIL") << "\n";
    return report;
}

int run_command(const ExperimentConfig& config, std::ostream& log, std::ostream& err) {
    try {
        config.validate();
        if (config.mode == "cool-closed") {
            cmd_cool_closed(config, log);
        } else if (config.mode == "fidelity-sweep") {
            cmd_fidelity_sweep(config, log);
        } else if (config.mode == "cool-open") {
            cmd_cool_open(config, log);
        } else if (config.mode == "wigner") {
            cmd_wigner(config, log);
        } else if (config.mode == "verify") {
            const VerifyReport report = cmd_verify(config, log);
            if (!report.passed) {
                err << "verification failed: " << report.first_failure.dump() << "\n";
                return kVerificationFailure;
            }
        }
        return kSuccess;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const PreconditionError& e) {
        err << "invalid input: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kNumericalFailure;
    }
}

}  // namespace pcool
