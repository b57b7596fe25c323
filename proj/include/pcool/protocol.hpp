// Closed-form ideal cooling protocol: Ramsey-dispersive atoms crossing the
// cavity one at a time, each detected in a prescribed level.
#ifndef PCOOL_PROTOCOL_HPP
#define PCOOL_PROTOCOL_HPP

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "pcool/fock.hpp"

namespace pcool {

/// Atomic detection result. Basis order throughout is (|e>, |g>).
enum class Outcome { Excited, Ground };

char to_char(Outcome outcome);
Outcome outcome_from_char(char c);
std::vector<Outcome> parse_outcomes(const std::string& pattern);

/// One-photon dispersive phase shift per atom, in crossing order.
class PhaseSequence {
public:
    explicit PhaseSequence(std::vector<double> phases);
    PhaseSequence(std::initializer_list<double> phases)
        : PhaseSequence(std::vector<double>(phases)) {}

    std::size_t size() const { return phases_.size(); }
    double operator[](std::size_t k) const { return phases_[k]; }
    std::span<const double> values() const { return phases_; }
    auto begin() const { return phases_.begin(); }
    auto end() const { return phases_.end(); }

private:
    std::vector<double> phases_;
};

/// Number of atoms required in |e>; the rest are required in |g>, any order.
struct PostselectionSpec {
    std::size_t n_excited = 0;
};

/// Unnormalized conditional field matrix paired with its trace.
struct Branch {
    Matrix matrix;
    double probability;
};

struct Postselected {
    FieldState state;
    double p_post;
};

struct CoolingResult {
    double n_t;
    PhaseSequence phases;
    FieldState final_state;
    double p_post;
    /// Vacuum fidelity after each atom.
    std::vector<double> fidelity_trace;
    /// Cumulative success probability after each atom.
    std::vector<double> p_trace;
};

inline constexpr double impossible_probability = 1e-300;

/// phi_k = pi / 2^(k-1), k = 1..n_atoms.
PhaseSequence dyadic_sequence(std::size_t n_atoms);

/// phi = g^2 tau / delta (angular frequencies in rad/s).
double phase_from_physics(double g, double delta, double tau);
double interaction_time_for_phase(double g, double delta, double phi);

/// cos^2(phi n / 2) for |g>, sin^2(phi n / 2) for |e>.
double detection_weight(double phi, std::size_t n, Outcome outcome);

/// Conditional Kraus amplitudes, up to a global phase: e^{-i phi n/2} cos(phi n/2)
/// for |g> and e^{-i phi n/2} sin(phi n/2) for |e>.
Eigen::VectorXcd kraus_diagonal(double phi, std::size_t dim, Outcome outcome);

/// One atom through R, C, R and detected in `outcome`. Accepts coherences.
Branch single_atom_filter(const Matrix& rho, double phi, Outcome outcome);
Branch single_atom_filter(const FieldState& rho, double phi, Outcome outcome);

/// Joint postselection on one explicit outcome per atom.
Postselected postselect_pattern(const FieldState& rho0, const PhaseSequence& seq,
                                std::span<const Outcome> outcomes);

/// Postselection on the count of atoms found in |e>, summed over orderings.
/// Fock-diagonal input only.
Postselected postselect_evolve(const FieldState& rho0, const PhaseSequence& seq,
                               const PostselectionSpec& spec);

/// Atoms applied one by one, each detected in |g>, with per-atom traces.
CoolingResult run_cooling(const FieldState& rho0, const PhaseSequence& seq, double n_t = 0.0);

/// Thermal input cooled by the dyadic sequence.
CoolingResult cool_to_vacuum(double n_t, std::size_t n_atoms, const Truncation& trunc);

/// Fock levels whose all-|g> filter weight exceeds tol.
std::vector<std::size_t> survivors(std::span<const double> phases, std::size_t dim, double tol);
std::vector<std::size_t> survivors(const PhaseSequence& seq, const Truncation& trunc, double tol);

/// Large-N limit of the cooling success probability, 1/(1+n_t).
double asymptotic_success(double n_t);

double binomial(std::size_t n, std::size_t k);

}  // namespace pcool

#endif  // PCOOL_PROTOCOL_HPP
