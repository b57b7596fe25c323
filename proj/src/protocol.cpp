#include "pcool/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pcool {

char to_char(Outcome outcome) { return outcome == Outcome::Ground ? 'g' : 'e'; }

Outcome outcome_from_char(char c) {
    switch (c) {
        case 'g':
        case 'G':
            return Outcome::Ground;
        case 'e':
        case 'E':
            return Outcome::Excited;
        default:
            throw PreconditionError(std::string("unknown atomic outcome '") + c + "'");
    }
}

std::vector<Outcome> parse_outcomes(const std::string& pattern) {
    std::vector<Outcome> out;
    out.reserve(pattern.size());
    for (char c : pattern) out.push_back(outcome_from_char(c));
    return out;
}

PhaseSequence::PhaseSequence(std::vector<double> phases) : phases_(std::move(phases)) {
    if (phases_.empty()) throw PreconditionError("phase sequence needs at least one atom");
    for (double phi : phases_) {
        if (!std::isfinite(phi)) throw PreconditionError("phase sequence entries must be finite");
    }
}

PhaseSequence dyadic_sequence(std::size_t n_atoms) {
    if (n_atoms == 0) throw PreconditionError("dyadic sequence needs at least one atom");
    std::vector<double> phases(n_atoms);
    for (std::size_t k = 0; k < n_atoms; ++k) {
        phases[k] = std::ldexp(constants::pi, -static_cast<int>(k));
    }
    return PhaseSequence(std::move(phases));
}

double phase_from_physics(double g, double delta, double tau) {
    if (delta == 0.0) throw PreconditionError("detuning must be nonzero in the dispersive regime");
    if (tau < 0.0) throw PreconditionError("interaction time must be non-negative");
    return g * g * tau / delta;
}

double interaction_time_for_phase(double g, double delta, double phi) {
    if (!(g > 0.0)) throw PreconditionError("coupling must be positive");
    return phi * delta / (g * g);
}

double detection_weight(double phi, std::size_t n, Outcome outcome) {
    const double half = 0.5 * phi * static_cast<double>(n);
    const double amp = outcome == Outcome::Ground ? std::cos(half) : std::sin(half);
    return amp * amp;
}

Eigen::VectorXcd kraus_diagonal(double phi, std::size_t dim, Outcome outcome) {
    Eigen::VectorXcd k(static_cast<Eigen::Index>(dim));
    for (std::size_t n = 0; n < dim; ++n) {
        const double half = 0.5 * phi * static_cast<double>(n);
        const double amp = outcome == Outcome::Ground ? std::cos(half) : std::sin(half);
        k(static_cast<Eigen::Index>(n)) = std::polar(1.0, -half) * amp;
    }
    return k;
}

Branch single_atom_filter(const Matrix& rho, double phi, Outcome outcome) {
    const Eigen::VectorXcd k = kraus_diagonal(phi, static_cast<std::size_t>(rho.rows()), outcome);
    Matrix out = (k * k.adjoint()).cwiseProduct(rho);
    const double p = out.trace().real();
    return {std::move(out), p};
}

Branch single_atom_filter(const FieldState& rho, double phi, Outcome outcome) {
    return single_atom_filter(rho.matrix(), phi, outcome);
}

namespace {

void require_possible(double p, const std::string& where) {
    if (!(p >= impossible_probability)) {
        std::ostringstream msg;
        msg << "postselection impossible: " << where << " has probability " << p;
        throw ImpossiblePostselection(msg.str());
    }
}

}  // namespace

Postselected postselect_pattern(const FieldState& rho0, const PhaseSequence& seq,
                                std::span<const Outcome> outcomes) {
    if (outcomes.size() != seq.size()) {
        throw PreconditionError("postselection pattern length must match the phase sequence");
    }
    const auto dim = rho0.dim();
    Eigen::VectorXcd amp = Eigen::VectorXcd::Ones(static_cast<Eigen::Index>(dim));
    for (std::size_t k = 0; k < seq.size(); ++k) {
        amp = amp.cwiseProduct(kraus_diagonal(seq[k], dim, outcomes[k]));
    }
    Matrix out = (amp * amp.adjoint()).cwiseProduct(rho0.matrix());
    const double p = out.trace().real();
    require_possible(p, "outcome pattern");
    out /= p;
    return {FieldState(std::move(out)), p};
}

Postselected postselect_evolve(const FieldState& rho0, const PhaseSequence& seq,
                               const PostselectionSpec& spec) {
    const std::size_t n_atoms = seq.size();
    if (spec.n_excited > n_atoms) {
        throw PreconditionError("number of excited detections exceeds number of atoms");
    }
    if (!rho0.is_diagonal()) {
        throw PreconditionError(
            "count postselection requires a Fock-diagonal input; use postselect_pattern");
    }
    const Vector pop = photon_distribution(rho0);
    const auto dim = pop.size();
    Vector weighted(dim);
    // weight[j] accumulates the summed probability of patterns with j excited atoms
    std::vector<double> weight(spec.n_excited + 1);
    for (Eigen::Index n = 0; n < dim; ++n) {
        std::fill(weight.begin(), weight.end(), 0.0);
        weight[0] = 1.0;
        for (std::size_t k = 0; k < n_atoms; ++k) {
            const double c2 = detection_weight(seq[k], static_cast<std::size_t>(n), Outcome::Ground);
            const double s2 = detection_weight(seq[k], static_cast<std::size_t>(n), Outcome::Excited);
            for (std::size_t j = std::min(k + 1, spec.n_excited); j > 0; --j) {
                weight[j] = weight[j] * c2 + weight[j - 1] * s2;
            }
            weight[0] *= c2;
        }
        weighted(n) = pop(n) * weight[spec.n_excited];
    }
    const double p = weighted.sum();
    require_possible(p, "excited-count postselection");
    return {FieldState::from_distribution(weighted / p), p};
}

CoolingResult run_cooling(const FieldState& rho0, const PhaseSequence& seq, double n_t) {
    std::vector<double> fidelity_trace;
    std::vector<double> p_trace;
    Matrix rho = rho0.matrix();
    double cumulative = 1.0;
    for (std::size_t k = 0; k < seq.size(); ++k) {
        Branch branch = single_atom_filter(rho, seq[k], Outcome::Ground);
        require_possible(branch.probability, "atom " + std::to_string(k + 1));
        cumulative *= branch.probability;
        rho = branch.matrix / branch.probability;
        fidelity_trace.push_back(std::clamp(rho(0, 0).real(), 0.0, 1.0));
        p_trace.push_back(cumulative);
    }
    return {n_t, seq, FieldState(std::move(rho)), cumulative, std::move(fidelity_trace),
            std::move(p_trace)};
}

CoolingResult cool_to_vacuum(double n_t, std::size_t n_atoms, const Truncation& trunc) {
    return run_cooling(thermal_state(n_t, trunc), dyadic_sequence(n_atoms), n_t);
}

std::vector<std::size_t> survivors(std::span<const double> phases, std::size_t dim, double tol) {
    std::vector<std::size_t> out;
    for (std::size_t n = 0; n < dim; ++n) {
        double w = 1.0;
        for (double phi : phases) w *= detection_weight(phi, n, Outcome::Ground);
        if (w > tol) out.push_back(n);
    }
    return out;
}

std::vector<std::size_t> survivors(const PhaseSequence& seq, const Truncation& trunc, double tol) {
    return survivors(seq.values(), trunc.dim(), tol);
}

double asymptotic_success(double n_t) {
    if (n_t < 0.0) throw PreconditionError("mean photon number must be non-negative");
    return 1.0 / (1.0 + n_t);
}

double binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    k = std::min(k, n - k);
    double c = 1.0;
    for (std::size_t i = 1; i <= k; ++i) {
        c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return c;
}

}  // namespace pcool
