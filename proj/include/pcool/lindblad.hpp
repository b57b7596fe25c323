// Open-system cooling run: dispersive atom-field interaction with thermal
// atomic and cavity dissipation, field-only relaxation between atoms,
// instantaneous Ramsey pulses and per-atom postselection on |g>.
//
// Hamiltonians are expressed in angular-frequency units (H / hbar), so the
// commutator term of the master equation is -i [H, rho].
#ifndef PCOOL_LINDBLAD_HPP
#define PCOOL_LINDBLAD_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pcool/fock.hpp"
#include "pcool/protocol.hpp"

namespace pcool {

struct PhysicalParams {
    double g;          // vacuum Rabi coupling, rad/s
    double delta;      // atom-cavity detuning, rad/s
    double omega;      // cavity frequency, rad/s
    double kappa;      // cavity energy decay rate, 1/s
    double gamma;      // atomic decay rate, 1/s
    double n_t_bath;   // reservoir occupancy
    double gap;        // atom-free interval after each atom, s
    double dt;         // integrator step, s

    /// Circular Rydberg atoms in a 51.1 GHz superconducting cavity.
    static PhysicalParams laboratory(double n_t_bath = 3.6);

    /// Dispersive one-photon frequency shift g^2 / delta.
    double dispersive_shift() const { return g * g / delta; }
    /// Largest step allowed: 100 steps per fastest timescale.
    double max_dt() const;
    /// Throws PreconditionError on invalid rates or step.
    void validate() const;
};

/// Jump operator with its rate folded in (L = sqrt(rate) * op).
struct Dissipator {
    std::string name;
    double rate;
    Operator op;
};

/// Textbook form: -i[H, rho] + sum_i (L rho L^dag - {L^dag L, rho}/2).
Matrix lindblad_rhs(const Matrix& rho, const Operator& hamiltonian,
                    const std::vector<Dissipator>& dissipators);

/// Precomputed generator using the effective non-Hermitian Hamiltonian
/// H - (i/2) sum L^dag L; agrees with lindblad_rhs.
class Liouvillian {
public:
    Liouvillian(const Operator& hamiltonian, const std::vector<Dissipator>& dissipators);

    /// Generator applied to a Hermitian rho.
    Matrix apply(const Matrix& rho) const;
    /// Same, writing into out; work is scratch of the same shape.
    void apply(const Matrix& rho, Matrix& out, Matrix& work) const;
    Eigen::Index dim() const { return h_eff_.rows(); }

private:
    Operator h_eff_;
    std::vector<std::pair<Operator, Operator>> jumps_;  // (L, L^dag)
};

Operator sparse_kron(const Operator& a, const Operator& b);

/// (g^2/delta) |e><e| (x) a^dagger a on the joint (|e>,|g>) (x) field space.
Operator dispersive_hamiltonian(const PhysicalParams& p, std::size_t field_dim);

/// Atomic decay/excitation on |e> <-> |g> and cavity loss/gain; zero-rate
/// channels are omitted.
std::vector<Dissipator> joint_dissipators(const PhysicalParams& p, std::size_t field_dim);
std::vector<Dissipator> field_dissipators(const PhysicalParams& p, std::size_t field_dim);

struct EvolveStats {
    double min_eigenvalue = 0.0;
    std::size_t steps = 0;
};

using StepObserver = std::function<void(double elapsed, const Matrix& rho)>;

inline constexpr double positivity_floor = -1e-7;
inline constexpr double trace_drift_limit = 1e-9;

/// Fixed-step RK4 with a shortened final step; rho is re-symmetrized after
/// every step and checked for eigenvalues below -1e-7.
Matrix evolve(const Matrix& rho, const Liouvillian& generator, double duration, double dt,
              EvolveStats* stats = nullptr, const StepObserver& observer = {});
Matrix evolve(const Matrix& rho, const Operator& hamiltonian,
              const std::vector<Dissipator>& dissipators, double duration, double dt);

struct ThermalFit {
    double n_t;
    double fidelity;
};

/// Golden-section maximization of the fidelity to a thermal state over
/// n in [0, 10 <n> + 1].
ThermalFit best_thermal_fit(const FieldState& rho);

struct TrajectoryPoint {
    double time;
    double mean_photon;
};

struct OpenRunOptions {
    /// Record (time, <n>) every this many integrator steps; 0 disables.
    std::size_t trajectory_stride = 0;
};

struct OpenRunResult {
    FieldState final_field;
    std::vector<double> interaction_times;
    std::vector<double> p_stage;
    double p_total;
    double vacuum_fidelity;
    double best_thermal_nbar;
    double fidelity_to_best_thermal;
    double max_trace_drift;
    double min_eigenvalue;
    std::vector<TrajectoryPoint> trajectory;
};

OpenRunResult run_open_protocol(const PhysicalParams& p, const PhaseSequence& seq,
                                const FieldState& rho0, const OpenRunOptions& options = {});

}  // namespace pcool

#endif  // PCOOL_LINDBLAD_HPP
