#include "pcool/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pcool/oracle.hpp"

namespace pcool {

PhysicalParams PhysicalParams::laboratory(double n_t_bath) {
    using constants::two_pi;
    return PhysicalParams{
        .g = two_pi * 49e3,
        .delta = two_pi * 245e3,
        .omega = two_pi * 51.1e9,
        .kappa = 1.0 / 130e-3,
        .gamma = 1.0 / 30e-3,
        .n_t_bath = n_t_bath,
        .gap = 82e-6,
        .dt = 0.1e-6,
    };
}

double PhysicalParams::max_dt() const {
    double limit = std::numeric_limits<double>::infinity();
    if (g != 0.0) limit = std::min(limit, 0.01 * constants::two_pi * std::abs(delta) / (g * g));
    const double fastest = std::max(kappa, gamma) * (1.0 + n_t_bath);
    if (fastest > 0.0) limit = std::min(limit, 0.01 / fastest);
    return limit;
}

void PhysicalParams::validate() const {
    if (delta == 0.0) throw PreconditionError("detuning must be nonzero");
    if (g < 0.0 || kappa < 0.0 || gamma < 0.0 || n_t_bath < 0.0) {
        throw PreconditionError("coupling, rates and bath occupancy must be non-negative");
    }
    if (!(omega > 0.0)) throw PreconditionError("cavity frequency must be positive");
    if (gap < 0.0) throw PreconditionError("inter-atom gap must be non-negative");
    if (!(dt > 0.0)) throw PreconditionError("integrator step must be positive");
    if (dt > max_dt()) {
        std::ostringstream msg;
        msg << "integrator step " << dt << " s exceeds " << max_dt()
            << " s (100 steps per fastest timescale)";
        throw PreconditionError(msg.str());
    }
}

Matrix lindblad_rhs(const Matrix& rho, const Operator& hamiltonian,
                    const std::vector<Dissipator>& dissipators) {
    if (hamiltonian.rows() != rho.rows() || hamiltonian.cols() != rho.cols()) {
        throw PreconditionError("lindblad_rhs: Hamiltonian and state dimensions differ");
    }
    const cplx minus_i(0.0, -1.0);
    Matrix out = minus_i * (Matrix(hamiltonian * rho) - Matrix(rho * hamiltonian));
    for (const auto& d : dissipators) {
        if (d.op.rows() != rho.rows() || d.op.cols() != rho.cols()) {
            throw PreconditionError("lindblad_rhs: dissipator " + d.name + " has wrong dimension");
        }
        const Operator l_dag = d.op.adjoint();
        const Operator l_dag_l = l_dag * d.op;
        out += Matrix(d.op * rho) * l_dag;
        out -= 0.5 * (Matrix(l_dag_l * rho) + Matrix(rho * l_dag_l));
    }
    return out;
}

Liouvillian::Liouvillian(const Operator& hamiltonian, const std::vector<Dissipator>& dissipators) {
    Operator decay(hamiltonian.rows(), hamiltonian.cols());
    for (const auto& d : dissipators) {
        if (d.op.rows() != hamiltonian.rows() || d.op.cols() != hamiltonian.cols()) {
            throw PreconditionError("Liouvillian: dissipator " + d.name + " has wrong dimension");
        }
        Operator l_dag = d.op.adjoint();
        decay += l_dag * d.op;
        jumps_.emplace_back(d.op, std::move(l_dag));
    }
    h_eff_ = hamiltonian - cplx(0.0, 0.5) * decay;
    h_eff_.makeCompressed();
}

void Liouvillian::apply(const Matrix& rho, Matrix& out, Matrix& work) const {
    // rho is Hermitian, so rho H_eff^dag = (H_eff rho)^dag and
    // L rho L^dag = (L (L rho)^dag)^dag; only sparse * dense products remain.
    const cplx minus_i(0.0, -1.0);
    work.noalias() = h_eff_ * rho;
    out = minus_i * work;
    out += (minus_i * work).adjoint();
    for (const auto& jump : jumps_) {
        const Operator& l = jump.first;
        work.noalias() = (l * rho).adjoint();
        out.noalias() += (l * work).adjoint();
    }
}

Matrix Liouvillian::apply(const Matrix& rho) const {
    Matrix out(rho.rows(), rho.cols());
    Matrix work(rho.rows(), rho.cols());
    apply(rho, out, work);
    return out;
}

Operator sparse_kron(const Operator& a, const Operator& b) {
    Operator out(a.rows() * b.rows(), a.cols() * b.cols());
    std::vector<Eigen::Triplet<cplx>> entries;
    entries.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
    for (Eigen::Index ka = 0; ka < a.outerSize(); ++ka) {
        for (Operator::InnerIterator ia(a, ka); ia; ++ia) {
            for (Eigen::Index kb = 0; kb < b.outerSize(); ++kb) {
                for (Operator::InnerIterator ib(b, kb); ib; ++ib) {
                    entries.emplace_back(ia.row() * b.rows() + ib.row(),
                                         ia.col() * b.cols() + ib.col(), ia.value() * ib.value());
                }
            }
        }
    }
    out.setFromTriplets(entries.begin(), entries.end());
    return out;
}

namespace {

Operator atom_operator(Eigen::Index row, Eigen::Index col) {
    Operator op(2, 2);
    op.insert(row, col) = 1.0;
    return op;
}

Operator identity(std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    Operator id(d, d);
    id.setIdentity();
    return id;
}

// basis (|e>, |g>): index 0 = e, 1 = g
const Eigen::Index kE = 0;
const Eigen::Index kG = 1;

void add_channel(std::vector<Dissipator>& out, std::string name, double rate, const Operator& op) {
    if (rate > 0.0) out.push_back({std::move(name), rate, Operator(std::sqrt(rate) * op)});
}

Operator ramsey_pulse(std::size_t field_dim) {
    const Eigen::Matrix2cd r = ramsey_matrix();
    Operator atom(2, 2);
    for (Eigen::Index i = 0; i < 2; ++i) {
        for (Eigen::Index j = 0; j < 2; ++j) atom.insert(i, j) = r(i, j);
    }
    return sparse_kron(atom, identity(field_dim));
}

double mean_photon_of(const Matrix& rho, std::size_t field_dim) {
    const auto d = static_cast<Eigen::Index>(field_dim);
    const auto blocks = rho.rows() / d;
    double mean = 0.0;
    for (Eigen::Index b = 0; b < blocks; ++b) {
        for (Eigen::Index n = 0; n < d; ++n) {
            mean += static_cast<double>(n) * rho(b * d + n, b * d + n).real();
        }
    }
    return mean;
}

}  // namespace

Operator dispersive_hamiltonian(const PhysicalParams& p, std::size_t field_dim) {
    return sparse_kron(atom_operator(kE, kE), number_operator(field_dim)) * cplx(p.dispersive_shift());
}

std::vector<Dissipator> joint_dissipators(const PhysicalParams& p, std::size_t field_dim) {
    const Operator id_field = identity(field_dim);
    const Operator id_atom = identity(2);
    std::vector<Dissipator> out;
    add_channel(out, "atom_decay", p.gamma * (1.0 + p.n_t_bath),
                sparse_kron(atom_operator(kG, kE), id_field));
    add_channel(out, "atom_excitation", p.gamma * p.n_t_bath,
                sparse_kron(atom_operator(kE, kG), id_field));
    add_channel(out, "cavity_loss", p.kappa * (1.0 + p.n_t_bath),
                sparse_kron(id_atom, annihilation(field_dim)));
    add_channel(out, "cavity_gain", p.kappa * p.n_t_bath, sparse_kron(id_atom, creation(field_dim)));
    return out;
}

std::vector<Dissipator> field_dissipators(const PhysicalParams& p, std::size_t field_dim) {
    std::vector<Dissipator> out;
    add_channel(out, "cavity_loss", p.kappa * (1.0 + p.n_t_bath), annihilation(field_dim));
    add_channel(out, "cavity_gain", p.kappa * p.n_t_bath, creation(field_dim));
    return out;
}

Matrix evolve(const Matrix& rho, const Liouvillian& generator, double duration, double dt,
              EvolveStats* stats, const StepObserver& observer) {
    if (duration < 0.0) throw PreconditionError("evolution duration must be non-negative");
    if (!(dt > 0.0)) throw PreconditionError("integrator step must be positive");
    if (rho.rows() != generator.dim()) throw PreconditionError("evolve: dimension mismatch");

    Matrix state = rho;
    double elapsed = 0.0;
    double min_eig = std::numeric_limits<double>::infinity();
    std::size_t steps = 0;
    const double land_tol = 1e-12 * dt;
    const Eigen::Index d = rho.rows();
    Matrix k(d, d), stage(d, d), acc(d, d), work(d, d);
    while (duration - elapsed > land_tol) {
        const double h = std::min(dt, duration - elapsed);
        generator.apply(state, k, work);
        acc = k;
        stage = state + (0.5 * h) * k;
        generator.apply(stage, k, work);
        acc += 2.0 * k;
        stage = state + (0.5 * h) * k;
        generator.apply(stage, k, work);
        acc += 2.0 * k;
        stage = state + h * k;
        generator.apply(stage, k, work);
        acc += k;
        state += (h / 6.0) * acc;
        work = state.adjoint();
        state = 0.5 * (state + work);
        elapsed = (h == dt) ? static_cast<double>(steps + 1) * dt : duration;
        ++steps;

        const double smallest = hermitian_eigenvalues(state).minCoeff();
        min_eig = std::min(min_eig, smallest);
        if (smallest < positivity_floor) {
            std::ostringstream msg;
            msg << "integrator failure: eigenvalue " << smallest << " at t = " << elapsed
                << " s; retry with dt <= " << 0.5 * dt << " s";
            throw IntegratorFailure(msg.str());
        }
        if (observer) observer(elapsed, state);
    }
    if (stats) {
        stats->min_eigenvalue = std::min(stats->min_eigenvalue, steps ? min_eig : 0.0);
        stats->steps += steps;
    }
    return state;
}

Matrix evolve(const Matrix& rho, const Operator& hamiltonian,
              const std::vector<Dissipator>& dissipators, double duration, double dt) {
    return evolve(rho, Liouvillian(hamiltonian, dissipators), duration, dt);
}

ThermalFit best_thermal_fit(const FieldState& rho) {
    if (!rho.is_diagonal()) throw PreconditionError("thermal fit requires a Fock-diagonal state");
    const Vector p = photon_distribution(rho);
    const std::size_t dim = rho.dim();
    auto score = [&](double n) { return fidelity(p, thermal_distribution(n, dim)); };

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0;
    double hi = 10.0 * mean_photon(rho) + 1.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = score(x1);
    double f2 = score(x2);
    while (hi - lo > 1e-6) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = score(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = score(x1);
        }
    }
    const double n_best = 0.5 * (lo + hi);
    return {n_best, score(n_best)};
}

OpenRunResult run_open_protocol(const PhysicalParams& p, const PhaseSequence& seq,
                                const FieldState& rho0, const OpenRunOptions& options) {
    p.validate();
    const std::size_t dim = rho0.dim();
    const auto d = static_cast<Eigen::Index>(dim);

    const Liouvillian joint_generator(dispersive_hamiltonian(p, dim), joint_dissipators(p, dim));
    const Liouvillian field_generator(Operator(d, d), field_dissipators(p, dim));
    const Operator pulse = ramsey_pulse(dim);
    const Operator pulse_adj = pulse.adjoint();

    OpenRunResult result{rho0, {}, {}, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, {}};
    EvolveStats stats;
    double clock = 0.0;
    double segment_start = 0.0;
    std::size_t step_counter = 0;
    const std::size_t stride = options.trajectory_stride;
    StepObserver observer;
    if (stride > 0) {
        result.trajectory.push_back({0.0, mean_photon(rho0)});
        observer = [&](double elapsed, const Matrix& rho) {
            if (++step_counter % stride == 0) {
                result.trajectory.push_back({segment_start + elapsed, mean_photon_of(rho, dim)});
            }
        };
    }

    auto check_trace = [&](const Matrix& rho, std::size_t stage, const char* segment) {
        const double drift = std::abs(rho.trace().real() - 1.0);
        result.max_trace_drift = std::max(result.max_trace_drift, drift);
        if (drift > trace_drift_limit) {
            std::ostringstream msg;
            msg << "trace drift " << drift << " during " << segment << " of atom " << stage
                << "; retry with dt <= " << 0.5 * p.dt << " s";
            throw IntegratorFailure(msg.str());
        }
    };

    Matrix field = rho0.matrix();
    for (std::size_t k = 0; k < seq.size(); ++k) {
        const std::size_t stage = k + 1;
        const double tau = interaction_time_for_phase(p.g, p.delta, seq[k]);
        if (tau < 0.0) throw PreconditionError("negative phase gives a negative interaction time");
        result.interaction_times.push_back(tau);

        Matrix joint = Matrix::Zero(2 * d, 2 * d);
        joint.topLeftCorner(d, d) = field;
        joint = Matrix(pulse * joint) * pulse_adj;
        try {
            segment_start = clock;
            joint = evolve(joint, joint_generator, tau, p.dt, &stats, observer);
            clock += tau;
            check_trace(joint, stage, "interaction");
            joint = Matrix(pulse * joint) * pulse_adj;

            const Matrix block = joint.bottomRightCorner(d, d);
            const double prob = block.trace().real();
            if (!(prob >= impossible_probability)) {
                std::ostringstream msg;
                msg << "postselection impossible at atom " << stage << " (probability " << prob << ")";
                throw ImpossiblePostselection(msg.str());
            }
            result.p_stage.push_back(prob);
            result.p_total *= prob;
            field = block / prob;
            field = (0.5 * (field + field.adjoint())).eval();
            if (off_diagonal_norm(field) >= tolerance::diagonal) {
                std::ostringstream msg;
                msg << "field lost Fock diagonality after atom " << stage;
                throw NumericalError(msg.str());
            }

            segment_start = clock;
            field = evolve(field, field_generator, p.gap, p.dt, &stats, observer);
            clock += p.gap;
            check_trace(field, stage, "inter-atom gap");
            field /= field.trace().real();
        } catch (const IntegratorFailure& e) {
            throw IntegratorFailure("atom " + std::to_string(stage) + ": " + e.what());
        }
    }
    if (stride > 0 && (result.trajectory.empty() || result.trajectory.back().time < clock)) {
        result.trajectory.push_back({clock, mean_photon_of(field, dim)});
    }

    result.final_field = FieldState(std::move(field));
    result.min_eigenvalue = stats.min_eigenvalue;
    result.vacuum_fidelity = vacuum_fidelity(result.final_field);
    const ThermalFit fit = best_thermal_fit(result.final_field);
    result.best_thermal_nbar = fit.n_t;
    result.fidelity_to_best_thermal = fit.fidelity;
    return result;
}

}  // namespace pcool
