#include "pcool/oracle.hpp"

#include <cmath>
#include <sstream>

namespace pcool {

JointState::JointState(Matrix rho, std::size_t field_dim) : rho_(std::move(rho)), field_dim_(field_dim) {
    const auto d = static_cast<Eigen::Index>(2 * field_dim);
    if (field_dim == 0 || rho_.rows() != d || rho_.cols() != d) {
        throw PreconditionError("joint density matrix must be (2 field_dim) square");
    }
    if (hermiticity_error(rho_) > tolerance::hermitian) {
        throw PreconditionError("joint density matrix is not Hermitian");
    }
    rho_ = (0.5 * (rho_ + rho_.adjoint())).eval();
    if (std::abs(rho_.trace().real() - 1.0) > tolerance::trace) {
        throw PreconditionError("joint density matrix trace differs from 1");
    }
    if (hermitian_eigenvalues(rho_).minCoeff() < -tolerance::eigenvalue) {
        throw NumericalError("joint density matrix has a negative eigenvalue");
    }
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Eigen::Matrix2cd ramsey_matrix() {
    const cplx i(0.0, 1.0);
    Eigen::Matrix2cd r;
    r << 1.0, i, i, 1.0;
    return r / std::sqrt(2.0);
}

Matrix dispersive_unitary(double phi, std::size_t field_dim) {
    const auto d = static_cast<Eigen::Index>(field_dim);
    Matrix u = Matrix::Identity(2 * d, 2 * d);
    for (Eigen::Index n = 0; n < d; ++n) {
        u(n, n) = std::polar(1.0, -phi * static_cast<double>(n));
    }
    return u;
}

Matrix one_atom_unitary(double phi, std::size_t field_dim) {
    const Matrix pulse =
        kron(ramsey_matrix(), Matrix::Identity(static_cast<Eigen::Index>(field_dim),
                                               static_cast<Eigen::Index>(field_dim)));
    return pulse * dispersive_unitary(phi, field_dim) * pulse;
}

JointState attach_atom(const FieldState& field, Outcome level) {
    Matrix atom = Matrix::Zero(2, 2);
    const Eigen::Index a = level == Outcome::Excited ? 0 : 1;
    atom(a, a) = 1.0;
    return JointState(kron(atom, field.matrix()), field.dim());
}

JointState evolve_one_atom(const JointState& joint, double phi) {
    const Matrix u = one_atom_unitary(phi, joint.field_dim());
    Matrix out = u * joint.matrix() * u.adjoint();
    return JointState(std::move(out), joint.field_dim());
}

Branch measure_atom(const JointState& joint, Outcome outcome) {
    const auto d = static_cast<Eigen::Index>(joint.field_dim());
    const Eigen::Index offset = outcome == Outcome::Excited ? 0 : d;
    Matrix block = joint.matrix().block(offset, offset, d, d);
    const double p = block.trace().real();
    return {std::move(block), p};
}

Matrix partial_trace_atom(const Matrix& joint, std::size_t field_dim) {
    const auto d = static_cast<Eigen::Index>(field_dim);
    return joint.block(0, 0, d, d) + joint.block(d, d, d, d);
}

Postselected simulate_sequence(const FieldState& rho0, const PhaseSequence& seq,
                               std::span<const Outcome> outcomes) {
    if (outcomes.size() != seq.size()) {
        throw PreconditionError("outcome list length must match the phase sequence");
    }
    FieldState field = rho0;
    double p_total = 1.0;
    for (std::size_t k = 0; k < seq.size(); ++k) {
        const JointState joint = evolve_one_atom(attach_atom(field), seq[k]);
        Branch branch = measure_atom(joint, outcomes[k]);
        if (!(branch.probability >= impossible_probability)) {
            std::ostringstream msg;
            msg << "postselection impossible at stage " << k + 1 << " (outcome "
                << to_char(outcomes[k]) << ", probability " << branch.probability << ")";
            throw ImpossiblePostselection(msg.str());
        }
        p_total *= branch.probability;
        Matrix next = branch.matrix / branch.probability;
        field = FieldState((0.5 * (next + next.adjoint())).eval());
    }
    return {std::move(field), p_total};
}

}  // namespace pcool
