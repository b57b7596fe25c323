// Brute-force reference: explicit atom (x) field density matrices evolved
// through the Ramsey pulses and the dispersive unitary, then projected.
//
// Joint basis ordering is atom (x) field with the atom basis (|e>, |g>), so
// joint index = atom * field_dim + n, with atom 0 = |e> and atom 1 = |g>.
#ifndef PCOOL_ORACLE_HPP
#define PCOOL_ORACLE_HPP

#include <span>

#include "pcool/fock.hpp"
#include "pcool/protocol.hpp"

namespace pcool {

class JointState {
public:
    JointState(Matrix rho, std::size_t field_dim);

    std::size_t field_dim() const { return field_dim_; }
    const Matrix& matrix() const { return rho_; }

private:
    Matrix rho_;
    std::size_t field_dim_;
};

/// Kronecker product of dense matrices.
Matrix kron(const Matrix& a, const Matrix& b);

/// (1/sqrt 2) [[1, i], [i, 1]] in the (|e>, |g>) basis.
Eigen::Matrix2cd ramsey_matrix();

/// exp(-i phi a^dagger a |e><e|) on the joint space.
Matrix dispersive_unitary(double phi, std::size_t field_dim);

/// (R (x) I) U_eff(phi) (R (x) I).
Matrix one_atom_unitary(double phi, std::size_t field_dim);

/// Fresh atom in `level` attached to the field: |level><level| (x) rho.
JointState attach_atom(const FieldState& field, Outcome level = Outcome::Excited);

JointState evolve_one_atom(const JointState& joint, double phi);

/// Field block of the requested atomic level and its trace.
Branch measure_atom(const JointState& joint, Outcome outcome);

Matrix partial_trace_atom(const Matrix& joint, std::size_t field_dim);

/// Fresh |e> atom per stage, evolve, project on the prescribed outcome.
Postselected simulate_sequence(const FieldState& rho0, const PhaseSequence& seq,
                               std::span<const Outcome> outcomes);

}  // namespace pcool

#endif  // PCOOL_ORACLE_HPP
