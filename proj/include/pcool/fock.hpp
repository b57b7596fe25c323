// Truncated Fock space: field density matrices, ladder operators, photon
// statistics, fidelity and Bose-Einstein temperature conversions.
#ifndef PCOOL_FOCK_HPP
#define PCOOL_FOCK_HPP

#include <cmath>
#include <cstddef>
#include <string>

#include "pcool/types.hpp"

namespace pcool {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double k_B = 1.380649e-23;      // J / K
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;
}  // namespace constants

namespace tolerance {
inline constexpr double hermitian = 1e-12;
inline constexpr double trace = 1e-10;
inline constexpr double eigenvalue = 1e-10;
inline constexpr double diagonal = 1e-8;
}  // namespace tolerance

/// Fock-space cutoff: levels 0..dim-1, with the probability mass allowed above.
class Truncation {
public:
    Truncation(std::size_t dim, double tail_tol);

    std::size_t dim() const { return dim_; }
    double tail_tol() const { return tail_tol_; }

private:
    std::size_t dim_;
    double tail_tol_;
};

/// Raised when a requested state does not fit in the truncation.
class TruncationError : public PreconditionError {
public:
    TruncationError(const std::string& what, std::size_t required_dim)
        : PreconditionError(what), required_dim_(required_dim) {}
    std::size_t required_dim() const { return required_dim_; }

private:
    std::size_t required_dim_;
};

/// Normalized density operator of the cavity mode in a truncated Fock basis.
///
/// Construction checks Hermiticity (1e-12), unit trace (1e-10) and
/// positivity (-1e-10). Diagonal states take a fast path that checks the
/// populations directly; small negative populations above the tolerance are
/// clipped to zero.
class FieldState {
public:
    explicit FieldState(Matrix rho, double discarded_mass = 0.0);

    /// Diagonal state from populations; renormalizes if `renormalize` is set.
    static FieldState from_distribution(const Vector& populations, bool renormalize = false,
                                        double discarded_mass = 0.0);

    std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
    const Matrix& matrix() const { return rho_; }
    /// Probability mass dropped by the truncation before renormalization.
    double discarded_mass() const { return discarded_mass_; }

    double off_diagonal_norm() const;
    bool is_diagonal(double tol = tolerance::diagonal) const { return off_diagonal_norm() < tol; }

private:
    Matrix rho_;
    double discarded_mass_;
};

/// Sum of |rho_{nm}| over n != m.
double off_diagonal_norm(const Matrix& rho);

/// Max |rho - rho^dagger| entry.
double hermiticity_error(const Matrix& rho);

/// Geometric tail mass sum_{n >= dim} of the thermal distribution.
double thermal_tail(double n_t, std::size_t dim);

/// Truncated thermal populations renormalized to unit sum, no tail check.
template <typename Scalar>
RealVector<Scalar> thermal_distribution(Scalar n_t, std::size_t dim) {
    RealVector<Scalar> p(static_cast<Eigen::Index>(dim));
    const Scalar ratio = n_t / (Scalar(1) + n_t);
    Scalar term = Scalar(1) / (Scalar(1) + n_t);
    for (Eigen::Index n = 0; n < p.size(); ++n) {
        p(n) = term;
        term *= ratio;
    }
    return p / p.sum();
}

Truncation choose_truncation(double n_t, double tail_tol);

FieldState thermal_state(double n_t, const Truncation& trunc);
FieldState fock_state(std::size_t n, const Truncation& trunc);
FieldState vacuum_state(const Truncation& trunc);

Vector photon_distribution(const FieldState& rho);
double mean_photon(const FieldState& rho);

/// Fidelity between two Fock-diagonal states, (sum_n sqrt(p_n q_n))^2.
double fidelity(const FieldState& rho, const FieldState& sigma);

/// Same quantity on population vectors of equal length.
double fidelity(const Vector& p, const Vector& q);

/// Vacuum overlap <0|rho|0>.
inline double vacuum_fidelity(const FieldState& rho) { return rho.matrix()(0, 0).real(); }

/// Eigenvalues of a Hermitian matrix, unordered. Rows and columns are grouped
/// by the connected components of the exact nonzero pattern and each block is
/// diagonalized on its own, so block-structured states stay cheap.
Vector hermitian_eigenvalues(const Matrix& h);

/// Trace distance 0.5 * ||rho - sigma||_1 (Hermitian difference).
double trace_distance(const Matrix& rho, const Matrix& sigma);

Operator annihilation(std::size_t dim);
Operator creation(std::size_t dim);
Operator number_operator(std::size_t dim);

/// Bose-Einstein occupancy 1/(exp(hbar omega / k_B T) - 1).
double nbar_from_temperature(double omega, double temperature);
double temperature_from_nbar(double omega, double n_t);

}  // namespace pcool

#endif  // PCOOL_FOCK_HPP
