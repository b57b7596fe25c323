// Common dense types and error classes.
#ifndef PCOOL_TYPES_HPP
#define PCOOL_TYPES_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace pcool {

template <typename Scalar>
using Complex = std::complex<Scalar>;

/// Dense complex matrix over a real scalar type.
template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using SparseOperator = Eigen::SparseMatrix<Complex<Scalar>>;

using cplx = Complex<double>;
using Matrix = DenseMatrix<double>;
using Vector = RealVector<double>;
using Operator = SparseOperator<double>;

/// Bad argument or violated precondition.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure at runtime: impossible postselection, integrator blow-up.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ImpossiblePostselection : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IntegratorFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace pcool

#endif  // PCOOL_TYPES_HPP
