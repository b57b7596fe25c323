// Wigner functions of Fock-diagonal field states.
#ifndef PCOOL_WIGNER_HPP
#define PCOOL_WIGNER_HPP

#include <cmath>
#include <complex>
#include <cstddef>

#include "pcool/fock.hpp"

namespace pcool {

/// Rectangular grid over alpha = x + i p, endpoints included.
class PhaseGrid {
public:
    PhaseGrid(double x_min, double x_max, double p_min, double p_max, std::size_t nx, std::size_t np);

    /// [-4, 4] x [-4, 4] at 161 x 161.
    static PhaseGrid standard();

    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    double p_min() const { return p_min_; }
    double p_max() const { return p_max_; }
    std::size_t nx() const { return nx_; }
    std::size_t np() const { return np_; }

    double x(std::size_t i) const { return x_min_ + dx() * static_cast<double>(i); }
    double p(std::size_t j) const { return p_min_ + dp() * static_cast<double>(j); }
    double dx() const { return (x_max_ - x_min_) / static_cast<double>(nx_ - 1); }
    double dp() const { return (p_max_ - p_min_) / static_cast<double>(np_ - 1); }

private:
    double x_min_, x_max_, p_min_, p_max_;
    std::size_t nx_, np_;
};

/// exp(-x/2) L_n(x) for n = 0..max_n by the three-term recurrence
/// (n+1) L_{n+1} = (2n+1-x) L_n - n L_{n-1}. The exponential weight keeps
/// values bounded by 1 in magnitude.
template <typename Scalar>
RealVector<Scalar> weighted_laguerre(std::size_t max_n, Scalar x) {
    RealVector<Scalar> out(static_cast<Eigen::Index>(max_n + 1));
    const Scalar w = std::exp(-x / Scalar(2));
    out(0) = w;
    if (max_n == 0) return out;
    out(1) = (Scalar(1) - x) * w;
    for (std::size_t n = 1; n < max_n; ++n) {
        const auto k = static_cast<Scalar>(n);
        out(static_cast<Eigen::Index>(n + 1)) =
            ((Scalar(2) * k + Scalar(1) - x) * out(static_cast<Eigen::Index>(n)) -
             k * out(static_cast<Eigen::Index>(n - 1))) /
            (k + Scalar(1));
    }
    return out;
}

/// W(alpha) = (2/pi) sum_n p_n (-1)^n L_n(4|alpha|^2) exp(-2|alpha|^2).
template <typename Scalar>
Scalar wigner_point(const RealVector<Scalar>& populations, std::complex<Scalar> alpha) {
    const Scalar r2 = std::norm(alpha);
    const auto max_n = static_cast<std::size_t>(populations.size() - 1);
    const RealVector<Scalar> lag = weighted_laguerre(max_n, Scalar(4) * r2);
    Scalar sum = 0;
    for (Eigen::Index n = 0; n < populations.size(); ++n) {
        sum += (n % 2 == 0 ? populations(n) : -populations(n)) * lag(n);
    }
    return Scalar(2) / Scalar(constants::pi) * sum;
}

/// Wigner function sampled on the grid; element (i, j) is at (x_i, p_j).
/// Throws on non-diagonal input.
Eigen::MatrixXd wigner_diagonal(const FieldState& rho, const PhaseGrid& grid);

/// (2/pi) / (2 n_t + 1) exp(-2|alpha|^2 / (2 n_t + 1)).
double thermal_wigner_analytic(double n_t, std::complex<double> alpha);

/// Trapezoidal integral of a sampled Wigner function over the grid.
double integrate(const Eigen::MatrixXd& w, const PhaseGrid& grid);

}  // namespace pcool

#endif  // PCOOL_WIGNER_HPP
