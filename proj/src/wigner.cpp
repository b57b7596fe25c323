#include "pcool/wigner.hpp"

#include <sstream>

namespace pcool {

PhaseGrid::PhaseGrid(double x_min, double x_max, double p_min, double p_max, std::size_t nx,
                     std::size_t np)
    : x_min_(x_min), x_max_(x_max), p_min_(p_min), p_max_(p_max), nx_(nx), np_(np) {
    if (!(x_max > x_min) || !(p_max > p_min)) {
        throw PreconditionError("phase grid bounds must satisfy max > min");
    }
    if (nx < 2 || np < 2) throw PreconditionError("phase grid needs at least 2 points per axis");
}

PhaseGrid PhaseGrid::standard() { return PhaseGrid(-4.0, 4.0, -4.0, 4.0, 161, 161); }

Eigen::MatrixXd wigner_diagonal(const FieldState& rho, const PhaseGrid& grid) {
    if (!rho.is_diagonal()) {
        throw PreconditionError("Wigner series needs a Fock-diagonal state");
    }
    const Vector pop = photon_distribution(rho);
    Eigen::MatrixXd w(static_cast<Eigen::Index>(grid.nx()), static_cast<Eigen::Index>(grid.np()));
    const double bound = 2.0 / constants::pi;
    for (std::size_t i = 0; i < grid.nx(); ++i) {
        for (std::size_t j = 0; j < grid.np(); ++j) {
            const double value = wigner_point(pop, std::complex<double>(grid.x(i), grid.p(j)));
            if (!std::isfinite(value) || std::abs(value) > bound * (1.0 + 1e-12)) {
                std::ostringstream msg;
                msg << "Wigner value " << value << " at (" << grid.x(i) << ", " << grid.p(j)
                    << ") is outside [-2/pi, 2/pi]";
                throw NumericalError(msg.str());
            }
            w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
        }
    }
    return w;
}

double thermal_wigner_analytic(double n_t, std::complex<double> alpha) {
    if (n_t < 0.0) throw PreconditionError("mean photon number must be non-negative");
    const double width = 2.0 * n_t + 1.0;
    return 2.0 / constants::pi / width * std::exp(-2.0 * std::norm(alpha) / width);
}

double integrate(const Eigen::MatrixXd& w, const PhaseGrid& grid) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        const double wi = (i == 0 || i == w.rows() - 1) ? 0.5 : 1.0;
        for (Eigen::Index j = 0; j < w.cols(); ++j) {
            const double wj = (j == 0 || j == w.cols() - 1) ? 0.5 : 1.0;
            total += wi * wj * w(i, j);
        }
    }
    return total * grid.dx() * grid.dp();
}

}  // namespace pcool
