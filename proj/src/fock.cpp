#include "pcool/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

namespace pcool {

Truncation::Truncation(std::size_t dim, double tail_tol) : dim_(dim), tail_tol_(tail_tol) {
    if (dim < 2) {
        throw PreconditionError("truncation dimension must be at least 2");
    }
    if (!(tail_tol > 0.0 && tail_tol < 1.0)) {
        throw PreconditionError("truncation tail tolerance must lie in (0, 1)");
    }
}

double off_diagonal_norm(const Matrix& rho) {
    double total = 0.0;
    for (Eigen::Index j = 0; j < rho.cols(); ++j) {
        for (Eigen::Index i = 0; i < rho.rows(); ++i) {
            if (i != j) total += std::abs(rho(i, j));
        }
    }
    return total;
}

double hermiticity_error(const Matrix& rho) {
    if (rho.size() == 0) return 0.0;
    return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

namespace {

bool exactly_diagonal(const Matrix& rho) {
    for (Eigen::Index j = 0; j < rho.cols(); ++j) {
        for (Eigen::Index i = 0; i < rho.rows(); ++i) {
            if (i != j && rho(i, j) != cplx(0.0, 0.0)) return false;
        }
    }
    return true;
}

}  // namespace

FieldState::FieldState(Matrix rho, double discarded_mass)
    : rho_(std::move(rho)), discarded_mass_(discarded_mass) {
    if (rho_.rows() == 0 || rho_.rows() != rho_.cols()) {
        throw PreconditionError("field density matrix must be square and non-empty");
    }
    const double herm = hermiticity_error(rho_);
    if (herm > tolerance::hermitian) {
        std::ostringstream msg;
        msg << "field density matrix is not Hermitian (max deviation " << herm << ")";
        throw PreconditionError(msg.str());
    }
    rho_ = (0.5 * (rho_ + rho_.adjoint())).eval();

    const cplx tr = rho_.trace();
    if (std::abs(tr.real() - 1.0) > tolerance::trace || std::abs(tr.imag()) > tolerance::trace) {
        std::ostringstream msg;
        msg << "field density matrix trace is " << tr.real() << ", expected 1";
        throw PreconditionError(msg.str());
    }

    if (exactly_diagonal(rho_)) {
        for (Eigen::Index n = 0; n < rho_.rows(); ++n) {
            const double p = rho_(n, n).real();
            if (p < -tolerance::eigenvalue) {
                std::ostringstream msg;
                msg << "negative population " << p << " at Fock level " << n;
                throw NumericalError(msg.str());
            }
            if (p < 0.0) rho_(n, n) = 0.0;
        }
        return;
    }
    const double smallest = hermitian_eigenvalues(rho_).minCoeff();
    if (smallest < -tolerance::eigenvalue) {
        std::ostringstream msg;
        msg << "field density matrix has negative eigenvalue " << smallest;
        throw NumericalError(msg.str());
    }
}

FieldState FieldState::from_distribution(const Vector& populations, bool renormalize,
                                         double discarded_mass) {
    Vector p = populations;
    if (renormalize) {
        const double total = p.sum();
        if (!(total > 0.0)) throw PreconditionError("cannot renormalize a zero distribution");
        p /= total;
    }
    Matrix rho = Matrix::Zero(p.size(), p.size());
    rho.diagonal() = p.cast<cplx>();
    return FieldState(std::move(rho), discarded_mass);
}

double FieldState::off_diagonal_norm() const { return pcool::off_diagonal_norm(rho_); }

double thermal_tail(double n_t, std::size_t dim) {
    if (n_t <= 0.0) return 0.0;
    return std::pow(n_t / (1.0 + n_t), static_cast<double>(dim));
}

Truncation choose_truncation(double n_t, double tail_tol) {
    if (n_t < 0.0) throw PreconditionError("mean photon number must be non-negative");
    if (!(tail_tol > 0.0 && tail_tol < 1.0)) {
        throw PreconditionError("tail tolerance must lie in (0, 1)");
    }
    std::size_t dim = 2;
    if (n_t > 0.0) {
        const double ratio = n_t / (1.0 + n_t);
        const double estimate = std::ceil(std::log(tail_tol) / std::log(ratio));
        dim = std::max<std::size_t>(2, static_cast<std::size_t>(std::max(estimate, 2.0)));
        // log/pow rounding can put the estimate off by one either way
        while (thermal_tail(n_t, dim) >= tail_tol) ++dim;
        while (dim > 2 && thermal_tail(n_t, dim - 1) < tail_tol) --dim;
    }
    return Truncation(dim, tail_tol);
}

FieldState thermal_state(double n_t, const Truncation& trunc) {
    if (n_t < 0.0) throw PreconditionError("mean photon number must be non-negative");
    const double tail = thermal_tail(n_t, trunc.dim());
    if (tail >= trunc.tail_tol()) {
        const std::size_t required = choose_truncation(n_t, trunc.tail_tol()).dim();
        std::ostringstream msg;
        msg << "truncation dim " << trunc.dim() << " leaves tail mass " << tail
            << " for n_t = " << n_t << "; need dim >= " << required;
        throw TruncationError(msg.str(), required);
    }
    return FieldState::from_distribution(thermal_distribution(n_t, trunc.dim()), false, tail);
}

FieldState fock_state(std::size_t n, const Truncation& trunc) {
    if (n >= trunc.dim()) {
        std::ostringstream msg;
        msg << "Fock level " << n << " outside truncation dim " << trunc.dim();
        throw PreconditionError(msg.str());
    }
    Vector p = Vector::Zero(static_cast<Eigen::Index>(trunc.dim()));
    p(static_cast<Eigen::Index>(n)) = 1.0;
    return FieldState::from_distribution(p);
}

FieldState vacuum_state(const Truncation& trunc) { return fock_state(0, trunc); }

Vector photon_distribution(const FieldState& rho) {
    return rho.matrix().diagonal().real().cwiseMax(0.0);
}

double mean_photon(const FieldState& rho) {
    const Vector p = photon_distribution(rho);
    double mean = 0.0;
    for (Eigen::Index n = 0; n < p.size(); ++n) mean += static_cast<double>(n) * p(n);
    return mean;
}

double fidelity(const FieldState& rho, const FieldState& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw PreconditionError("fidelity: dimension mismatch");
    }
    if (!rho.is_diagonal() || !sigma.is_diagonal()) {
        throw PreconditionError("fidelity: inputs must be diagonal in the Fock basis");
    }
    return fidelity(photon_distribution(rho), photon_distribution(sigma));
}

double fidelity(const Vector& p, const Vector& q) {
    if (p.size() != q.size()) throw PreconditionError("fidelity: dimension mismatch");
    const double overlap = p.cwiseMax(0.0).cwiseProduct(q.cwiseMax(0.0)).cwiseSqrt().sum();
    return std::clamp(overlap * overlap, 0.0, 1.0);
}

namespace {

Eigen::Index find_root(std::vector<Eigen::Index>& parent, Eigen::Index i) {
    while (parent[i] != i) {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    return i;
}

}  // namespace

Vector hermitian_eigenvalues(const Matrix& h) {
    const Eigen::Index d = h.rows();
    std::vector<Eigen::Index> parent(static_cast<std::size_t>(d));
    std::iota(parent.begin(), parent.end(), Eigen::Index{0});
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = j + 1; i < d; ++i) {
            if (h(i, j) != cplx(0.0) || h(j, i) != cplx(0.0)) {
                const Eigen::Index a = find_root(parent, i);
                const Eigen::Index b = find_root(parent, j);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
        }
    }
    std::vector<std::vector<Eigen::Index>> blocks(static_cast<std::size_t>(d));
    for (Eigen::Index i = 0; i < d; ++i) blocks[find_root(parent, i)].push_back(i);

    Vector out(d);
    Eigen::Index filled = 0;
    Eigen::SelfAdjointEigenSolver<Matrix> solver;
    for (const auto& block : blocks) {
        const auto m = static_cast<Eigen::Index>(block.size());
        if (m == 0) continue;
        if (m == 1) {
            out(filled++) = h(block[0], block[0]).real();
            continue;
        }
        if (m == d) {
            solver.compute(h, Eigen::EigenvaluesOnly);
        } else {
            solver.compute(h(block, block), Eigen::EigenvaluesOnly);
        }
        out.segment(filled, m) = solver.eigenvalues();
        filled += m;
    }
    return out;
}

double trace_distance(const Matrix& rho, const Matrix& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
        throw PreconditionError("trace_distance: dimension mismatch");
    }
    const Matrix diff = rho - sigma;
    if (exactly_diagonal(diff)) {
        return 0.5 * diff.diagonal().cwiseAbs().sum();
    }
    const Matrix herm = 0.5 * (diff + diff.adjoint());
    return 0.5 * hermitian_eigenvalues(herm).cwiseAbs().sum();
}

Operator annihilation(std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    Operator a(d, d);
    std::vector<Eigen::Triplet<cplx>> entries;
    for (Eigen::Index n = 1; n < d; ++n) {
        entries.emplace_back(n - 1, n, std::sqrt(static_cast<double>(n)));
    }
    a.setFromTriplets(entries.begin(), entries.end());
    return a;
}

Operator creation(std::size_t dim) { return Operator(annihilation(dim).adjoint()); }

Operator number_operator(std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    Operator num(d, d);
    std::vector<Eigen::Triplet<cplx>> entries;
    for (Eigen::Index n = 1; n < d; ++n) entries.emplace_back(n, n, static_cast<double>(n));
    num.setFromTriplets(entries.begin(), entries.end());
    return num;
}

double nbar_from_temperature(double omega, double temperature) {
    if (!(temperature > 0.0)) throw PreconditionError("temperature must be positive");
    if (!(omega > 0.0)) throw PreconditionError("angular frequency must be positive");
    const double x = constants::hbar * omega / (constants::k_B * temperature);
    return 1.0 / std::expm1(x);
}

double temperature_from_nbar(double omega, double n_t) {
    if (!(n_t > 0.0)) throw PreconditionError("mean photon number must be positive");
    if (!(omega > 0.0)) throw PreconditionError("angular frequency must be positive");
    const double x = std::log1p(1.0 / n_t);
    return constants::hbar * omega / (constants::k_B * x);
}

}  // namespace pcool
