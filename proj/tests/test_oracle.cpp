#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "pcool/oracle.hpp"

using namespace pcool;

namespace {

Matrix random_density(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    const auto d = static_cast<Eigen::Index>(dim);
    Matrix g(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) g(i, j) = cplx(gauss(rng), gauss(rng));
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return (0.5 * (rho + rho.adjoint())).eval();
}

Vector sorted_eigenvalues(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> s(m, Eigen::EigenvaluesOnly);
    return s.eigenvalues();
}

}  // namespace

TEST(Ramsey, Algebra) {
    const Eigen::Matrix2cd r = ramsey_matrix();
    EXPECT_LT((r * r.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 1e-15);
    Eigen::Matrix2cd swap_i;
    swap_i << 0.0, cplx(0, 1), cplx(0, 1), 0.0;
    EXPECT_LT((r * r - swap_i).cwiseAbs().maxCoeff(), 1e-15);
    // <g|R|e>
    EXPECT_NEAR(std::norm(r(1, 0)), 0.5, 1e-15);
}

TEST(DispersiveUnitary, Action) {
    const std::size_t d = 5;
    EXPECT_LT((dispersive_unitary(0.0, d) - Matrix::Identity(10, 10)).cwiseAbs().maxCoeff(), 1e-15);
    const Matrix u = dispersive_unitary(constants::pi, d);
    EXPECT_NEAR(std::abs(u(1, 1) - cplx(-1.0, 0.0)), 0.0, 1e-15);
    EXPECT_EQ((u.block(5, 5, 5, 5) - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_LT((u * u.adjoint() - Matrix::Identity(10, 10)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(EvolveOneAtom, FockInputs) {
    const Truncation t(6, 1e-8);
    for (double phi : {0.0, 0.4, 2.7}) {
        const JointState out = evolve_one_atom(attach_atom(vacuum_state(t)), phi);
        EXPECT_NEAR(measure_atom(out, Outcome::Ground).probability, 1.0, 1e-12);
        EXPECT_NEAR(measure_atom(out, Outcome::Excited).probability, 0.0, 1e-12);
    }
    const JointState one = evolve_one_atom(attach_atom(fock_state(1, t)), constants::pi);
    EXPECT_NEAR(measure_atom(one, Outcome::Excited).probability, 1.0, 1e-12);

    for (std::size_t n = 0; n < 6; ++n) {
        for (double phi : {0.3, 1.1, 4.4}) {
            const JointState out = evolve_one_atom(attach_atom(fock_state(n, t)), phi);
            const double c = std::cos(0.5 * phi * static_cast<double>(n));
            EXPECT_NEAR(measure_atom(out, Outcome::Ground).probability, c * c, 1e-12);
        }
    }
}

TEST(EvolveOneAtom, Unitarity) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t d = 2 + rng() % 8;
        const FieldState field(random_density(d, rng));
        const JointState in = attach_atom(field);
        const JointState out = evolve_one_atom(in, 0.1 + 0.5 * trial);
        EXPECT_NEAR(out.matrix().trace().real(), 1.0, 1e-12);
        EXPECT_LT((sorted_eigenvalues(in.matrix()) - sorted_eigenvalues(out.matrix())).cwiseAbs().maxCoeff(),
                  1e-12);
    }
}

TEST(MeasureAtom, Completeness) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t d = 2 + rng() % 10;
        const JointState out = evolve_one_atom(attach_atom(FieldState(random_density(d, rng))), 1.7 * trial);
        const Branch e = measure_atom(out, Outcome::Excited);
        const Branch g = measure_atom(out, Outcome::Ground);
        EXPECT_NEAR(e.probability + g.probability, 1.0, 1e-12);
        EXPECT_LT(trace_distance(e.matrix + g.matrix, partial_trace_atom(out.matrix(), d)), 1e-12);
    }
}

TEST(SimulateSequence, LaboratoryRun) {
    const FieldState rho = thermal_state(3.6, choose_truncation(3.6, 1e-8));
    const std::vector<Outcome> all_g(5, Outcome::Ground);
    const Postselected out = simulate_sequence(rho, dyadic_sequence(5), all_g);
    EXPECT_NEAR(out.p_post, 0.217, 0.002);
    EXPECT_GE(vacuum_fidelity(out.state), 0.999);
}

TEST(SimulateSequence, ZeroPhaseIsDeterministic) {
    std::mt19937_64 rng(2);
    const FieldState rho(random_density(7, rng));
    const Postselected out = simulate_sequence(rho, PhaseSequence{0.0}, parse_outcomes("g"));
    EXPECT_NEAR(out.p_post, 1.0, 1e-12);
    EXPECT_LT(trace_distance(out.state.matrix(), rho.matrix()), 1e-12);
}

TEST(SimulateSequence, ImpossibleNamesStage) {
    const Truncation t(4, 1e-8);
    try {
        simulate_sequence(vacuum_state(t), PhaseSequence{0.5, 0.5}, parse_outcomes("ge"));
        FAIL() << "expected ImpossiblePostselection";
    } catch (const ImpossiblePostselection& e) {
        EXPECT_NE(std::string(e.what()).find("stage 2"), std::string::npos);
    }
}

TEST(SimulateSequence, AgreesWithClosedFormOnRandomInstances) {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> unit;
    int compared = 0;
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t d = 2 + rng() % 15;
        const std::size_t n_atoms = 1 + rng() % 4;
        std::vector<double> phases(n_atoms);
        for (auto& phi : phases) phi = constants::two_pi * unit(rng);
        const PhaseSequence seq(phases);
        const bool diagonal = trial % 2 == 0;
        Vector pop(static_cast<Eigen::Index>(d));
        for (auto& x : pop) x = unit(rng);
        const FieldState rho = diagonal ? FieldState::from_distribution(pop, true)
                                        : FieldState(random_density(d, rng));
        for (unsigned mask = 0; mask < (1u << n_atoms); ++mask) {
            std::vector<Outcome> outcomes(n_atoms);
            for (std::size_t k = 0; k < n_atoms; ++k)
                outcomes[k] = (mask >> k) & 1u ? Outcome::Excited : Outcome::Ground;
            Postselected closed{rho, 0.0};
            try {
                closed = postselect_pattern(rho, seq, outcomes);
            } catch (const ImpossiblePostselection&) {
                EXPECT_THROW(simulate_sequence(rho, seq, outcomes), ImpossiblePostselection);
                continue;
            }
            const Postselected brute = simulate_sequence(rho, seq, outcomes);
            EXPECT_NEAR(brute.p_post, closed.p_post, 1e-10);
            if (closed.p_post > 1e-4) {
                EXPECT_LT(trace_distance(brute.state.matrix(), closed.state.matrix()), 1e-10);
            }
            ++compared;
        }
    }
    EXPECT_GT(compared, 500);
}

TEST(SimulateSequence, CoherencePhaseIsHalfPhiPerAtom) {
    // |psi> = (|0> + |n>)/sqrt 2; each g-detected atom multiplies rho_{0n} by
    // e^{+i phi n / 2} cos(phi n / 2) relative to rho_00 (atoms never carry N).
    const std::size_t d = 6;
    for (std::size_t n = 1; n < d; ++n) {
        Matrix rho = Matrix::Zero(d, d);
        rho(0, 0) = rho(n, n) = rho(0, n) = rho(n, 0) = 0.5;
        const PhaseSequence seq{0.3, 0.8, 0.2};
        const Postselected out = simulate_sequence(FieldState(rho), seq, parse_outcomes("ggg"));
        cplx expected = 1.0;
        double diag = 1.0;
        for (double phi : seq) {
            const double half = 0.5 * phi * static_cast<double>(n);
            expected *= std::cos(half) * std::polar(1.0, half);
            diag *= std::cos(half) * std::cos(half);
        }
        const cplx ratio = out.state.matrix()(0, n) / out.state.matrix()(0, 0);
        EXPECT_LT(std::abs(ratio - expected), 1e-12) << n;
        EXPECT_NEAR(out.state.matrix()(n, n).real() / out.state.matrix()(0, 0).real(), diag, 1e-12);
    }
}

TEST(JointState, Validation) {
    EXPECT_THROW(JointState(Matrix::Identity(3, 3) / 3.0, 2), PreconditionError);
    EXPECT_THROW(JointState(Matrix::Identity(4, 4), 2), PreconditionError);
    Matrix neg = Matrix::Zero(4, 4);
    neg(0, 0) = 1.2;
    neg(1, 1) = -0.2;
    EXPECT_THROW(JointState(neg, 2), NumericalError);
}
