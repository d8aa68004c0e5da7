#include "qsm/linalg.hpp"
#include "qsm/random.hpp"
#include "qsm/schedule.hpp"

#include <doctest.h>

#include <cmath>

using namespace qsm;

namespace {

Matrix diag(std::initializer_list<double> entries) {
    RealVector v(static_cast<Eigen::Index>(entries.size()));
    Eigen::Index i = 0;
    for (double e : entries) v[i++] = e;
    return v.cast<Complex>().asDiagonal();
}

// exp of an anti-Hermitian matrix L = i K, evaluated through the Hermitian part.
Matrix exp_anti_hermitian(const Matrix& l) {
    const Matrix k = Complex(0.0, -1.0) * l; // Hermitian
    return hermitian_propagator(0.5 * (k + k.adjoint()), -1.0, 1.0);
}

} // namespace

TEST_CASE("hermitian_eig: diagonal input sorts ascending") {
    const Spectrum s = hermitian_eig(diag({3.0, 1.0, 4.0}));
    CHECK(s.values[0] == doctest::Approx(1.0));
    CHECK(s.values[1] == doctest::Approx(3.0));
    CHECK(s.values[2] == doctest::Approx(4.0));
    CHECK(max_abs(s.reconstruct() - diag({3.0, 1.0, 4.0})) < 1e-12);
    // Permutation basis: every column has a single unit entry.
    for (int c = 0; c < 3; ++c) {
        CHECK(s.basis.col(c).cwiseAbs().maxCoeff() == doctest::Approx(1.0));
    }
}

TEST_CASE("hermitian_eig: identity spectrum and orthonormal basis") {
    const Spectrum s = hermitian_eig(Matrix::Identity(5, 5));
    for (int i = 0; i < 5; ++i) CHECK(s.values[i] == doctest::Approx(1.0));
    CHECK(unitarity_defect(s.basis) < 1e-10);
}

TEST_CASE("hermitian_eig: spectral round trip on 500 random inputs, d in 2..8") {
    for (int trial = 0; trial < 500; ++trial) {
        Rng rng(mix_seed(2024, trial));
        const int d = 2 + trial % 7;
        const Matrix a = random_hermitian(rng, d);
        const Spectrum s = hermitian_eig(a);
        CHECK(max_abs(s.reconstruct() - a) < 1e-9);
        CHECK(unitarity_defect(s.basis) < 1e-10);
        for (int i = 1; i < d; ++i) CHECK(s.values[i] >= s.values[i - 1]);
    }
}

TEST_CASE("hermitian_eig: deterministic for repeated calls on identical input") {
    Rng rng(7);
    const Matrix a = random_hermitian(rng, 6);
    const Spectrum s1 = hermitian_eig(a);
    const Spectrum s2 = hermitian_eig(a);
    CHECK(max_abs(s1.basis - s2.basis) == 0.0);
    CHECK((s1.values - s2.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("hermitian_eig: rejects non-Hermitian input with the deviation") {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 1) = Complex(1.0, 0.0);
    CHECK_THROWS_WITH_AS(hermitian_eig(a), doctest::Contains("not self-adjoint"), validation_error);
}

TEST_CASE("tensor: identities and the Kronecker sum") {
    CHECK(max_abs(tensor(Matrix::Identity(2, 2), Matrix::Identity(2, 2)) - Matrix::Identity(4, 4)) == 0.0);
    const Matrix h1 = diag({0.0, 1.0});
    const Matrix h2 = diag({0.0, 2.0});
    const Matrix joint = tensor(h1, Matrix::Identity(2, 2)) + tensor(Matrix::Identity(2, 2), h2);
    CHECK(max_abs(joint - diag({0.0, 2.0, 1.0, 3.0})) < 1e-14);
}

TEST_CASE("partial_trace: product factors separate") {
    Rng rng(11);
    const Matrix a = random_hermitian(rng, 2);
    const Matrix b = random_hermitian(rng, 3);
    const Matrix ab = tensor(a, b);
    CHECK(max_abs(partial_trace(ab, {2, 3}, 0) - a * b.trace()) < 1e-12);
    CHECK(max_abs(partial_trace(ab, {2, 3}, 1) - b * a.trace()) < 1e-12);

    const Matrix c = random_hermitian(rng, 2);
    const Matrix abc = tensor(a, tensor(b, c));
    CHECK(max_abs(partial_trace(abc, {2, 3, 2}, 1) - b * (a.trace() * c.trace())) < 1e-12);
}

TEST_CASE("partial_trace: preserves trace, positive on positive input") {
    Rng rng(12);
    for (int trial = 0; trial < 25; ++trial) {
        const Distribution rho = random_distribution(rng, 6);
        const Matrix reduced = partial_trace(rho.matrix(), {2, 3}, trial % 2);
        CHECK(std::abs(reduced.trace() - rho.matrix().trace()) < 1e-12);
        CHECK(hermitian_eig(reduced).values.minCoeff() >= -1e-10);
    }
}

TEST_CASE("partial_trace: rejects inconsistent factor lists") {
    CHECK_THROWS_AS(partial_trace(Matrix::Identity(6, 6), {2, 2}, 0), validation_error);
    CHECK_THROWS_AS(partial_trace(Matrix::Identity(6, 6), {2, 3}, 2), validation_error);
}

TEST_CASE("apply_function: exponentials and logarithms") {
    CHECK(max_abs(apply_function(Matrix::Zero(3, 3), [](double x) { return std::exp(x); })
                  - Matrix::Identity(3, 3)) < 1e-14);

    const Matrix ln_scale = apply_function(diag({1.0, std::exp(1.0)}),
                                           [](double x) { return std::log(x); });
    CHECK(max_abs(ln_scale - diag({0.0, 1.0})) < 1e-12);

    const Matrix boltz = apply_function(diag({0.0, 1.0}), [](double x) { return std::exp(-x); });
    CHECK(max_abs(boltz - diag({1.0, 0.36787944117144233})) < 1e-12);
}

TEST_CASE("apply_function: rejects f undefined at an eigenvalue") {
    CHECK_THROWS_AS(apply_function(diag({-1.0, 1.0}), [](double x) { return std::log(x); }),
                    numerical_error);
}

TEST_CASE("log_on_support: zero eigenvalues contribute zero") {
    const Matrix l = log_on_support(diag({0.0, 1.0, std::exp(2.0)}));
    CHECK(max_abs(l - diag({0.0, 0.0, 2.0})) < 1e-12);
}

TEST_CASE("unitary_log: scalar phases and round trips") {
    CHECK(max_abs(unitary_log(Matrix::Identity(3, 3))) < 1e-12);

    Matrix v = Matrix::Zero(2, 2);
    v(0, 0) = 1.0;
    v(1, 1) = Complex(0.0, 1.0);
    const Matrix l = unitary_log(v);
    Matrix expected = Matrix::Zero(2, 2);
    expected(1, 1) = Complex(0.0, M_PI / 2.0);
    CHECK(max_abs(l - expected) < 1e-12);

    for (int trial = 0; trial < 30; ++trial) {
        Rng rng(mix_seed(99, trial));
        const Matrix u = random_unitary(rng, 3);
        const Matrix log_u = unitary_log(u);
        CHECK(max_abs(log_u + log_u.adjoint()) < 1e-10); // anti-Hermitian
        CHECK(max_abs(exp_anti_hermitian(log_u) - u) < 1e-8);
    }
}

TEST_CASE("unitary_log: rejects the -pi branch point") {
    CHECK_THROWS_AS(unitary_log(diag({1.0, -1.0})), numerical_error);
}

TEST_CASE("propagate: constant segment is exact at any step count") {
    Rng rng(5);
    const Matrix h = random_hermitian(rng, 3);
    const double tau = 1.7;
    const Matrix expected = hermitian_propagator(h, tau);
    for (long steps : {1L, 7L, 400L}) {
        const Matrix u = propagate(Schedule::constant(h, tau), steps);
        CHECK(max_abs(u - expected) < 1e-9);
    }
}

TEST_CASE("propagate: zero Hamiltonian gives the identity") {
    const Matrix u = propagate(Schedule::constant(Matrix::Zero(4, 4), 2.0), 10);
    CHECK(max_abs(u - Matrix::Identity(4, 4)) < 1e-14);
}

TEST_CASE("propagate: hbar scales the phase") {
    const Matrix h = diag({0.0, 1.0});
    const Matrix u = propagate(Schedule::constant(h, 2.0), 1, 2.0);
    CHECK(max_abs(u - hermitian_propagator(h, 1.0, 1.0)) < 1e-12);
}

TEST_CASE("propagate: second-order midpoint convergence on a smooth ramp") {
    Matrix sx(2, 2), sz(2, 2);
    sx << 0, 1, 1, 0;
    sz << 1, 0, 0, -1;
    const Schedule ramp = Schedule::ramp(sz, sx, 1.0);
    const Matrix reference = propagate(ramp, 8192);
    const double e64 = max_abs(propagate(ramp, 64) - reference);
    const double e128 = max_abs(propagate(ramp, 128) - reference);
    const double e256 = max_abs(propagate(ramp, 256) - reference);
    CHECK(e64 / e128 == doctest::Approx(4.0).epsilon(0.3));
    CHECK(e128 / e256 == doctest::Approx(4.0).epsilon(0.3));
}

TEST_CASE("propagate: unitarity drift stays near roundoff and is reported") {
    Matrix sx(2, 2), sz(2, 2);
    sx << 0, 1, 1, 0;
    sz << 1, 0, 0, -1;
    const Schedule ramp = Schedule::ramp(sz, sx, 3.0);
    const double defect_small = unitarity_defect(propagate(ramp, 1000));
    const double defect_large = unitarity_defect(propagate(ramp, 10000));
    MESSAGE("unitarity defect: ", defect_small, " at 1e3 steps, ", defect_large, " at 1e4 steps");
    CHECK(defect_small < 1e-12);
    CHECK(defect_large < 1e-11); // at most linear accumulation
}

TEST_CASE("schedule validation") {
    CHECK_THROWS_AS(Schedule::constant(Matrix::Identity(2, 2), -1.0).validate(), validation_error);
    CHECK_THROWS_AS(propagate(Schedule::constant(Matrix::Identity(2, 2), 1.0), 0), validation_error);
    Schedule mixed = Schedule::constant(Matrix::Identity(2, 2), 1.0);
    mixed.hold(Matrix::Identity(3, 3), 1.0);
    CHECK_THROWS_AS(mixed.validate(), validation_error);
}
