#include "qsm/canonical.hpp"
#include "qsm/random.hpp"

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

} // namespace

TEST_CASE("canonical_state: scalar Boltzmann weights") {
    const Distribution rho = canonical_state(diag({0.0, 1.0}), 1.0);
    const double p0 = 1.0 / (1.0 + std::exp(-1.0));
    CHECK(std::real(rho.matrix()(0, 0)) == doctest::Approx(p0).epsilon(1e-12));
    CHECK(std::real(rho.matrix()(1, 1)) == doctest::Approx(1.0 - p0).epsilon(1e-12));
    CHECK(std::real(rho.matrix()(0, 0)) == doctest::Approx(0.731059).epsilon(1e-6));
}

TEST_CASE("canonical_state: geometric weights at beta = ln 2") {
    const Distribution rho = canonical_state(diag({0.0, 1.0, 2.0}), std::log(2.0));
    CHECK(std::real(rho.matrix()(0, 0)) == doctest::Approx(4.0 / 7.0).epsilon(1e-12));
    CHECK(std::real(rho.matrix()(1, 1)) == doctest::Approx(2.0 / 7.0).epsilon(1e-12));
    CHECK(std::real(rho.matrix()(2, 2)) == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("canonical_state: beta -> 0 limit is uniform") {
    Rng rng(17);
    const Matrix h = random_hermitian(rng, 4);
    const Distribution rho = canonical_state(h, 1e-12);
    CHECK(max_abs(rho.matrix() - 0.25 * Matrix::Identity(4, 4)) < 1e-9);
}

TEST_CASE("canonical_state: commutes with H, rejects bad domains") {
    Rng rng(18);
    const Matrix h = random_hermitian(rng, 5);
    const Distribution rho = canonical_state(h, 0.8);
    CHECK(max_abs(commutator(rho.matrix(), h)) < 1e-9);

    CHECK_THROWS_AS(canonical_state(h, 0.0), numerical_error);
    CHECK_THROWS_AS(canonical_state(h, -1.0), numerical_error);
    CHECK_THROWS_AS(canonical_state(diag({0.0, 1000.0}), 1.0), numerical_error);
}

TEST_CASE("partition_function: degenerate, two-level, factorization") {
    CHECK(partition_function(Matrix::Zero(3, 3), 2.7) == doctest::Approx(3.0));
    CHECK(partition_function(diag({0.0, 1.0}), 1.0)
          == doctest::Approx(1.0 + std::exp(-1.0)).epsilon(1e-14));
    CHECK(partition_function(diag({0.0, 1.0}), 1.0) == doctest::Approx(1.367879).epsilon(1e-6));

    const Matrix h1 = diag({0.0, 0.9});
    const Matrix h2 = diag({0.2, 0.5, 1.1});
    const Matrix joint = tensor(h1, Matrix::Identity(3, 3)) + tensor(Matrix::Identity(2, 2), h2);
    const double beta = 1.4;
    CHECK(partition_function(joint, beta)
          == doctest::Approx(partition_function(h1, beta) * partition_function(h2, beta)).epsilon(1e-12));
}

TEST_CASE("canonical factorization of the state itself") {
    const Matrix h1 = diag({0.0, 0.9});
    const Matrix h2 = diag({0.2, 0.5, 1.1});
    const Matrix joint = tensor(h1, Matrix::Identity(3, 3)) + tensor(Matrix::Identity(2, 2), h2);
    const double beta = 1.4;
    const Matrix product = tensor(canonical_state(h1, beta).matrix(),
                                  canonical_state(h2, beta).matrix());
    CHECK(max_abs(canonical_state(joint, beta).matrix() - product) < 1e-9);
}

TEST_CASE("make_canonical_spec: stored Z matches the spectral sum") {
    Rng rng(19);
    const Matrix h = random_hermitian(rng, 4);
    const CanonicalSpec spec = make_canonical_spec(h, 1.1);
    const Spectrum s = hermitian_eig(h);
    double z = 0.0;
    for (int i = 0; i < 4; ++i) z += std::exp(-1.1 * s.values[i]);
    CHECK(spec.z == doctest::Approx(z).epsilon(1e-9));
}

TEST_CASE("beta_for_energy: closed-form two-level inversion") {
    const Matrix h = diag({0.0, 1.0});
    const double e_target = std::exp(-1.0) / (1.0 + std::exp(-1.0)); // mean at beta = 1
    CHECK(beta_for_energy(h, e_target) == doctest::Approx(1.0).epsilon(1e-9));

    // Generic target: invert E = 1/(1 + e^beta) in closed form.
    const double e2 = 0.2;
    const double beta_expected = std::log((1.0 - e2) / e2);
    CHECK(beta_for_energy(h, e2) == doctest::Approx(beta_expected).epsilon(1e-9));
}

TEST_CASE("beta_for_energy: near-uniform series limit") {
    const Matrix h = diag({0.0, 1.0});
    // E = 1/2 - beta/4 + O(beta^3) for small beta.
    CHECK(beta_for_energy(h, 0.5 - 1e-6) == doctest::Approx(4e-6).epsilon(1e-3));
}

TEST_CASE("beta_for_energy: rejects targets outside the open interval") {
    const Matrix h = diag({0.0, 1.0});
    CHECK_THROWS_WITH_AS(beta_for_energy(h, 0.0), doctest::Contains("open interval"), numerical_error);
    CHECK_THROWS_AS(beta_for_energy(h, 0.5), numerical_error);
    CHECK_THROWS_AS(beta_for_energy(h, 0.7), numerical_error);
    CHECK_THROWS_AS(beta_for_energy(h, -0.1), numerical_error);
}

TEST_CASE("beta_for_energy: round trip accuracy on random Hamiltonians") {
    for (int trial = 0; trial < 40; ++trial) {
        Rng rng(mix_seed(2718, trial));
        const int d = 2 + trial % 4;
        const Matrix h = random_hermitian(rng, d);
        const Spectrum s = hermitian_eig(h);
        const double e0 = s.values.minCoeff();
        const double eu = s.values.mean();
        const double target = e0 + (eu - e0) * rng.uniform(0.05, 0.95);
        const double beta = beta_for_energy(h, target);
        const double spread = s.values.maxCoeff() - e0;
        CHECK(std::abs(canonical_mean_energy(h, beta) - target) <= 1e-9 * spread);
    }
}

TEST_CASE("canonical extremality: G + beta <H> is minimized by the canonical state") {
    for (int trial = 0; trial < 200; ++trial) {
        Rng rng(mix_seed(31415, trial));
        const int d = 2 + trial % 4;
        const Matrix h = random_hermitian(rng, d);
        const double beta = rng.uniform(0.2, 3.0);
        const Distribution rho_beta = canonical_state(h, beta);
        const double f_min = gibbs_measure(rho_beta) + beta * real_expectation(h, rho_beta);

        const Distribution rho = random_distribution(rng, d);
        const double f = gibbs_measure(rho) + beta * real_expectation(h, rho);
        CHECK(f >= f_min - 1e-9);

        // Rearranged form: G' - G_beta >= -beta (<H>' - <H>_beta).
        const double lhs = gibbs_measure(rho) - gibbs_measure(rho_beta);
        const double rhs = -beta * (real_expectation(h, rho) - real_expectation(h, rho_beta));
        CHECK(lhs >= rhs - 1e-9);
    }
}

TEST_CASE("canonical mean energy strictly decreases in beta") {
    Rng rng(20);
    for (int trial = 0; trial < 10; ++trial) {
        const int d = 2 + trial % 4;
        const Matrix h = random_hermitian(rng, d);
        double previous = canonical_mean_energy(h, 1e-6);
        for (double beta = 0.1; beta < 12.0; beta *= 1.7) {
            const double mean = canonical_mean_energy(h, beta);
            CHECK(mean < previous);
            previous = mean;
        }
    }
}
