#include "qsm/canonical.hpp"
#include "qsm/distribution.hpp"
#include "qsm/random.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace qsm;

namespace {

double scalar_g(std::initializer_list<double> probs) {
    double g = 0.0;
    for (double p : probs) {
        if (p > 0.0) g += p * std::log(p);
    }
    return g;
}

Distribution bell_pair() {
    Vector psi = Vector::Zero(4);
    psi[0] = 1.0 / std::sqrt(2.0);
    psi[3] = 1.0 / std::sqrt(2.0);
    return Distribution::pure(psi);
}

Matrix diag(std::initializer_list<double> entries) {
    RealVector v(static_cast<Eigen::Index>(entries.size()));
    Eigen::Index i = 0;
    for (double e : entries) v[i++] = e;
    return v.cast<Complex>().asDiagonal();
}

} // namespace

TEST_CASE("Distribution: validation accepts, clips, rejects") {
    // In-tolerance negative eigenvalue is clipped and renormalized.
    Matrix nearly = diag({1.0 + 5e-11, -5e-11});
    const Distribution repaired(nearly);
    CHECK(repaired.spectrum().values.minCoeff() >= 0.0);
    CHECK(std::abs(repaired.matrix().trace().real() - 1.0) < 1e-14);

    // Beyond tolerance is a rejection, not a silent repair.
    CHECK_THROWS_AS(Distribution(diag({1.001, -0.001})), validation_error);
    // Trace must be 1.
    CHECK_THROWS_AS(Distribution(diag({0.6, 0.6})), validation_error);
    // Hermiticity enforced.
    Matrix skew = diag({0.5, 0.5});
    skew(0, 1) = Complex(0.0, 1e-3);
    CHECK_THROWS_AS(Distribution{skew}, validation_error);
}

TEST_CASE("gibbs_measure: pure, uniform, and two-level canonical values") {
    Rng rng(3);
    CHECK(gibbs_measure(Distribution::pure(random_pure_vector(rng, 4))) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(gibbs_measure(Distribution::maximally_mixed(4)) == doctest::Approx(std::log(0.25)));

    const double p0 = 1.0 / (1.0 + std::exp(-1.0)); // 0.731059...
    const Distribution two_level(diag({p0, 1.0 - p0}));
    CHECK(gibbs_measure(two_level) == doctest::Approx(scalar_g({p0, 1.0 - p0})).epsilon(1e-12));
    CHECK(gibbs_measure(two_level) == doctest::Approx(-0.58220).epsilon(1e-4));

    // Bounds: ln(1/d) <= G <= 0.
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 2 + trial % 5;
        const double g = gibbs_measure(random_distribution(rng, d));
        CHECK(g <= 1e-12);
        CHECK(g >= std::log(1.0 / d) - 1e-12);
    }
}

TEST_CASE("entropy: -k G with configurable k") {
    Rng rng(4);
    const Distribution rho = random_distribution(rng, 3);
    CHECK(entropy(rho, 1.0) == doctest::Approx(-gibbs_measure(rho)).epsilon(1e-14));
    CHECK(entropy(rho, 1.380649e-23) == doctest::Approx(-1.380649e-23 * gibbs_measure(rho)));
    CHECK(entropy(Distribution::maximally_mixed(5), 2.0) == doctest::Approx(2.0 * std::log(5.0)));
    CHECK(entropy(canonical_state(diag({0.0, 1.0}), 1.0)) == doctest::Approx(0.58220).epsilon(1e-4));
}

TEST_CASE("relative_measure: zero at equality, ln 2 example, support violation") {
    Rng rng(5);
    const Distribution rho = random_distribution(rng, 3);
    CHECK(std::abs(relative_measure(rho, rho)) < 1e-12);

    Vector ground = Vector::Zero(2);
    ground[0] = 1.0;
    const Distribution pure0 = Distribution::pure(ground);
    CHECK(relative_measure(pure0, Distribution::maximally_mixed(2)) == doctest::Approx(std::log(2.0)));
    CHECK(std::isinf(relative_measure(Distribution::maximally_mixed(2), pure0)));
}

TEST_CASE("Klein inequality on 200 random pairs, d in 2..6") {
    for (int trial = 0; trial < 200; ++trial) {
        Rng rng(mix_seed(42, trial));
        const int d = 2 + trial % 5;
        const Distribution rho = random_distribution(rng, d);
        const Distribution sigma = random_distribution(rng, d);
        const double value = relative_measure(rho, sigma);
        CHECK(value >= -1e-9);
        // Zero only at equality: distinct random pairs sit far from zero.
        if (max_abs(rho.matrix() - sigma.matrix()) > 1e-6) CHECK(value > 1e-8);
    }
}

TEST_CASE("marginal: products, entanglement, canonical factorization") {
    Rng rng(6);
    const Distribution rho1 = random_distribution(rng, 2);
    const Distribution rho2 = random_distribution(rng, 3);
    const Distribution joint(tensor(rho1.matrix(), rho2.matrix()));
    CHECK(max_abs(marginal(joint, {2, 3}, 0).matrix() - rho1.matrix()) < 1e-12);
    CHECK(max_abs(marginal(joint, {2, 3}, 1).matrix() - rho2.matrix()) < 1e-12);

    CHECK(max_abs(marginal(bell_pair(), {2, 2}, 0).matrix() - 0.5 * Matrix::Identity(2, 2)) < 1e-12);

    // Non-interacting joint canonical state has canonical marginals at the same beta.
    const Matrix h1 = diag({0.0, 0.7});
    const Matrix h2 = diag({0.0, 0.4, 1.3});
    const Matrix h_joint = tensor(h1, Matrix::Identity(3, 3)) + tensor(Matrix::Identity(2, 2), h2);
    const double beta = 1.3;
    const Distribution joint_canonical = canonical_state(h_joint, beta);
    CHECK(max_abs(marginal(joint_canonical, {2, 3}, 0).matrix() - canonical_state(h1, beta).matrix()) < 1e-9);
    CHECK(max_abs(marginal(joint_canonical, {2, 3}, 1).matrix() - canonical_state(h2, beta).matrix()) < 1e-9);
}

TEST_CASE("correlation: product zero, Bell pair 2 ln 2, classical ln 2") {
    Rng rng(7);
    const Distribution rho1 = random_distribution(rng, 2);
    const Distribution rho2 = random_distribution(rng, 2);
    CHECK(correlation(Distribution(tensor(rho1.matrix(), rho2.matrix())), 2, 2)
          == doctest::Approx(0.0).epsilon(1e-10));

    CHECK(correlation(bell_pair(), 2, 2) == doctest::Approx(2.0 * std::log(2.0)));

    const Distribution classical(diag({0.5, 0.0, 0.0, 0.5}));
    CHECK(correlation(classical, 2, 2) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("correlation: nonnegative, zero only for products") {
    for (int trial = 0; trial < 60; ++trial) {
        Rng rng(mix_seed(77, trial));
        const Distribution joint = random_distribution(rng, 6);
        const double c = correlation(joint, 2, 3);
        CHECK(c >= -1e-9);
        const Matrix product = tensor(marginal(joint, {2, 3}, 0).matrix(),
                                      marginal(joint, {2, 3}, 1).matrix());
        if (c <= 1e-8) CHECK(max_abs(joint.matrix() - product) < 1e-7);
    }
}

TEST_CASE("ProjectorSet: validation") {
    const Matrix e1 = diag({1.0, 0.0, 0.0});
    const Matrix rest = diag({0.0, 1.0, 1.0});
    CHECK_NOTHROW(ProjectorSet({e1, rest}));
    CHECK_THROWS_AS(ProjectorSet({e1, e1}), validation_error);         // not complete
    CHECK_THROWS_AS(ProjectorSet({e1, rest, rest}), validation_error); // overlap
}

TEST_CASE("decompose: trivial, block arithmetic, pure inside a block") {
    Rng rng(8);
    const Distribution rho = random_distribution(rng, 3);
    const ProjectorSet trivial({Matrix::Identity(3, 3)});
    const auto whole = decompose(rho, trivial);
    REQUIRE(whole.size() == 1);
    CHECK(whole[0].first == doctest::Approx(1.0));
    CHECK(max_abs(whole[0].second.matrix() - rho.matrix()) < 1e-12);

    const Distribution mixed(diag({0.5, 0.3, 0.2}));
    const ProjectorSet split({diag({1.0, 0.0, 0.0}), diag({0.0, 1.0, 1.0})});
    const auto parts = decompose(mixed, split);
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].first == doctest::Approx(0.5));
    CHECK(parts[1].first == doctest::Approx(0.5));
    CHECK(max_abs(parts[0].second.matrix() - diag({1.0, 0.0, 0.0})) < 1e-12);
    CHECK(max_abs(parts[1].second.matrix() - diag({0.0, 0.6, 0.4})) < 1e-12);

    Vector in_block = Vector::Zero(3);
    in_block[1] = std::sqrt(0.5);
    in_block[2] = std::sqrt(0.5);
    const auto pure_parts = decompose(Distribution::pure(in_block), split);
    REQUIRE(pure_parts.size() == 1);
    CHECK(pure_parts[0].first == doctest::Approx(1.0));

    // Weights always sum to 1.
    double total = 0.0;
    for (const auto& [w, _] : parts) total += w;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("G is concave, unitary invariant, additive") {
    for (int trial = 0; trial < 60; ++trial) {
        Rng rng(mix_seed(123, trial));
        const int d = 2 + trial % 4;
        const Distribution rho = random_distribution(rng, d);
        const Distribution sigma = random_distribution(rng, d);
        const double lambda = rng.uniform();

        const Distribution blend(lambda * rho.matrix() + (1.0 - lambda) * sigma.matrix());
        CHECK(gibbs_measure(blend)
              <= lambda * gibbs_measure(rho) + (1.0 - lambda) * gibbs_measure(sigma) + 1e-9);

        const Matrix u = random_unitary(rng, d);
        const Distribution rotated(u * rho.matrix() * u.adjoint());
        CHECK(std::abs(gibbs_measure(rotated) - gibbs_measure(rho)) < 1e-9);

        const Distribution product(tensor(rho.matrix(), sigma.matrix()));
        CHECK(std::abs(gibbs_measure(product) - gibbs_measure(rho) - gibbs_measure(sigma)) < 1e-9);
    }
}

TEST_CASE("marginal G sum never increases for initially uncorrelated systems") {
    for (int trial = 0; trial < 60; ++trial) {
        Rng rng(mix_seed(321, trial));
        const Distribution rho1 = random_distribution(rng, 2);
        const Distribution rho2 = random_distribution(rng, 3);
        const Distribution joint(tensor(rho1.matrix(), rho2.matrix()));
        const double before = gibbs_measure(rho1) + gibbs_measure(rho2);

        const Matrix u = random_unitary(rng, 6);
        const Distribution evolved(u * joint.matrix() * u.adjoint());
        const double after = gibbs_measure(marginal(evolved, {2, 3}, 0))
                           + gibbs_measure(marginal(evolved, {2, 3}, 1));
        CHECK(after <= before + 1e-9);

        const Matrix u_prod = tensor(random_unitary(rng, 2), random_unitary(rng, 3));
        const Distribution evolved_prod(u_prod * joint.matrix() * u_prod.adjoint());
        const double after_prod = gibbs_measure(marginal(evolved_prod, {2, 3}, 0))
                                + gibbs_measure(marginal(evolved_prod, {2, 3}, 1));
        CHECK(std::abs(after_prod - before) < 1e-8);
    }
}

TEST_CASE("mixing over a projector set never increases G") {
    for (int trial = 0; trial < 40; ++trial) {
        Rng rng(mix_seed(555, trial));
        const int d = 4;
        const Distribution rho = random_distribution(rng, d);
        const Matrix u = random_unitary(rng, d);
        // Random rank-2 + rank-2 split of the identity.
        Matrix k1 = Matrix::Zero(d, d), k2 = Matrix::Zero(d, d);
        for (int c = 0; c < d; ++c) {
            const Matrix outer = u.col(c) * u.col(c).adjoint();
            if (c < 2) {
                k1 += outer;
            } else {
                k2 += outer;
            }
        }
        const ProjectorSet k({k1, k2});
        const Distribution mixed(k1 * rho.matrix() * k1 + k2 * rho.matrix() * k2);
        CHECK(gibbs_measure(mixed) <= gibbs_measure(rho) + 1e-9);
    }
}

TEST_CASE("trace_distance: basic properties") {
    Rng rng(9);
    const Distribution a = random_distribution(rng, 3);
    const Distribution b = random_distribution(rng, 3);
    CHECK(trace_distance(a, a) == doctest::Approx(0.0));
    CHECK(trace_distance(a, b) == doctest::Approx(trace_distance(b, a)));
    CHECK(trace_distance(a, b) >= 0.0);
    CHECK(trace_distance(a, b) <= 1.0 + 1e-12);
}
