#include "qsm/random.hpp"

#include <Eigen/QR>

#include <algorithm>

namespace qsm {

namespace {

Matrix ginibre(Rng& rng, int dim) {
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            g(i, j) = Complex(rng.normal(), rng.normal());
        }
    }
    return g;
}

} // namespace

Matrix random_hermitian(Rng& rng, int dim, double scale) {
    const Matrix g = ginibre(rng, dim);
    return scale * 0.5 * (g + g.adjoint());
}

Matrix random_unitary(Rng& rng, int dim) {
    const Matrix g = ginibre(rng, dim);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
        const Complex d = r(j, j);
        q.col(j) *= (std::abs(d) > 0.0) ? d / std::abs(d) : Complex(1.0, 0.0);
    }
    return q;
}

Distribution random_distribution(Rng& rng, int dim) {
    const Matrix g = ginibre(rng, dim);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return Distribution(0.5 * (rho + rho.adjoint()));
}

Vector random_pure_vector(Rng& rng, int dim) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = Complex(rng.normal(), rng.normal());
    return v / v.norm();
}

RealVector random_descending_probs(Rng& rng, int dim) {
    RealVector p(dim);
    double total = 0.0;
    for (int i = 0; i < dim; ++i) {
        p[i] = rng.uniform(0.05, 1.0);
        total += p[i];
    }
    p /= total;
    std::sort(p.data(), p.data() + dim, std::greater<double>());
    // Separate ties so that log-probability gaps are well defined.
    for (int i = 1; i < dim; ++i) {
        if (p[i - 1] - p[i] < 1e-6) p[i] = std::max(1e-4, p[i] - 1e-3 * (i + 1));
    }
    p /= p.sum();
    std::sort(p.data(), p.data() + dim, std::greater<double>());
    return p;
}

RealVector random_ascending_energies(Rng& rng, int dim, double span) {
    RealVector e(dim);
    for (int i = 0; i < dim; ++i) e[i] = rng.uniform(0.0, span);
    std::sort(e.data(), e.data() + dim);
    for (int i = 1; i < dim; ++i) {
        if (e[i] - e[i - 1] < 1e-3) e[i] = e[i - 1] + 1e-3 + 0.05 * rng.uniform();
    }
    return e;
}

} // namespace qsm
