#include "qsm/canonical.hpp"

#include <cmath>
#include <sstream>

namespace qsm {

namespace {

constexpr double kMaxExponent = 700.0; // exp overflow guard after shifting

void require_beta(double beta) {
    if (!(beta > 0.0)) {
        std::ostringstream msg;
        msg << "canonical: beta must be positive, got " << beta;
        throw numerical_error(msg.str());
    }
}

void require_spread(double beta, const RealVector& values) {
    const double spread = values.maxCoeff() - values.minCoeff();
    if (beta * spread > kMaxExponent) {
        std::ostringstream msg;
        msg << "canonical: beta * spectral spread = " << beta * spread
            << " overflows the Boltzmann weights even after shifting";
        throw numerical_error(msg.str());
    }
}

// Shifted Boltzmann weights exp(-beta (E_n - E_0)), never overflowing for valid input.
RealVector shifted_weights(double beta, const RealVector& values) {
    require_spread(beta, values);
    const double e0 = values.minCoeff();
    RealVector w(values.size());
    for (Eigen::Index i = 0; i < values.size(); ++i) w[i] = std::exp(-beta * (values[i] - e0));
    return w;
}

} // namespace

double log_partition_function(const Matrix& h, double beta) {
    require_beta(beta);
    const Spectrum s = hermitian_eig(h);
    const RealVector w = shifted_weights(beta, s.values);
    return -beta * s.values.minCoeff() + std::log(w.sum());
}

double partition_function(const Matrix& h, double beta) {
    const double log_z = log_partition_function(h, beta);
    if (std::abs(log_z) > kMaxExponent) {
        throw numerical_error("partition_function: ln Z outside the representable range");
    }
    return std::exp(log_z);
}

Distribution canonical_state(const Matrix& h, double beta, const Tolerances& tols) {
    require_beta(beta);
    const Spectrum s = hermitian_eig(h, tols.hermiticity);
    RealVector w = shifted_weights(beta, s.values);
    w /= w.sum();
    return Distribution::from_probabilities(w, s.basis, tols);
}

CanonicalSpec make_canonical_spec(const Matrix& h, double beta) {
    return CanonicalSpec{h, beta, partition_function(h, beta)};
}

double canonical_mean_energy(const Matrix& h, double beta) {
    require_beta(beta);
    const Spectrum s = hermitian_eig(h);
    const RealVector w = shifted_weights(beta, s.values);
    return s.values.dot(w) / w.sum();
}

double beta_for_energy(const Matrix& h, double energy) {
    const Spectrum s = hermitian_eig(h);
    const double e_ground = s.values.minCoeff();
    const double e_uniform = s.values.mean(); // beta -> 0 limit

    auto reject = [&]() {
        std::ostringstream msg;
        msg << "beta_for_energy: target energy " << energy
            << " outside the attainable open interval (" << e_ground << ", " << e_uniform << ")";
        throw numerical_error(msg.str());
    };
    if (!(energy > e_ground) || !(energy < e_uniform)) reject();

    double lo = 1e-12; // mean(lo) is within roundoff of the uniform mean
    if (!(canonical_mean_energy(h, lo) > energy)) reject();

    const double spread = s.values.maxCoeff() - e_ground;
    const double beta_cap = kMaxExponent / spread;
    double hi = 1.0;
    while (canonical_mean_energy(h, hi) >= energy) {
        hi *= 2.0;
        if (hi > beta_cap) {
            // E is numerically indistinguishable from the ground energy.
            if (canonical_mean_energy(h, beta_cap) >= energy) reject();
            hi = beta_cap;
            break;
        }
    }
    if (lo > hi) lo = hi * 0.5;

    // <H>_beta is strictly decreasing, so bisection is guaranteed to converge.
    while ((hi - lo) / hi > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (canonical_mean_energy(h, mid) > energy) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace qsm
