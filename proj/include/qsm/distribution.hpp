// distribution.hpp — density matrices, subdistribution decomposition, marginals,
// the Gibbs-von Neumann measure and its inequality toolkit.
#pragma once

#include "qsm/linalg.hpp"
#include "qsm/types.hpp"

#include <utility>
#include <vector>

namespace qsm {

// Positive semidefinite, unit-trace operator. Eigenvalues in [-psd_tol, 0) are
// clipped to 0 with renormalization; anything lower is rejected rather than
// silently repaired.
class Distribution {
public:
    explicit Distribution(const Matrix& rho, const Tolerances& tols = default_tolerances());

    static Distribution from_probabilities(const RealVector& probs, const Matrix& basis,
                                           const Tolerances& tols = default_tolerances());
    static Distribution pure(const Vector& psi);
    static Distribution maximally_mixed(int dim);

    const Matrix& matrix() const { return rho_; }
    int dim() const { return static_cast<int>(rho_.rows()); }

    // Cached spectrum (ascending), computed during validation.
    const Spectrum& spectrum() const { return spectrum_; }

private:
    Distribution() = default;
    Matrix rho_;
    Spectrum spectrum_;
};

// G(rho) = tr rho ln rho, with 0 ln 0 = 0. Always in [ln(1/d), 0] up to roundoff.
double gibbs_measure(const Distribution& rho);

// S(rho) = -k tr rho ln rho (additive constant fixed to 0 by convention).
double entropy(const Distribution& rho, double k = 1.0);

// tr rho (ln rho - ln sigma). Returns +infinity when the support of rho is not
// contained in the support of sigma (a distinguished value, not a failure).
double relative_measure(const Distribution& rho, const Distribution& sigma,
                        double support_tol = default_tolerances().support);

// Marginal over one tensor factor.
Distribution marginal(const Distribution& rho, const std::vector<int>& dims, int keep);

double real_expectation(const Matrix& op, const Distribution& rho);

// Correlation between the two factors of a bipartite state:
// C = G(rho) - G(rho1) - G(rho2) >= 0, zero exactly for product states.
double correlation(const Distribution& rho, int dim1, int dim2);

// Complete set of non-overlapping Hermitian idempotents.
struct ProjectorSet {
    std::vector<Matrix> projectors;

    explicit ProjectorSet(std::vector<Matrix> ks, const Tolerances& tols = default_tolerances());
    int dim() const { return static_cast<int>(projectors.front().rows()); }
};

// Splits rho into (weight, normalized block) pairs over the projector set.
// Blocks with weight <= weight_floor are omitted.
std::vector<std::pair<double, Distribution>> decompose(const Distribution& rho,
                                                       const ProjectorSet& k,
                                                       double weight_floor = 1e-12);

// (1/2) ||a - b||_1.
double trace_distance(const Distribution& a, const Distribution& b);

} // namespace qsm
