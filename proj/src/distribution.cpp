#include "qsm/distribution.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace qsm {

Distribution::Distribution(const Matrix& rho, const Tolerances& tols) {
    require_hermitian(rho, tols.hermiticity, "Distribution");
    const double tr_err = std::abs(rho.trace() - Complex(1.0, 0.0));
    if (tr_err > tols.trace) {
        std::ostringstream msg;
        msg << "Distribution: trace deviates from 1 by " << tr_err;
        throw validation_error(msg.str());
    }
    Spectrum s = hermitian_eig(rho, tols.hermiticity);
    const double lambda_min = s.values.minCoeff();
    if (lambda_min < -tols.psd) {
        std::ostringstream msg;
        msg << "Distribution: eigenvalue " << lambda_min << " below the PSD floor -" << tols.psd;
        throw validation_error(msg.str());
    }
    // Clip the in-tolerance negative tail and renormalize.
    double total = 0.0;
    for (Eigen::Index i = 0; i < s.values.size(); ++i) {
        if (s.values[i] < 0.0) s.values[i] = 0.0;
        total += s.values[i];
    }
    s.values /= total;
    rho_ = s.reconstruct();
    spectrum_ = std::move(s);
}

Distribution Distribution::from_probabilities(const RealVector& probs, const Matrix& basis,
                                              const Tolerances& tols) {
    if (probs.size() != basis.rows() || basis.rows() != basis.cols()) {
        throw validation_error("Distribution::from_probabilities: dimension mismatch");
    }
    const Matrix rho = basis * probs.cast<Complex>().asDiagonal() * basis.adjoint();
    return Distribution(rho, tols);
}

Distribution Distribution::pure(const Vector& psi) {
    const double n = psi.norm();
    if (!(n > 0.0)) throw validation_error("Distribution::pure: zero vector");
    const Vector v = psi / n;
    return Distribution(v * v.adjoint());
}

Distribution Distribution::maximally_mixed(int dim) {
    if (dim < 1) throw validation_error("Distribution::maximally_mixed: dim must be >= 1");
    return Distribution(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

namespace {

double sum_p_ln_p(const RealVector& p, double support_tol) {
    double g = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p[i] > support_tol) g += p[i] * std::log(p[i]);
    }
    return g;
}

} // namespace

double gibbs_measure(const Distribution& rho) {
    return sum_p_ln_p(rho.spectrum().values, default_tolerances().support);
}

double entropy(const Distribution& rho, double k) {
    return -k * gibbs_measure(rho);
}

double relative_measure(const Distribution& rho, const Distribution& sigma, double support_tol) {
    if (rho.dim() != sigma.dim()) {
        throw validation_error("relative_measure: dimension mismatch");
    }
    const Spectrum& ss = sigma.spectrum();
    double cross = 0.0; // tr rho ln sigma over the support of sigma
    for (Eigen::Index j = 0; j < ss.values.size(); ++j) {
        const Vector v = ss.basis.col(j);
        const double weight = std::real((v.adjoint() * rho.matrix() * v)(0, 0));
        if (ss.values[j] <= support_tol) {
            if (weight > default_tolerances().psd) {
                return std::numeric_limits<double>::infinity();
            }
            continue;
        }
        cross += weight * std::log(ss.values[j]);
    }
    return gibbs_measure(rho) - cross;
}

Distribution marginal(const Distribution& rho, const std::vector<int>& dims, int keep) {
    return Distribution(partial_trace(rho.matrix(), dims, keep));
}

double real_expectation(const Matrix& op, const Distribution& rho) {
    return real_expectation(op, rho.matrix());
}

double correlation(const Distribution& rho, int dim1, int dim2) {
    if (dim1 * dim2 != rho.dim()) {
        throw validation_error("correlation: bipartite dims do not match the state");
    }
    const Distribution m1 = marginal(rho, {dim1, dim2}, 0);
    const Distribution m2 = marginal(rho, {dim1, dim2}, 1);
    return gibbs_measure(rho) - gibbs_measure(m1) - gibbs_measure(m2);
}

ProjectorSet::ProjectorSet(std::vector<Matrix> ks, const Tolerances& tols) : projectors(std::move(ks)) {
    if (projectors.empty()) throw validation_error("ProjectorSet: empty");
    const Eigen::Index d = projectors.front().rows();
    Matrix sum = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < projectors.size(); ++i) {
        require_hermitian(projectors[i], tols.projector, "ProjectorSet");
        if (projectors[i].rows() != d) throw validation_error("ProjectorSet: dimension mismatch");
        for (std::size_t j = 0; j < projectors.size(); ++j) {
            const Matrix prod = projectors[i] * projectors[j];
            const Matrix expect = (i == j) ? projectors[i] : Matrix::Zero(d, d);
            if (max_abs(prod - expect) > tols.projector) {
                throw validation_error("ProjectorSet: K_i K_j != delta_ij K_i within tolerance");
            }
        }
        sum += projectors[i];
    }
    if (max_abs(sum - Matrix::Identity(d, d)) > tols.projector) {
        throw validation_error("ProjectorSet: projectors do not sum to the identity");
    }
}

std::vector<std::pair<double, Distribution>> decompose(const Distribution& rho,
                                                       const ProjectorSet& k,
                                                       double weight_floor) {
    if (k.dim() != rho.dim()) throw validation_error("decompose: dimension mismatch");
    std::vector<std::pair<double, Distribution>> out;
    for (const Matrix& proj : k.projectors) {
        const Matrix block = proj * rho.matrix() * proj;
        const double w = block.trace().real();
        if (w <= weight_floor) continue;
        out.emplace_back(w, Distribution(block / w));
    }
    return out;
}

double trace_distance(const Distribution& a, const Distribution& b) {
    if (a.dim() != b.dim()) throw validation_error("trace_distance: dimension mismatch");
    const Spectrum s = hermitian_eig(a.matrix() - b.matrix());
    return 0.5 * s.values.cwiseAbs().sum();
}

} // namespace qsm
