// linalg.hpp — dense Hermitian-operator algebra: eigendecomposition, functional
// calculus, tensor products, partial traces, unitary logarithms.
#pragma once

#include "qsm/types.hpp"

#include <functional>
#include <vector>

namespace qsm {

// Eigenvalues ascending, eigenvectors as columns of a unitary basis.
struct Spectrum {
    RealVector values;
    Matrix basis;

    int dim() const { return static_cast<int>(values.size()); }
    Matrix reconstruct() const;
};

double max_abs(const Matrix& a);
double hermiticity_defect(const Matrix& a);
double unitarity_defect(const Matrix& u);

// Throws validation_error with the max deviation when A is not self-adjoint within tol.
void require_hermitian(const Matrix& a, double tol, const std::string& who);
void require_square(const Matrix& a, const std::string& who);

Matrix commutator(const Matrix& a, const Matrix& b);

// Real expectation value tr(op * rho) of a Hermitian operator.
double real_expectation(const Matrix& op, const Matrix& rho);

// Spectral decomposition of a Hermitian matrix. Deterministic for identical input.
Spectrum hermitian_eig(const Matrix& a, double hermiticity_tol = default_tolerances().hermiticity);

// Kronecker product.
Matrix tensor(const Matrix& a, const Matrix& b);

// Trace out every factor except `keep`. `dims` lists the factor dimensions whose
// product must equal the dimension of m.
Matrix partial_trace(const Matrix& m, const std::vector<int>& dims, int keep);

// U f(diag) U† through hermitian_eig. Rejects eigenvalues where f is not finite.
Matrix apply_function(const Matrix& a, const std::function<double(double)>& f,
                      double hermiticity_tol = default_tolerances().hermiticity);

// ln on the strictly positive part of the spectrum; eigenvalues <= support_tol
// contribute 0 (the 0 ln 0 = 0 convention).
Matrix log_on_support(const Matrix& a, double support_tol = default_tolerances().support);

// exp(-i H dt / hbar) for Hermitian H, via the spectral form (exactly unitary up
// to the eigendecomposition residual).
Matrix hermitian_propagator(const Matrix& h, double dt, double hbar = 1.0);

// Principal matrix logarithm of a unitary: anti-Hermitian, eigenphases in (-pi, pi].
// Rejects eigenphases within branch_tol of -pi (branch ambiguity).
Matrix unitary_log(const Matrix& v,
                   double unitarity_tol = 1e-8,
                   double branch_tol = default_tolerances().unitary_log_branch);

// |tr(U† V)| / d; 1 when U and V agree up to a global phase.
double unitary_fidelity(const Matrix& u, const Matrix& v);

} // namespace qsm
