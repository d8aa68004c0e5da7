#include "qsm/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numeric>
#include <sstream>

namespace qsm {

Matrix Spectrum::reconstruct() const {
    return basis * values.cast<Complex>().asDiagonal() * basis.adjoint();
}

double max_abs(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    return a.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const Matrix& a) {
    return max_abs(a - a.adjoint());
}

double unitarity_defect(const Matrix& u) {
    return max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols()));
}

void require_square(const Matrix& a, const std::string& who) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        std::ostringstream msg;
        msg << who << ": expected a non-empty square matrix, got " << a.rows() << "x" << a.cols();
        throw validation_error(msg.str());
    }
}

void require_hermitian(const Matrix& a, double tol, const std::string& who) {
    require_square(a, who);
    const double defect = hermiticity_defect(a);
    if (defect > tol) {
        std::ostringstream msg;
        msg << who << ": matrix is not self-adjoint, max |A - A†| entry = " << defect
            << " exceeds tolerance " << tol;
        throw validation_error(msg.str());
    }
}

Matrix commutator(const Matrix& a, const Matrix& b) {
    return a * b - b * a;
}

double real_expectation(const Matrix& op, const Matrix& rho) {
    return (op * rho).trace().real();
}

Spectrum hermitian_eig(const Matrix& a, double hermiticity_tol) {
    require_hermitian(a, hermiticity_tol, "hermitian_eig");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (a + a.adjoint()));
    if (solver.info() != Eigen::Success) {
        throw numerical_error("hermitian_eig: eigensolver did not converge");
    }
    Spectrum s;
    s.values = solver.eigenvalues();
    s.basis = solver.eigenvectors();
    return s;
}

Matrix tensor(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Matrix partial_trace(const Matrix& m, const std::vector<int>& dims, int keep) {
    require_square(m, "partial_trace");
    if (dims.empty() || keep < 0 || keep >= static_cast<int>(dims.size())) {
        throw validation_error("partial_trace: keep index outside the factor list");
    }
    long total = 1;
    for (int d : dims) {
        if (d < 1) throw validation_error("partial_trace: factor dimensions must be >= 1");
        total *= d;
    }
    if (total != m.rows()) {
        std::ostringstream msg;
        msg << "partial_trace: factor product " << total << " does not match matrix dimension "
            << m.rows();
        throw validation_error(msg.str());
    }

    const int n = static_cast<int>(dims.size());
    const int dk = dims[keep];
    std::vector<long> stride(n);
    long acc = 1;
    for (int f = n - 1; f >= 0; --f) {
        stride[f] = acc;
        acc *= dims[f];
    }

    auto factor_index = [&](long flat, int f) { return (flat / stride[f]) % dims[f]; };

    Matrix out = Matrix::Zero(dk, dk);
    for (long r = 0; r < total; ++r) {
        for (long c = 0; c < total; ++c) {
            bool diagonal_elsewhere = true;
            for (int f = 0; f < n && diagonal_elsewhere; ++f) {
                if (f != keep && factor_index(r, f) != factor_index(c, f)) diagonal_elsewhere = false;
            }
            if (diagonal_elsewhere) {
                out(factor_index(r, keep), factor_index(c, keep)) += m(r, c);
            }
        }
    }
    return out;
}

Matrix apply_function(const Matrix& a, const std::function<double(double)>& f,
                      double hermiticity_tol) {
    const Spectrum s = hermitian_eig(a, hermiticity_tol);
    RealVector mapped(s.values.size());
    for (Eigen::Index i = 0; i < s.values.size(); ++i) {
        const double y = f(s.values[i]);
        if (!std::isfinite(y)) {
            std::ostringstream msg;
            msg << "apply_function: f undefined (non-finite) at eigenvalue " << s.values[i];
            throw numerical_error(msg.str());
        }
        mapped[i] = y;
    }
    return s.basis * mapped.cast<Complex>().asDiagonal() * s.basis.adjoint();
}

Matrix log_on_support(const Matrix& a, double support_tol) {
    const Spectrum s = hermitian_eig(a);
    RealVector mapped(s.values.size());
    for (Eigen::Index i = 0; i < s.values.size(); ++i) {
        const double lambda = s.values[i];
        if (lambda <= support_tol) {
            mapped[i] = 0.0;
        } else {
            mapped[i] = std::log(lambda);
        }
    }
    return s.basis * mapped.cast<Complex>().asDiagonal() * s.basis.adjoint();
}

Matrix hermitian_propagator(const Matrix& h, double dt, double hbar) {
    const Spectrum s = hermitian_eig(h);
    Vector phases(s.values.size());
    for (Eigen::Index i = 0; i < s.values.size(); ++i) {
        phases[i] = std::exp(Complex(0.0, -s.values[i] * dt / hbar));
    }
    return s.basis * phases.asDiagonal() * s.basis.adjoint();
}

Matrix unitary_log(const Matrix& v, double unitarity_tol, double branch_tol) {
    require_square(v, "unitary_log");
    const double defect = unitarity_defect(v);
    if (defect > unitarity_tol) {
        std::ostringstream msg;
        msg << "unitary_log: input is not unitary within " << unitarity_tol
            << " (defect " << defect << ")";
        throw validation_error(msg.str());
    }
    // A unitary is normal, so its Schur form is diagonal up to roundoff and the
    // Schur basis is orthonormal by construction.
    Eigen::ComplexSchur<Matrix> schur(v);
    if (schur.info() != Eigen::Success) {
        throw numerical_error("unitary_log: Schur decomposition did not converge");
    }
    const Matrix& t = schur.matrixT();
    const Matrix& q = schur.matrixU();
    Vector logs(v.rows());
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
        const double theta = std::arg(t(i, i));
        if (std::abs(theta + M_PI) < branch_tol || std::abs(theta - M_PI) < branch_tol) {
            std::ostringstream msg;
            msg << "unitary_log: eigenphase " << theta << " within " << branch_tol
                << " of the -pi branch cut; perturb the input";
            throw numerical_error(msg.str());
        }
        logs[i] = Complex(0.0, theta);
    }
    return q * logs.asDiagonal() * q.adjoint();
}

double unitary_fidelity(const Matrix& u, const Matrix& v) {
    return std::abs((u.adjoint() * v).trace()) / static_cast<double>(u.rows());
}

} // namespace qsm
