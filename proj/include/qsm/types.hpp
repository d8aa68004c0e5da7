// types.hpp — shared aliases, error types, tolerance and unit records
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace qsm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Input fails a structural precondition (shape, broken invariant, malformed plan).
struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Input is structurally fine but outside an operation's numerical domain
// (overflow, branch ambiguity, combinatorial budget, ...).
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Tolerances shared across the library. One record so the defaults live in one place.
struct Tolerances {
    double hermiticity = 1e-10;   // max |A - A†| entry
    double psd = 1e-10;           // eigenvalue floor for distributions
    double trace = 1e-10;         // |tr rho - 1|
    double projector = 1e-9;      // projector-set orthogonality / completeness
    double support = 1e-12;       // eigenvalue <= support treated as 0 (0 ln 0 = 0)
    double reconstruction = 1e-9; // |U diag U† - A|
    double conserving = 1e-9;     // |[V, H]| bound for energy-conserving couplings
    double unitary_log_branch = 1e-8; // eigenphase distance from -pi
};

inline const Tolerances& default_tolerances() {
    static const Tolerances tols{};
    return tols;
}

// Unit system. Natural units (hbar = k = 1) by default.
struct Units {
    double hbar = 1.0;
    double k = 1.0;

    double beta_of_temperature(double temperature) const { return 1.0 / (k * temperature); }
    double temperature_of_beta(double beta) const { return 1.0 / (k * beta); }
};

} // namespace qsm
