// passivity.hpp — passive rearrangement, ergotropy, explicit extraction
// schedules, N-passivity / complete passivity, and same-temperature criteria.
#pragma once

#include "qsm/distribution.hpp"
#include "qsm/schedule.hpp"
#include "qsm/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qsm {

struct PassiveForm {
    Distribution passive_state;
    Matrix aligning_unitary; // V with V rho V† = passive_state
    double ergotropy = 0.0;  // tr H (rho - passive_state) >= 0
};

// Eigenvalues of rho sorted descending (stable in the solver's index order) are
// assigned to energy eigenstates sorted ascending. The aligning unitary is not
// canonical under degeneracy; the ergotropy and the passive verdict are.
PassiveForm passive_form(const Distribution& rho, const Matrix& h);

double ergotropy(const Distribution& rho, const Matrix& h);

// No cyclic variation of the Hamiltonian can lower the mean energy further.
bool is_passive(const Distribution& rho, const Matrix& h, double tol = 1e-10);

enum class ExtractionMode { paper, piecewise };

// Cyclic schedules that extract the adiabatic availability.
//  - piecewise: H0 held, then the Hermitian generator i hbar ln(V)/tau_hold of
//    the aligning pulse alone, then H0; the pulse propagator is exactly the
//    alignment of the precessed state, so the extracted work equals the
//    ergotropy up to propagator roundoff.
//  - paper: the literal cyclic formula H0 cos(2 pi t / tau) - (2 i hbar / tau)
//    sin^2(pi t / tau) ln V, midpoint-sampled into `paper_samples` constant
//    segments. Achieved work and alignment fidelity are measured, not assumed.
Schedule extraction_schedule(const Distribution& rho, const Matrix& h0, double tau,
                             ExtractionMode mode, long paper_samples = 1000,
                             double hbar = 1.0);

// Work removed from the system by running the schedule: tr H0 (rho - U rho U†).
double extracted_work(const Schedule& schedule, const Distribution& rho, const Matrix& h0,
                      long steps, double hbar = 1.0);

// Diagonal level populations: ascending energies with their probabilities.
struct LevelSystem {
    RealVector energies; // ascending
    RealVector probs;    // sum to 1, each >= 0

    LevelSystem(RealVector energies, RealVector probs);
    int dim() const { return static_cast<int>(energies.size()); }

    Matrix hamiltonian() const;
    Distribution state() const;
    static LevelSystem canonical(RealVector energies, double beta);
};

// A composition pair witnessing an extractable swap on the N-copy system: the
// `higher` multiset has strictly larger total energy and strictly larger
// probability than `lower`.
struct SwapWitness {
    std::vector<long> higher;
    std::vector<long> lower;
    double energy_gap = 0.0; // E(higher) - E(lower) > 0
    double log_prob_gap = 0.0; // ln p(higher) - ln p(lower) > 0
};

struct NPassivityReport {
    bool passive = true;
    std::optional<SwapWitness> witness;
};

// Checks the N-copy passivity condition over all pairs of compositions of N
// into d parts, in log-probability space. Throws numerical_error when the pair
// count exceeds the combinatorial budget (1e7).
NPassivityReport is_n_passive(const LevelSystem& sys, long n, double tol = 1e-12);

struct MinFailingReport {
    std::optional<long> brute_force;      // smallest N <= n_max failing is_n_passive
    std::optional<long> triple_predicted; // smallest N with an integer strictly between l and m
};

// Requires sys passive at N = 1. The two entries must agree for three-level
// systems; tests enforce this.
MinFailingReport min_failing_n(const LevelSystem& sys, long n_max, double tol = 1e-12);

struct CompletePassivityReport {
    bool completely_passive = false;
    double beta = 0.0;    // common gap beta when completely passive
    double spread = 0.0;  // max - min over the gap-beta estimates
    std::string diagnostic;
};

// All energy gaps must share one beta: ln(p_i / p_j) / (E_j - E_i) constant.
CompletePassivityReport is_completely_passive(const LevelSystem& sys, double tol = 1e-9);

// Necessary condition for equal temperature: the uncoupled pair is jointly passive.
bool same_temperature_necessary(const Distribution& rho1, const Matrix& h1,
                                const Distribution& rho2, const Matrix& h2,
                                double tol = 1e-10);

// Multiplicative ratio law Pi(d1 + d2) = Pi(d1) Pi(d2) with Pi(d) = exp(-beta d),
// checked over all pairs from `gaps`.
bool check_ratio_law(double beta, const std::vector<double>& gaps, double tol = 1e-12);

} // namespace qsm
