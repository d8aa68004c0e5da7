// interaction.hpp — coupled two-system evolution under H1 ⊗ I + I ⊗ H2 + V12
// with full work/heat bookkeeping.
#pragma once

#include "qsm/distribution.hpp"
#include "qsm/schedule.hpp"
#include "qsm/types.hpp"

#include <cstdint>
#include <optional>

namespace qsm {

// Integrated bookkeeping for one run. Heat is the commutator-with-V energy flow
// integrated on the propagator's midpoint grid; delta terms are endpoint
// differences, so delta_H = work_D + heat_Q closes as the grid refines.
struct EnergyLedger {
    double delta_h1 = 0.0, delta_h2 = 0.0, delta_v = 0.0;
    double work_d_h1 = 0.0, work_d_h2 = 0.0, work_d_v = 0.0;
    double heat_q1 = 0.0, heat_q2 = 0.0;
    double residual = 0.0; // worst bookkeeping identity violation
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Distribution> states; // joint states on the step grid
    EnergyLedger ledger;
    std::vector<double> lyapunov; // optional; empty unless a caller fills it
};

// Integrates the joint evolution and the heat quadrature on one midpoint grid.
// h1 and h2 are constant; the coupling follows v_schedule.
Trajectory evolve_joint(const Matrix& h1, const Matrix& h2, const Schedule& v_schedule,
                        const Distribution& rho0, long steps, double hbar = 1.0);

// Random Hermitian coupling projected onto the commutant of H1 ⊗ I + I ⊗ H2:
// matrix elements between total-energy eigenspaces separated by more than
// degeneracy_tol are zeroed, as are product-basis diagonal entries (so product
// states give <V> = 0). Returns nullopt when no degenerate total-energy pair
// exists, so the caller can resize spectra.
std::optional<Matrix> energy_conserving_coupling(const Matrix& h1, const Matrix& h2,
                                                 std::uint64_t seed,
                                                 double degeneracy_tol = 1e-9);

struct ContactRecord {
    double delta_h1 = 0.0;
    double delta_h2 = 0.0;
    double temptheorem_lhs = 0.0; // delta_H1 (beta1 - beta2)
    double phi2_before = 0.0;     // G(rho2) + beta1 <H2>, the contact Lyapunov functional
    double phi2_after = 0.0;
    EnergyLedger ledger;
};

// Finite-duration contact between two canonical states through an
// energy-conserving coupling. Rejects couplings with |[V, H1 + H2]| beyond
// tolerance, since the flow theorems assume exact mean-energy conservation.
ContactRecord contact_experiment(double beta1, const Matrix& h1, double beta2, const Matrix& h2,
                                 const Matrix& v, double tau, long steps, double hbar = 1.0);

} // namespace qsm
