// protocols.hpp — quasistatic isothermal driving and the three-stage reversible
// protocol identifying entropy differences of arbitrary states.
#pragma once

#include "qsm/distribution.hpp"
#include "qsm/schedule.hpp"
#include "qsm/types.hpp"

namespace qsm {

struct IsothermalResult {
    double work = 0.0;           // mean work performed on the system
    double heat_into_bath = 0.0; // work - delta_mean_h, booked by energy balance
    double ideal_work = 0.0;     // -(1/beta) ln(Z_f / Z_0), the quasistatic limit
    double discretization_error = 0.0; // |work - ideal_work|
    double delta_mean_h = 0.0;
    double delta_g = 0.0;              // G(final canonical) - G(initial canonical)
    double max_state_commutator = 0.0; // max |[rho, H(t)]| along the drive
};

// Discretized quasistatic isothermal process: at each step the Hamiltonian
// advances one increment (work tr(dH rho)), then the state resets to the
// canonical distribution of the new Hamiltonian, with heat booked by energy
// balance. First-order in 1/steps.
IsothermalResult isothermal_drive(const Schedule& h_path, double beta, long steps);

enum class ProtocolMode { direct, schedule };

struct ProtocolResult {
    double total_heat_q = 0.0; // into the bath; booked only during stage (b)
    double temperature = 0.0;
    double entropy_diff_estimate = 0.0;  // -Q / T
    double entropy_diff_reference = 0.0; // -k (sum p' ln p' - sum p ln p)
    double stage_b_commutator_max = 0.0;
    double stage_a_fidelity = 1.0; // schedule mode: overlap with the stage target
    double stage_c_fidelity = 1.0;
};

// Three-stage reversible protocol between (rho, H_i) and (rho_prime, H_f):
//  (a) isolated rotation of rho's eigenbasis onto a reference basis, where the
//      state is canonical for H1 = sum -kT ln(p_n) |n><n|;
//  (b) isothermal quasistatic drive H1 -> H2 at temperature T (all heat here);
//  (c) isolated rotation onto rho_prime's eigenbasis.
// `direct` applies stages (a)/(c) as exact target unitaries; `schedule`
// integrates the explicit cyclic Hamiltonians for those stages and reports the
// achieved fidelity. Both states need full support.
ProtocolResult entropy_protocol(const Distribution& rho, const Matrix& h_i,
                                const Distribution& rho_prime, const Matrix& h_f,
                                double temperature, long steps,
                                ProtocolMode mode = ProtocolMode::direct,
                                const Units& units = {}, long stage_ac_steps = 2000,
                                double stage_ac_tau = 1.0);

// S(rho') - S(rho), spectral and basis independent.
double entropy_difference_reference(const Distribution& rho, const Distribution& rho_prime,
                                    double k = 1.0);

} // namespace qsm
