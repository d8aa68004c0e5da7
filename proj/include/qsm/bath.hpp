// bath.hpp — ideal heat baths as collision models, thermalization, partial
// thermalization, and thermal-cycle ledgers with the Clausius-sum inequality.
#pragma once

#include "qsm/distribution.hpp"
#include "qsm/interaction.hpp"
#include "qsm/schedule.hpp"
#include "qsm/types.hpp"

#include <cstdint>
#include <variant>
#include <vector>

namespace qsm {

// A stream of fresh canonical ancillas, each contacted once. contact_time has
// no default: the zero-duration limit is Zeno-frozen, so scenario authors must
// choose it explicitly.
struct IdealBath {
    double beta;
    Matrix ancilla_h;
    Matrix coupling; // joint (system ⊗ ancilla) dimension, energy conserving
    double contact_time;
};

// Controlled departures from the ideal assembly; both default to the ideal 0.
struct BathDeviations {
    double reuse_probability = 0.0; // chance the previous ancilla is met again
    double mixing_strength = 0.0;   // pull of a reused ancilla back toward canonical
};

struct CollisionRecord {
    Distribution state;           // system marginal after the collision
    double phi = 0.0;             // G + beta <H>, the contact Lyapunov functional
    double delta_q = 0.0;         // energy into the bath during this collision
    double distance_to_canonical = 0.0;
};

struct CollisionTrace {
    std::vector<CollisionRecord> records; // records[0] is the initial state
    double total_heat_into_bath = 0.0;

    const Distribution& final_state() const { return records.back().state; }
};

// Repeated contacts with fresh canonical ancillas; each collision evolves the
// joint state for bath.contact_time and traces the ancilla out.
CollisionTrace thermalize(const Distribution& rho0, const Matrix& h_sys, const IdealBath& bath,
                          int n_collisions, long steps_per_collision, double hbar = 1.0,
                          const BathDeviations& deviations = {}, std::uint64_t seed = 0);

// Thermalization blocked between state-space regions: each block keeps its
// weight and becomes canonical on the block-restricted Hamiltonian.
Distribution partial_thermalize_blocks(const Distribution& rho, const Matrix& h, double beta,
                                       const ProjectorSet& k);

// Only the contact region thermalizes; the isolated block (coherences included)
// is untouched.
Distribution partial_thermalize_isolated(const Distribution& rho, const Matrix& h, double beta,
                                         const Matrix& k_alpha, const Matrix& k_beta);

// Exchange coupling between two copies of the same spectrum: the off-diagonal
// part of the swap in the product eigenbasis (energy conserving by construction).
Matrix partial_swap_coupling(const Matrix& h, double strength = 1.0);

// --------------------------- thermal cycles ---------------------------------

struct CycleDrive {
    Schedule schedule; // system Hamiltonian path; must start at the current H
    long steps = 100;
};

struct CycleContact {
    double beta;
    Matrix ancilla_h;
    Matrix coupling; // joint dimension, conserving w.r.t. the current system H
    double contact_time;
    long steps = 20;
    int repeats = 1; // number of fresh-ancilla collisions for this contact
};

using CycleStep = std::variant<CycleDrive, CycleContact>;

struct CyclePlan {
    Matrix h0;
    Distribution rho0;
    std::vector<CycleStep> steps;
};

struct CycleLedger {
    std::vector<std::pair<double, double>> contacts; // (beta_i, delta_Q_i into partner)
    double net_work = 0.0;       // sum of delta_Q_i; the cycle work when H is restored
    double closure_error = 0.0;  // trace distance final vs initial system marginal
    bool hamiltonian_restored = false;

    double clausius_sum() const;
};

CycleLedger run_cycle(const CyclePlan& plan, double hbar = 1.0);

struct EngineReport {
    double efficiency = 0.0;   // work extracted / heat drawn from the hot bath
    double carnot_bound = 0.0; // 1 - T_cold / T_hot
    double margin = 0.0;       // carnot_bound - efficiency
    double work_extracted = 0.0;
    double heat_in = 0.0;
};

// Requires exactly two distinct bath temperatures among contacts with nonzero
// heat; rejects idle ledgers (no heat drawn).
EngineReport engine_bounds(const CycleLedger& ledger, double k = 1.0, double q_tol = 1e-12);

} // namespace qsm
