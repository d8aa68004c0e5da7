#include "qsm/bath.hpp"

#include "qsm/canonical.hpp"
#include "qsm/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace qsm {

namespace {

void require_conserving(const Matrix& v, const Matrix& h_sys, const Matrix& h_anc,
                        const char* who) {
    const int ds = static_cast<int>(h_sys.rows());
    const int da = static_cast<int>(h_anc.rows());
    if (v.rows() != static_cast<Eigen::Index>(ds) * da) {
        throw validation_error(std::string(who) + ": coupling dimension does not match system ⊗ ancilla");
    }
    const Matrix h_free = tensor(h_sys, Matrix::Identity(da, da))
                        + tensor(Matrix::Identity(ds, ds), h_anc);
    const double defect = max_abs(commutator(v, h_free));
    if (defect > default_tolerances().conserving) {
        std::ostringstream msg;
        msg << who << ": coupling is not energy conserving, |[V, H_sys + H_anc]| = " << defect;
        throw validation_error(msg.str());
    }
}

// One collision: evolve system ⊗ ancilla under the constant coupling, return
// the new system marginal and the energy that moved into the ancilla.
struct CollisionOutcome {
    Distribution system;
    Distribution ancilla;
    double heat_into_ancilla;
};

CollisionOutcome collide(const Distribution& sys, const Distribution& anc, const Matrix& h_sys,
                         const Matrix& h_anc, const Matrix& v, double contact_time, long steps,
                         double hbar) {
    const Distribution joint(tensor(sys.matrix(), anc.matrix()));
    const Trajectory traj =
        evolve_joint(h_sys, h_anc, Schedule::constant(v, contact_time), joint, steps, hbar);
    const std::vector<int> dims{sys.dim(), anc.dim()};
    Distribution sys_after = marginal(traj.states.back(), dims, 0);
    Distribution anc_after = marginal(traj.states.back(), dims, 1);
    const double q = real_expectation(h_anc, anc_after) - real_expectation(h_anc, anc);
    return CollisionOutcome{std::move(sys_after), std::move(anc_after), q};
}

} // namespace

CollisionTrace thermalize(const Distribution& rho0, const Matrix& h_sys, const IdealBath& bath,
                          int n_collisions, long steps_per_collision, double hbar,
                          const BathDeviations& deviations, std::uint64_t seed) {
    if (!(bath.contact_time > 0.0)) {
        throw validation_error("thermalize: contact_time must be positive (Zeno limit excluded)");
    }
    if (n_collisions < 0) throw validation_error("thermalize: negative collision count");
    require_conserving(bath.coupling, h_sys, bath.ancilla_h, "thermalize");

    const Distribution fresh = canonical_state(bath.ancilla_h, bath.beta);
    const Distribution target = canonical_state(h_sys, bath.beta);

    auto phi_of = [&](const Distribution& s) {
        return gibbs_measure(s) + bath.beta * real_expectation(h_sys, s);
    };

    CollisionTrace trace;
    trace.records.push_back(
        {rho0, phi_of(rho0), 0.0, trace_distance(rho0, target)});

    Rng rng(seed);
    Distribution sys = rho0;
    std::optional<Distribution> leftover; // previous ancilla, for the reuse knob
    for (int c = 0; c < n_collisions; ++c) {
        Distribution anc = fresh;
        if (leftover && deviations.reuse_probability > 0.0 &&
            rng.uniform() < deviations.reuse_probability) {
            anc = *leftover;
        }
        CollisionOutcome outcome = collide(sys, anc, h_sys, bath.ancilla_h, bath.coupling,
                                           bath.contact_time, steps_per_collision, hbar);
        sys = std::move(outcome.system);
        trace.total_heat_into_bath += outcome.heat_into_ancilla;
        trace.records.push_back(
            {sys, phi_of(sys), outcome.heat_into_ancilla, trace_distance(sys, target)});

        if (deviations.mixing_strength > 0.0) {
            const double m = std::clamp(deviations.mixing_strength, 0.0, 1.0);
            leftover = Distribution((1.0 - m) * outcome.ancilla.matrix() + m * fresh.matrix());
        } else {
            leftover = std::move(outcome.ancilla);
        }
    }
    return trace;
}

namespace {

// Orthonormal basis for the range of a projector (eigenvectors with eigenvalue ~1).
Matrix range_basis(const Matrix& k) {
    const Spectrum s = hermitian_eig(k);
    int rank = 0;
    for (Eigen::Index i = 0; i < s.values.size(); ++i) {
        if (s.values[i] > 0.5) ++rank;
    }
    Matrix basis(k.rows(), rank);
    int col = 0;
    for (Eigen::Index i = 0; i < s.values.size(); ++i) {
        if (s.values[i] > 0.5) basis.col(col++) = s.basis.col(i);
    }
    return basis;
}

// Canonical state of the block-restricted Hamiltonian, embedded in the full space.
Matrix block_canonical(const Matrix& h, const Matrix& k, double beta) {
    const Matrix basis = range_basis(k);
    if (basis.cols() == 0) throw validation_error("partial_thermalize: projector has empty range");
    const Matrix h_block = basis.adjoint() * h * basis;
    const Matrix rho_block = canonical_state(0.5 * (h_block + h_block.adjoint()), beta).matrix();
    return basis * rho_block * basis.adjoint();
}

} // namespace

Distribution partial_thermalize_blocks(const Distribution& rho, const Matrix& h, double beta,
                                       const ProjectorSet& k) {
    if (k.dim() != rho.dim() || h.rows() != rho.dim()) {
        throw validation_error("partial_thermalize_blocks: dimension mismatch");
    }
    Matrix out = Matrix::Zero(rho.dim(), rho.dim());
    for (const Matrix& proj : k.projectors) {
        const double w = (proj * rho.matrix() * proj).trace().real();
        if (w <= 1e-15) continue;
        out += w * block_canonical(h, proj, beta);
    }
    return Distribution(out);
}

Distribution partial_thermalize_isolated(const Distribution& rho, const Matrix& h, double beta,
                                         const Matrix& k_alpha, const Matrix& k_beta) {
    ProjectorSet pair({k_alpha, k_beta}); // validates the two-element decomposition
    if (pair.dim() != rho.dim()) {
        throw validation_error("partial_thermalize_isolated: dimension mismatch");
    }
    Matrix out = k_alpha * rho.matrix() * k_alpha;
    const double w = (k_beta * rho.matrix() * k_beta).trace().real();
    if (w > 1e-15) out += w * block_canonical(h, k_beta, beta);
    return Distribution(out);
}

Matrix partial_swap_coupling(const Matrix& h, double strength) {
    const Spectrum s = hermitian_eig(h);
    const int d = s.dim();
    Matrix swap_offdiag = Matrix::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            if (i != j) swap_offdiag(i * d + j, j * d + i) = 1.0;
        }
    }
    const Matrix u_prod = tensor(s.basis, s.basis);
    return strength * (u_prod * swap_offdiag * u_prod.adjoint());
}

double CycleLedger::clausius_sum() const {
    double sum = 0.0;
    for (const auto& [beta, dq] : contacts) sum += beta * dq;
    return sum;
}

CycleLedger run_cycle(const CyclePlan& plan, double hbar) {
    require_hermitian(plan.h0, default_tolerances().hermiticity, "run_cycle h0");
    if (plan.rho0.dim() != plan.h0.rows()) throw validation_error("run_cycle: state/H dimension mismatch");

    Matrix h_current = plan.h0;
    Distribution sys = plan.rho0;
    CycleLedger ledger;

    for (std::size_t idx = 0; idx < plan.steps.size(); ++idx) {
        const CycleStep& step = plan.steps[idx];
        if (std::holds_alternative<CycleDrive>(step)) {
            const CycleDrive& drive = std::get<CycleDrive>(step);
            drive.schedule.validate();
            if (drive.schedule.dim() != sys.dim()) {
                throw validation_error("run_cycle: drive dimension mismatch");
            }
            if (max_abs(drive.schedule.initial_generator() - h_current) > 1e-9) {
                std::ostringstream msg;
                msg << "run_cycle: drive " << idx
                    << " does not start at the current system Hamiltonian";
                throw validation_error(msg.str());
            }
            const Matrix u = propagate(drive.schedule, drive.steps, hbar);
            sys = Distribution(u * sys.matrix() * u.adjoint());
            h_current = drive.schedule.final_generator();
        } else {
            const CycleContact& contact = std::get<CycleContact>(step);
            if (!(contact.contact_time > 0.0)) {
                throw validation_error("run_cycle: contact_time must be positive");
            }
            require_conserving(contact.coupling, h_current, contact.ancilla_h, "run_cycle");
            const Distribution fresh = canonical_state(contact.ancilla_h, contact.beta);
            double dq = 0.0;
            for (int r = 0; r < contact.repeats; ++r) {
                CollisionOutcome outcome =
                    collide(sys, fresh, h_current, contact.ancilla_h, contact.coupling,
                            contact.contact_time, contact.steps, hbar);
                sys = std::move(outcome.system);
                dq += outcome.heat_into_ancilla;
            }
            ledger.contacts.emplace_back(contact.beta, dq);
        }
    }

    ledger.net_work = 0.0;
    for (const auto& [beta, dq] : ledger.contacts) ledger.net_work += dq;
    ledger.closure_error = trace_distance(sys, plan.rho0);
    ledger.hamiltonian_restored = max_abs(h_current - plan.h0) <= 1e-9;
    return ledger;
}

EngineReport engine_bounds(const CycleLedger& ledger, double k, double q_tol) {
    std::map<double, double> heat_by_beta;
    for (const auto& [beta, dq] : ledger.contacts) {
        if (std::abs(dq) > q_tol) heat_by_beta[beta] += dq;
    }
    if (heat_by_beta.empty()) {
        throw validation_error("engine_bounds: idle ledger, no heat was exchanged");
    }
    if (heat_by_beta.size() != 2) {
        std::ostringstream msg;
        msg << "engine_bounds: expected exactly two bath temperatures with nonzero heat, found "
            << heat_by_beta.size();
        throw validation_error(msg.str());
    }
    const double beta_hot = heat_by_beta.begin()->first;   // smaller beta = hotter
    const double beta_cold = heat_by_beta.rbegin()->first;

    EngineReport report;
    report.heat_in = -heat_by_beta.at(beta_hot); // energy drawn from the hot bath
    report.work_extracted = -ledger.net_work;
    if (!(std::abs(report.heat_in) > q_tol)) {
        throw validation_error("engine_bounds: no heat drawn from the hot bath");
    }
    report.efficiency = report.work_extracted / report.heat_in;
    const double t_hot = 1.0 / (k * beta_hot);
    const double t_cold = 1.0 / (k * beta_cold);
    report.carnot_bound = 1.0 - t_cold / t_hot;
    report.margin = report.carnot_bound - report.efficiency;
    return report;
}

} // namespace qsm
