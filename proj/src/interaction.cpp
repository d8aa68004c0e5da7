#include "qsm/interaction.hpp"

#include "qsm/canonical.hpp"
#include "qsm/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qsm {

Trajectory evolve_joint(const Matrix& h1, const Matrix& h2, const Schedule& v_schedule,
                        const Distribution& rho0, long steps, double hbar) {
    require_hermitian(h1, default_tolerances().hermiticity, "evolve_joint h1");
    require_hermitian(h2, default_tolerances().hermiticity, "evolve_joint h2");
    v_schedule.validate();
    if (steps < 1) throw validation_error("evolve_joint: steps must be >= 1");
    const int d1 = static_cast<int>(h1.rows());
    const int d2 = static_cast<int>(h2.rows());
    const int d = d1 * d2;
    if (v_schedule.dim() != d || rho0.dim() != d) {
        throw validation_error("evolve_joint: coupling/state dimension does not match d1*d2");
    }

    const Matrix h1_ext = tensor(h1, Matrix::Identity(d2, d2));
    const Matrix h2_ext = tensor(Matrix::Identity(d1, d1), h2);
    const double total = v_schedule.total_duration();
    const double dt = total / static_cast<double>(steps);

    Trajectory traj;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    traj.times.push_back(0.0);
    traj.states.push_back(rho0);

    Matrix rho = rho0.matrix();
    const Matrix v0 = v_schedule.generator_at(0.0);
    const double v_expect_0 = real_expectation(v0, rho);
    const double h1_0 = real_expectation(h1_ext, rho);
    const double h2_0 = real_expectation(h2_ext, rho);

    double q1 = 0.0, q2 = 0.0, d_v = 0.0;
    for (long k = 0; k < steps; ++k) {
        const double t_mid = (static_cast<double>(k) + 0.5) * dt;
        const Matrix v_mid = v_schedule.generator_at(t_mid);
        const Matrix h_mid = h1_ext + h2_ext + v_mid;
        const Matrix u_half = hermitian_propagator(h_mid, 0.5 * dt, hbar);

        const Matrix rho_mid = u_half * rho * u_half.adjoint();
        rho = u_half * rho_mid * u_half.adjoint();

        // <[A, V]> is i * real for Hermitian A, V; dividing by i hbar gives the
        // real flow rate.
        const Complex c1 = (commutator(h1_ext, v_mid) * rho_mid).trace();
        const Complex c2 = (commutator(h2_ext, v_mid) * rho_mid).trace();
        q1 += dt * (c1 / Complex(0.0, hbar)).real();
        q2 += dt * (c2 / Complex(0.0, hbar)).real();

        // Work through the coupling's explicit time dependence.
        d_v += dt * real_expectation(v_schedule.derivative_at(t_mid), rho_mid);

        traj.times.push_back((static_cast<double>(k) + 1.0) * dt);
        traj.states.push_back(Distribution(rho));
    }

    EnergyLedger& ledger = traj.ledger;
    const Matrix v_end = v_schedule.generator_at(total);
    ledger.delta_h1 = real_expectation(h1_ext, rho) - h1_0;
    ledger.delta_h2 = real_expectation(h2_ext, rho) - h2_0;
    ledger.delta_v = real_expectation(v_end, rho) - v_expect_0;
    ledger.work_d_h1 = 0.0;
    ledger.work_d_h2 = 0.0;
    ledger.work_d_v = d_v;
    ledger.heat_q1 = q1;
    ledger.heat_q2 = q2;
    const double closure = ledger.delta_h1 + ledger.delta_h2 + ledger.delta_v - d_v;
    ledger.residual = std::max({std::abs(ledger.delta_h1 - ledger.work_d_h1 - q1),
                                std::abs(ledger.delta_h2 - ledger.work_d_h2 - q2),
                                std::abs(closure)});
    return traj;
}

std::optional<Matrix> energy_conserving_coupling(const Matrix& h1, const Matrix& h2,
                                                 std::uint64_t seed, double degeneracy_tol) {
    const Spectrum s1 = hermitian_eig(h1);
    const Spectrum s2 = hermitian_eig(h2);
    const int d1 = s1.dim();
    const int d2 = s2.dim();
    const int d = d1 * d2;

    // Product eigenbasis of H1 ⊗ I + I ⊗ H2 and its total energies.
    std::vector<double> total_energy(d);
    for (int i = 0; i < d1; ++i) {
        for (int j = 0; j < d2; ++j) total_energy[i * d2 + j] = s1.values[i] + s2.values[j];
    }
    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return total_energy[a] < total_energy[b]; });

    // Group indices whose total energies agree within tolerance.
    std::vector<int> group_of(d, -1);
    int n_groups = 0;
    bool any_pair = false;
    for (int idx = 0; idx < d; ++idx) {
        if (idx > 0 && total_energy[order[idx]] - total_energy[order[idx - 1]] <= degeneracy_tol) {
            group_of[order[idx]] = group_of[order[idx - 1]];
            any_pair = true;
        } else {
            group_of[order[idx]] = n_groups++;
        }
    }
    if (!any_pair) return std::nullopt; // commutant is diagonal; no energy can move

    Rng rng(seed);
    const Matrix raw = random_hermitian(rng, d);
    Matrix block = Matrix::Zero(d, d);
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            if (r != c && group_of[r] == group_of[c]) block(r, c) = raw(r, c);
        }
    }
    block = 0.5 * (block + block.adjoint());

    const Matrix u_prod = tensor(s1.basis, s2.basis);
    Matrix v = u_prod * block * u_prod.adjoint();
    const double peak = max_abs(v);
    if (peak > 0.0) v /= peak;
    return v;
}

ContactRecord contact_experiment(double beta1, const Matrix& h1, double beta2, const Matrix& h2,
                                 const Matrix& v, double tau, long steps, double hbar) {
    const int d1 = static_cast<int>(h1.rows());
    const int d2 = static_cast<int>(h2.rows());
    const Matrix h_free = tensor(h1, Matrix::Identity(d2, d2))
                        + tensor(Matrix::Identity(d1, d1), h2);
    const double defect = max_abs(commutator(v, h_free));
    if (defect > default_tolerances().conserving) {
        std::ostringstream msg;
        msg << "contact_experiment: coupling does not conserve the free energy operator, "
            << "|[V, H1 + H2]| = " << defect;
        throw validation_error(msg.str());
    }

    const Distribution rho0(tensor(canonical_state(h1, beta1).matrix(),
                                   canonical_state(h2, beta2).matrix()));
    const Trajectory traj =
        evolve_joint(h1, h2, Schedule::constant(v, tau), rho0, steps, hbar);

    ContactRecord rec;
    rec.ledger = traj.ledger;
    rec.delta_h1 = traj.ledger.delta_h1;
    rec.delta_h2 = traj.ledger.delta_h2;
    rec.temptheorem_lhs = rec.delta_h1 * (beta1 - beta2);

    const std::vector<int> dims{d1, d2};
    const Distribution m2_before = marginal(rho0, dims, 1);
    const Distribution m2_after = marginal(traj.states.back(), dims, 1);
    rec.phi2_before = gibbs_measure(m2_before) + beta1 * real_expectation(h2, m2_before);
    rec.phi2_after = gibbs_measure(m2_after) + beta1 * real_expectation(h2, m2_after);
    return rec;
}

} // namespace qsm
