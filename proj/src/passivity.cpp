#include "qsm/passivity.hpp"

#include "qsm/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

namespace qsm {

PassiveForm passive_form(const Distribution& rho, const Matrix& h) {
    if (rho.dim() != h.rows()) throw validation_error("passive_form: dimension mismatch");
    const Spectrum hs = hermitian_eig(h); // ascending energies
    const Spectrum& rs = rho.spectrum();  // ascending probabilities

    const int d = rho.dim();
    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    // Descending probabilities; stable so exact ties keep the solver's index order.
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return rs.values[a] > rs.values[b]; });

    RealVector passive_probs(d);
    Matrix aligning = Matrix::Zero(d, d);
    for (int j = 0; j < d; ++j) {
        passive_probs[j] = rs.values[order[j]];
        aligning += hs.basis.col(j) * rs.basis.col(order[j]).adjoint();
    }

    PassiveForm out{Distribution::from_probabilities(passive_probs, hs.basis), aligning, 0.0};
    out.ergotropy = real_expectation(h, rho) - real_expectation(h, out.passive_state);
    return out;
}

double ergotropy(const Distribution& rho, const Matrix& h) {
    return passive_form(rho, h).ergotropy;
}

bool is_passive(const Distribution& rho, const Matrix& h, double tol) {
    const double scale = std::max(1.0, max_abs(h));
    return ergotropy(rho, h) <= tol * scale;
}

Schedule extraction_schedule(const Distribution& rho, const Matrix& h0, double tau,
                             ExtractionMode mode, long paper_samples, double hbar) {
    if (!(tau > 0.0)) throw validation_error("extraction_schedule: tau must be positive");
    const PassiveForm form = passive_form(rho, h0);
    const Matrix& v = form.aligning_unitary;

    if (mode == ExtractionMode::piecewise) {
        const double t_hold = 0.25 * tau;
        const double t_pulse = 0.5 * tau;
        // The state precesses under H0 during the first hold; align the precessed
        // state, so the pulse lands exactly on the passive state (which then
        // commutes with H0 through the final hold).
        const Matrix r = hermitian_propagator(h0, t_hold, hbar);
        const Matrix v_rot = v * r.adjoint();
        const Matrix gen = Complex(0.0, hbar / t_pulse) * unitary_log(v_rot);
        Schedule s = Schedule::constant(h0, t_hold);
        s.hold(0.5 * (gen + gen.adjoint()), t_pulse);
        s.hold(h0, t_hold);
        return s;
    }

    if (paper_samples < 1) throw validation_error("extraction_schedule: paper_samples must be >= 1");
    const Matrix log_v = unitary_log(v);
    Schedule s;
    const double dt = tau / static_cast<double>(paper_samples);
    for (long k = 0; k < paper_samples; ++k) {
        const double t = (static_cast<double>(k) + 0.5) * dt;
        const double sin2 = std::pow(std::sin(M_PI * t / tau), 2);
        Matrix gen = h0 * std::cos(2.0 * M_PI * t / tau)
                   + Complex(0.0, -2.0 * hbar / tau) * sin2 * log_v;
        s.hold(0.5 * (gen + gen.adjoint()), dt);
    }
    return s;
}

double extracted_work(const Schedule& schedule, const Distribution& rho, const Matrix& h0,
                      long steps, double hbar) {
    const Matrix u = propagate(schedule, steps, hbar);
    const Matrix evolved = u * rho.matrix() * u.adjoint();
    return real_expectation(h0, rho) - real_expectation(h0, evolved);
}

LevelSystem::LevelSystem(RealVector e, RealVector p) : energies(std::move(e)), probs(std::move(p)) {
    if (energies.size() != probs.size() || energies.size() == 0) {
        throw validation_error("LevelSystem: energies and probs must have equal nonzero length");
    }
    for (Eigen::Index i = 1; i < energies.size(); ++i) {
        if (energies[i] < energies[i - 1]) throw validation_error("LevelSystem: energies must ascend");
    }
    double total = 0.0;
    for (Eigen::Index i = 0; i < probs.size(); ++i) {
        if (probs[i] < 0.0) throw validation_error("LevelSystem: negative probability");
        total += probs[i];
    }
    if (std::abs(total - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "LevelSystem: probabilities sum to " << total << ", not 1 within 1e-12";
        throw validation_error(msg.str());
    }
}

Matrix LevelSystem::hamiltonian() const {
    return energies.cast<Complex>().asDiagonal();
}

Distribution LevelSystem::state() const {
    return Distribution::from_probabilities(probs, Matrix::Identity(dim(), dim()));
}

LevelSystem LevelSystem::canonical(RealVector energies, double beta) {
    const double e0 = energies.minCoeff();
    RealVector p(energies.size());
    for (Eigen::Index i = 0; i < energies.size(); ++i) p[i] = std::exp(-beta * (energies[i] - e0));
    p /= p.sum();
    return LevelSystem(std::move(energies), std::move(p));
}

namespace {

// All compositions of n into d non-negative parts, lexicographic.
std::vector<std::vector<long>> compositions(long n, int d) {
    std::vector<std::vector<long>> out;
    std::vector<long> current(d, 0);
    std::function<void(int, long)> rec = [&](int slot, long remaining) {
        if (slot == d - 1) {
            current[slot] = remaining;
            out.push_back(current);
            return;
        }
        for (long v = 0; v <= remaining; ++v) {
            current[slot] = v;
            rec(slot + 1, remaining - v);
        }
    };
    rec(0, n);
    return out;
}

double binomial(long n, long k) {
    double r = 1.0;
    for (long i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

} // namespace

NPassivityReport is_n_passive(const LevelSystem& sys, long n, double tol) {
    if (n < 1) throw validation_error("is_n_passive: N must be >= 1");
    const int d = sys.dim();
    const double count = binomial(n + d - 1, d - 1);
    if (count * count > 1e7) {
        std::ostringstream msg;
        msg << "is_n_passive: " << count << "^2 composition pairs exceed the 1e7 budget";
        throw numerical_error(msg.str());
    }

    const auto comps = compositions(n, d);
    const std::size_t m = comps.size();
    std::vector<double> energy(m), log_prob(m);
    for (std::size_t i = 0; i < m; ++i) {
        double e = 0.0, lp = 0.0;
        for (int level = 0; level < d; ++level) {
            const long a = comps[i][level];
            if (a == 0) continue;
            e += static_cast<double>(a) * sys.energies[level];
            // ln 0 = -inf: a multiset touching a zero-probability level can never
            // have *strictly larger* probability than another, so -inf ordering
            // falls out of the strict comparisons below.
            lp += (sys.probs[level] > 0.0) ? static_cast<double>(a) * std::log(sys.probs[level])
                                           : -std::numeric_limits<double>::infinity();
        }
        energy[i] = e;
        log_prob[i] = lp;
    }

    // Work is extractable on the N-copy system exactly when some configuration
    // has strictly higher energy and strictly higher probability than another;
    // ties (within tol) in either coordinate extract nothing.
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            if (energy[a] > energy[b] + tol && log_prob[a] > log_prob[b] + tol) {
                NPassivityReport report;
                report.passive = false;
                report.witness = SwapWitness{comps[a], comps[b], energy[a] - energy[b],
                                             log_prob[a] - log_prob[b]};
                return report;
            }
        }
    }
    return NPassivityReport{};
}

MinFailingReport min_failing_n(const LevelSystem& sys, long n_max, double tol) {
    if (!is_n_passive(sys, 1, tol).passive) {
        throw validation_error("min_failing_n: system is not passive at N = 1");
    }
    MinFailingReport report;
    for (long n = 2; n <= n_max; ++n) {
        if (!is_n_passive(sys, n, tol).passive) {
            report.brute_force = n;
            break;
        }
    }

    // Triple criterion: for levels E_i < E_j < E_k define
    //   l = N (E_j - E_i) / (E_k - E_i),  m = N (ln p_i - ln p_j) / (ln p_i - ln p_k).
    // An integer strictly between l and m yields a violating swap at that N.
    const int d = sys.dim();
    std::optional<long> predicted;
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            for (int k = j + 1; k < d; ++k) {
                const double de = sys.energies[k] - sys.energies[i];
                if (de <= tol) continue;
                if (!(sys.probs[i] > 0.0 && sys.probs[j] > 0.0 && sys.probs[k] > 0.0)) continue;
                const double dlp = std::log(sys.probs[i]) - std::log(sys.probs[k]);
                if (dlp <= tol) continue;
                const double rl = (sys.energies[j] - sys.energies[i]) / de;
                const double rm = (std::log(sys.probs[i]) - std::log(sys.probs[j])) / dlp;
                for (long n = 2; n <= n_max && (!predicted || n < *predicted); ++n) {
                    const double lo = std::min(rl, rm) * static_cast<double>(n);
                    const double hi = std::max(rl, rm) * static_cast<double>(n);
                    const double first_integer = std::floor(lo) + 1.0;
                    if (first_integer > lo + tol && first_integer < hi - tol &&
                        first_integer >= 1.0 && first_integer <= static_cast<double>(n) - 1.0) {
                        predicted = n;
                        break;
                    }
                }
            }
        }
    }
    report.triple_predicted = predicted;
    return report;
}

CompletePassivityReport is_completely_passive(const LevelSystem& sys, double tol) {
    CompletePassivityReport report;
    const int d = sys.dim();
    for (int i = 0; i < d; ++i) {
        if (!(sys.probs[i] > 0.0)) throw validation_error("is_completely_passive: all p_i must be > 0");
    }
    if (d == 1) {
        report.completely_passive = true;
        return report;
    }
    const double e_scale = std::max(1.0, sys.energies.cwiseAbs().maxCoeff());

    double beta_min = std::numeric_limits<double>::infinity();
    double beta_max = -std::numeric_limits<double>::infinity();
    bool any_gap = false;
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            const double de = sys.energies[j] - sys.energies[i];
            const double dlp = std::log(sys.probs[i] / sys.probs[j]);
            if (de <= 1e-12 * e_scale) {
                if (std::abs(dlp) > tol) {
                    std::ostringstream msg;
                    msg << "levels " << i << " and " << j << " share energy " << sys.energies[i]
                        << " but carry unequal probabilities";
                    report.diagnostic = msg.str();
                    report.completely_passive = false;
                    return report;
                }
                continue;
            }
            const double beta_ij = dlp / de;
            beta_min = std::min(beta_min, beta_ij);
            beta_max = std::max(beta_max, beta_ij);
            any_gap = true;
        }
    }
    if (!any_gap) {
        // Fully degenerate spectrum with uniform probabilities: canonical at any beta.
        report.completely_passive = true;
        return report;
    }
    report.spread = beta_max - beta_min;
    report.completely_passive = report.spread <= tol;
    if (report.completely_passive) report.beta = 0.5 * (beta_min + beta_max);
    return report;
}

bool same_temperature_necessary(const Distribution& rho1, const Matrix& h1,
                                const Distribution& rho2, const Matrix& h2,
                                double tol) {
    const Matrix joint_h = tensor(h1, Matrix::Identity(h2.rows(), h2.cols()))
                         + tensor(Matrix::Identity(h1.rows(), h1.cols()), h2);
    const Distribution joint(tensor(rho1.matrix(), rho2.matrix()));
    return is_passive(joint, joint_h, tol);
}

bool check_ratio_law(double beta, const std::vector<double>& gaps, double tol) {
    if (!(beta > 0.0)) throw validation_error("check_ratio_law: beta must be positive");
    auto pi = [&](double gap) { return std::exp(-beta * gap); };
    for (double a : gaps) {
        for (double b : gaps) {
            const double lhs = pi(a + b);
            const double rhs = pi(a) * pi(b);
            if (std::abs(lhs - rhs) > tol * std::max(1.0, std::abs(lhs))) return false;
        }
    }
    return true;
}

} // namespace qsm
