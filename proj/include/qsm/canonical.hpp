// canonical.hpp — canonical distributions, partition functions, beta <-> energy.
#pragma once

#include "qsm/distribution.hpp"
#include "qsm/types.hpp"

namespace qsm {

struct CanonicalSpec {
    Matrix hamiltonian;
    double beta = 0.0;
    double z = 0.0; // tr exp(-beta H)
};

// ln tr exp(-beta H), evaluated with a max-shift so only the spread matters.
double log_partition_function(const Matrix& h, double beta);

// tr exp(-beta H). Rejects beta <= 0 and beta * spectral spread > 700.
double partition_function(const Matrix& h, double beta);

// exp(-beta H) / Z, computed spectrally with a min-eigenvalue shift.
Distribution canonical_state(const Matrix& h, double beta,
                             const Tolerances& tols = default_tolerances());

CanonicalSpec make_canonical_spec(const Matrix& h, double beta);

// <H> under the canonical state at beta; strictly decreasing in beta.
double canonical_mean_energy(const Matrix& h, double beta);

// Inverts beta -> <H>_beta by bisection (relative tolerance 1e-10 on beta).
// E must lie strictly between the ground energy and the beta -> 0 mean tr(H)/d.
double beta_for_energy(const Matrix& h, double energy);

} // namespace qsm
