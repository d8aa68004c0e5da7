// random.hpp — seeded generators for states, Hamiltonians and unitaries.
// Every random quantity in the project flows from one master seed; per-trial
// streams are derived with a splitmix hash so parallel trial order cannot
// change the draws.
#pragma once

#include "qsm/distribution.hpp"
#include "qsm/types.hpp"

#include <cstdint>
#include <random>

namespace qsm {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return uniform_(engine_); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal() { return normal_(engine_); }
    long uniform_int(long lo, long hi) { // inclusive bounds
        return std::uniform_int_distribution<long>(lo, hi)(engine_);
    }

private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

// GUE-style Hermitian matrix with entries of the given scale.
Matrix random_hermitian(Rng& rng, int dim, double scale = 1.0);

// Haar-ish unitary: QR of a complex Ginibre matrix with phase-fixed R diagonal.
Matrix random_unitary(Rng& rng, int dim);

// Full-rank density matrix G G† / tr(G G†) from a complex Ginibre G.
Distribution random_distribution(Rng& rng, int dim);

Vector random_pure_vector(Rng& rng, int dim);

// Strictly decreasing probabilities (normalized) for a passive level occupation.
RealVector random_descending_probs(Rng& rng, int dim);

// Strictly increasing energies in [0, span].
RealVector random_ascending_energies(Rng& rng, int dim, double span = 4.0);

} // namespace qsm
