// schedule.hpp — piecewise time-dependent Hamiltonians and the midpoint
// product integrator for the time-ordered propagator.
#pragma once

#include "qsm/linalg.hpp"
#include "qsm/types.hpp"

#include <optional>
#include <vector>

namespace qsm {

// One segment: a constant generator, or a linear ramp between two endpoints.
struct Segment {
    double duration = 0.0;
    Matrix start;
    std::optional<Matrix> end; // linear interpolation start -> end when present

    bool constant() const { return !end.has_value(); }
    // Generator at fraction s in [0, 1] of the segment.
    Matrix at(double s) const;
};

struct Schedule {
    std::vector<Segment> segments;

    static Schedule constant(Matrix h, double duration);
    static Schedule ramp(Matrix from, Matrix to, double duration);

    Schedule& hold(Matrix h, double duration);
    Schedule& ramp_to(Matrix to, double duration); // from the previous segment's endpoint

    int dim() const;
    double total_duration() const;
    Matrix generator_at(double t) const;  // clamped to [0, total_duration]
    Matrix derivative_at(double t) const; // exact in-segment dH/dt
    Matrix initial_generator() const { return segments.front().at(0.0); }
    Matrix final_generator() const { return segments.back().at(1.0); }

    void validate() const; // positive durations, one shared dimension, Hermitian generators
};

// Ordered product of exp(-i H(t_mid) dt / hbar) over uniform substeps (midpoint
// rule), with at least one substep per segment. Constant segments are taken in a
// single exact spectral exponential.
Matrix propagate(const Schedule& schedule, long steps, double hbar = 1.0);

} // namespace qsm
