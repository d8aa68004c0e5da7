#include "qsm/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qsm {

Matrix Segment::at(double s) const {
    if (constant()) return start;
    return (1.0 - s) * start + s * (*end);
}

Schedule Schedule::constant(Matrix h, double duration) {
    Schedule s;
    s.segments.push_back({duration, std::move(h), std::nullopt});
    return s;
}

Schedule Schedule::ramp(Matrix from, Matrix to, double duration) {
    Schedule s;
    s.segments.push_back({duration, std::move(from), std::move(to)});
    return s;
}

Schedule& Schedule::hold(Matrix h, double duration) {
    segments.push_back({duration, std::move(h), std::nullopt});
    return *this;
}

Schedule& Schedule::ramp_to(Matrix to, double duration) {
    if (segments.empty()) throw validation_error("Schedule::ramp_to: no previous segment");
    segments.push_back({duration, segments.back().at(1.0), std::move(to)});
    return *this;
}

int Schedule::dim() const {
    if (segments.empty()) throw validation_error("Schedule: no segments");
    return static_cast<int>(segments.front().start.rows());
}

double Schedule::total_duration() const {
    double total = 0.0;
    for (const auto& seg : segments) total += seg.duration;
    return total;
}

Matrix Schedule::generator_at(double t) const {
    if (segments.empty()) throw validation_error("Schedule: no segments");
    double offset = 0.0;
    for (const auto& seg : segments) {
        if (t <= offset + seg.duration) {
            return seg.at(std::clamp((t - offset) / seg.duration, 0.0, 1.0));
        }
        offset += seg.duration;
    }
    return segments.back().at(1.0);
}

Matrix Schedule::derivative_at(double t) const {
    if (segments.empty()) throw validation_error("Schedule: no segments");
    double offset = 0.0;
    for (const auto& seg : segments) {
        if (t <= offset + seg.duration) {
            if (seg.constant()) return Matrix::Zero(seg.start.rows(), seg.start.cols());
            return (*seg.end - seg.start) / seg.duration;
        }
        offset += seg.duration;
    }
    const auto& last = segments.back();
    return Matrix::Zero(last.start.rows(), last.start.cols());
}

void Schedule::validate() const {
    if (segments.empty()) throw validation_error("Schedule: no segments");
    const Eigen::Index d = segments.front().start.rows();
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& seg = segments[i];
        if (!(seg.duration > 0.0)) {
            std::ostringstream msg;
            msg << "Schedule: segment " << i << " duration " << seg.duration << " is not positive";
            throw validation_error(msg.str());
        }
        require_hermitian(seg.start, default_tolerances().hermiticity, "Schedule segment");
        if (seg.start.rows() != d) throw validation_error("Schedule: segments disagree on dimension");
        if (seg.end) {
            require_hermitian(*seg.end, default_tolerances().hermiticity, "Schedule segment");
            if (seg.end->rows() != d) throw validation_error("Schedule: segments disagree on dimension");
        }
    }
}

Matrix propagate(const Schedule& schedule, long steps, double hbar) {
    schedule.validate();
    if (steps < 1) throw validation_error("propagate: steps must be >= 1");
    const double total = schedule.total_duration();
    if (!(total > 0.0)) throw validation_error("propagate: schedule duration must be positive");

    const int d = schedule.dim();
    Matrix u = Matrix::Identity(d, d);
    for (const auto& seg : schedule.segments) {
        if (seg.constant()) {
            u = hermitian_propagator(seg.start, seg.duration, hbar) * u;
            continue;
        }
        const long n = std::max<long>(1, std::lround(static_cast<double>(steps) * seg.duration / total));
        const double dt = seg.duration / static_cast<double>(n);
        for (long k = 0; k < n; ++k) {
            const double s_mid = (static_cast<double>(k) + 0.5) / static_cast<double>(n);
            u = hermitian_propagator(seg.at(s_mid), dt, hbar) * u;
        }
    }
    return u;
}

} // namespace qsm
