#include "hped/clock.hpp"

#include <cmath>
#include <stdexcept>

namespace hped {

Micros to_micros(double seconds) { return std::llround(seconds * 1e6); }

std::int64_t steps_in_frame(std::int64_t n, Micros dt_disc, Micros dt_cont) {
    return (n * dt_disc) / dt_cont - ((n - 1) * dt_disc) / dt_cont;
}

std::int64_t steps_in_frame(std::int64_t n, double dt_disc_s, double dt_cont_s) {
    return steps_in_frame(n, to_micros(dt_disc_s), to_micros(dt_cont_s));
}

Micros residual_gap(std::int64_t n, Micros dt_disc, Micros dt_cont) {
    return (n * dt_disc) % dt_cont;
}

double residual_gap(std::int64_t n, double dt_disc_s, double dt_cont_s) {
    return to_seconds(residual_gap(n, to_micros(dt_disc_s), to_micros(dt_cont_s)));
}

AlignedSchedule::AlignedSchedule(Micros dt_disc, Micros dt_cont) : dt_disc_(dt_disc), dt_cont_(dt_cont) {
    if (dt_cont <= 0 || dt_disc < dt_cont) throw std::invalid_argument("schedule requires 0 < dt_cont <= dt_disc");
}

std::vector<ScheduleEvent> AlignedSchedule::advance() {
    const std::int64_t n = ++n_;
    const std::int64_t d = steps_in_frame(n, dt_disc_, dt_cont_);
    std::vector<ScheduleEvent> events;
    events.reserve(static_cast<std::size_t>(d) + 2);
    events.push_back({EventKind::DiscreteStep, n, n * dt_disc_, 0, 0});
    for (std::int64_t l = 1; l <= d; ++l) {
        const std::int64_t c = cont_total_ + l;
        events.push_back({EventKind::ContinuousStep, n, c * dt_cont_, c, 0});
    }
    cont_total_ += d;
    events.push_back({EventKind::TransformNow, n, n * dt_disc_, 0, residual_gap(n, dt_disc_, dt_cont_)});
    return events;
}

}  // namespace hped
