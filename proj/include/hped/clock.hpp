#pragma once
// Alignment of the discrete and continuous time steps. All arithmetic is
// on integer microseconds so long runs do not drift.

#include <cstdint>
#include <vector>

namespace hped {

using Micros = std::int64_t;

Micros to_micros(double seconds);
inline double to_seconds(Micros us) { return static_cast<double>(us) * 1e-6; }

/// Continuous steps owed in discrete frame n (n >= 1).
std::int64_t steps_in_frame(std::int64_t n, Micros dt_disc, Micros dt_cont);
std::int64_t steps_in_frame(std::int64_t n, double dt_disc_s, double dt_cont_s);

/// Gap between the last continuous step of frame n and t_n.
Micros residual_gap(std::int64_t n, Micros dt_disc, Micros dt_cont);
double residual_gap(std::int64_t n, double dt_disc_s, double dt_cont_s);

enum class EventKind { DiscreteStep, ContinuousStep, TransformNow };

struct ScheduleEvent {
    EventKind kind;
    std::int64_t frame;
    /// Model time the event's state refers to.
    Micros time;
    /// Global continuous step index (ContinuousStep only).
    std::int64_t cont_index{0};
    /// Extrapolation gap (TransformNow only).
    Micros gap{0};
};

class AlignedSchedule {
public:
    /// Throws std::invalid_argument unless 0 < dt_cont <= dt_disc.
    AlignedSchedule(Micros dt_disc, Micros dt_cont);

    Micros dt_disc() const { return dt_disc_; }
    Micros dt_cont() const { return dt_cont_; }
    /// Index of the frame the next advance() emits.
    std::int64_t next_frame() const { return n_ + 1; }
    std::int64_t continuous_steps_emitted() const { return cont_total_; }
    Micros frame_time(std::int64_t n) const { return n * dt_disc_; }

    /// Disc, d_n x Cont, Transform(gap) for the next frame.
    std::vector<ScheduleEvent> advance();

private:
    Micros dt_disc_;
    Micros dt_cont_;
    std::int64_t n_{0};
    std::int64_t cont_total_{0};
};

}  // namespace hped
