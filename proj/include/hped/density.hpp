#pragma once
// Sliding-window presence-time density per grid cell, fed by both models.

#include <cstdint>
#include <deque>
#include <ostream>
#include <vector>

#include "hped/clock.hpp"
#include "hped/grid.hpp"

namespace hped {

enum class ModelKind { Continuous, Discrete };

class DensityField {
public:
    DensityField() = default;
    /// Grid geometry is copied; occupancy of `grid` is not used.
    DensityField(const Grid& grid, Micros window);

    Micros window() const { return window_; }

    /// Records one executed model step of length `weight` ending at `time`.
    /// Positions outside the grid are ignored. Throws std::logic_error if the
    /// step index was already recorded for that model.
    void record_step(ModelKind model, std::int64_t step_index, Micros time, Micros weight,
                     const std::vector<Vec2>& positions);

    struct Snapshot {
        Micros time{0};
        bool warming{false};
        std::vector<double> rho;  ///< Grid::linear order, ped/m^2
        double at(const Grid& g, const CellIndex& c) const { return rho[g.linear(c)]; }
    };

    /// Density of every cell over the window (t - window, t]. Before the
    /// window has filled, the elapsed time is used and `warming` is set.
    Snapshot snapshot(Micros t) const;
    double density_at(const CellIndex& c, Micros t) const;
    bool warm(Micros t) const { return t >= window_; }

    /// Cells in descending density, ties by lower linear index.
    std::vector<CellIndex> ordered_hotspots(Micros t) const;

    /// Presence time (microseconds) per cell over the window.
    std::vector<std::int64_t> presence(Micros t) const;

    const Grid& grid() const { return grid_; }

    /// Drops records older than `keep` before t.
    void prune(Micros t, Micros keep);

    struct StepRecord {
        std::int64_t step_index;
        Micros time;
        Micros weight;
        std::vector<std::uint32_t> cells;
    };
    const std::deque<StepRecord>& records(ModelKind m) const { return m == ModelKind::Continuous ? cont_ : disc_; }

private:
    Grid grid_;
    Micros window_{2'000'000};
    std::deque<StepRecord> cont_;
    std::deque<StepRecord> disc_;
};

/// Writes the snapshot as one line per grid row, row 0 (lowest y) first.
void write_density_matrix(std::ostream& os, const Grid& g, const DensityField::Snapshot& s);

}  // namespace hped
