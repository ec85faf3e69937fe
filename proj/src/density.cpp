#include "hped/density.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace hped {

DensityField::DensityField(const Grid& grid, Micros window)
    : grid_(grid.origin(), grid.cell_edge(), grid.rows(), grid.cols()), window_(window) {
    if (window <= 0) throw std::invalid_argument("density window must be positive");
}

void DensityField::record_step(ModelKind model, std::int64_t step_index, Micros time, Micros weight,
                               const std::vector<Vec2>& positions) {
    auto& q = model == ModelKind::Continuous ? cont_ : disc_;
    if (!q.empty() && step_index <= q.back().step_index) {
        throw std::logic_error("density step recorded twice or out of order");
    }
    StepRecord r{step_index, time, weight, {}};
    r.cells.reserve(positions.size());
    for (const auto& p : positions) {
        if (const auto c = grid_.cell_of(p)) r.cells.push_back(static_cast<std::uint32_t>(grid_.linear(*c)));
    }
    q.push_back(std::move(r));
}

std::vector<std::int64_t> DensityField::presence(Micros t) const {
    std::vector<std::int64_t> acc(grid_.size(), 0);
    const Micros lo = t - window_;
    for (const auto* q : {&cont_, &disc_}) {
        for (const auto& r : *q) {
            if (r.time <= lo || r.time > t) continue;
            for (std::uint32_t c : r.cells) acc[c] += r.weight;
        }
    }
    return acc;
}

DensityField::Snapshot DensityField::snapshot(Micros t) const {
    Snapshot s;
    s.time = t;
    s.warming = t < window_;
    s.rho.assign(grid_.size(), 0.0);
    const Micros span = std::min(t, window_);
    if (span <= 0) return s;
    const auto acc = presence(t);
    const double denom = grid_.cell_area() * to_seconds(span);
    for (std::size_t i = 0; i < acc.size(); ++i) s.rho[i] = to_seconds(acc[i]) / denom;
    return s;
}

double DensityField::density_at(const CellIndex& c, Micros t) const {
    const Micros span = std::min(t, window_);
    if (span <= 0) return 0.0;
    const std::size_t target = grid_.linear(c);
    const Micros lo = t - window_;
    std::int64_t acc = 0;
    for (const auto* q : {&cont_, &disc_}) {
        for (const auto& r : *q) {
            if (r.time <= lo || r.time > t) continue;
            for (std::uint32_t x : r.cells) if (x == target) acc += r.weight;
        }
    }
    return to_seconds(acc) / (grid_.cell_area() * to_seconds(span));
}

std::vector<CellIndex> DensityField::ordered_hotspots(Micros t) const {
    const auto s = snapshot(t);
    std::vector<std::size_t> idx(s.rho.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return s.rho[a] > s.rho[b]; });
    std::vector<CellIndex> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(grid_.from_linear(i));
    return out;
}

void DensityField::prune(Micros t, Micros keep) {
    for (auto* q : {&cont_, &disc_}) {
        while (!q->empty() && q->front().time <= t - keep) q->pop_front();
    }
}

void write_density_matrix(std::ostream& os, const Grid& g, const DensityField::Snapshot& s) {
    for (int m = 0; m < g.rows(); ++m) {
        for (int n = 0; n < g.cols(); ++n) {
            if (n) os << ' ';
            os << s.rho[g.linear({m, n})];
        }
        os << '\n';
    }
}

}  // namespace hped
