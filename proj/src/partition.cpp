#include "hped/partition.hpp"

#include <algorithm>
#include <limits>

namespace hped {

Partition::Partition(Mode mode, double unit_radius, double transit_width, int k_max)
    : mode_(mode), unit_radius_(unit_radius), transit_width_(transit_width), k_max_(k_max) {}

ContinuousZone* Partition::find(int id) {
    for (auto& z : zones_) if (z.id == id) return &z;
    return nullptr;
}

int Partition::add_zone(ContinuousZone z) {
    z.id = next_id_++;
    z.unit_radius = unit_radius_;
    zones_.push_back(z);
    return z.id;
}

void Partition::remove_zone(int id) {
    zones_.erase(std::remove_if(zones_.begin(), zones_.end(), [id](const ContinuousZone& z) { return z.id == id; }),
                 zones_.end());
}

bool Partition::in_core(const Vec2& p) const {
    if (mode_ == Mode::PureContinuous) return true;
    if (mode_ == Mode::PureDiscrete) return false;
    for (const auto& z : zones_) {
        if ((p - z.center).norm2() < z.radius() * z.radius()) return true;
    }
    return false;
}

Region Partition::region_of(const Vec2& p) const {
    if (mode_ == Mode::PureContinuous) return Region::Core;
    if (mode_ == Mode::PureDiscrete) return Region::Discrete;
    bool transit = false;
    for (const auto& z : zones_) {
        const double d2 = (p - z.center).norm2();
        if (d2 < z.radius() * z.radius()) return Region::Core;
        const double ro = z.radius() + transit_width_;
        if (d2 < ro * ro) transit = true;
    }
    return transit ? Region::Transit : Region::Discrete;
}

int Partition::zone_at(const Vec2& p) const {
    if (mode_ != Mode::Hybrid) return -1;
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& z : zones_) {
        const double d = distance(p, z.center);
        if (d < z.radius() + transit_width_ && d - z.radius() < best_d) {
            best_d = d - z.radius();
            best = z.id;
        }
    }
    return best;
}

int Partition::nearest_zone(const Vec2& p) const {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < zones_.size(); ++i) {
        const double d = distance(p, zones_[i].center) - zones_[i].radius();
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

const std::vector<char>& Partition::core_cells(const Grid& g) const {
    if (mask_grid_ == &g && mask_cells_ == g.size() && mask_zones_ == zones_) return mask_;
    mask_.assign(g.size(), 0);
    mask_grid_ = &g;
    mask_cells_ = g.size();
    mask_zones_ = zones_;
    if (mode_ == Mode::PureContinuous) {
        std::fill(mask_.begin(), mask_.end(), 1);
        return mask_;
    }
    if (mode_ == Mode::PureDiscrete) return mask_;
    for (const auto& z : zones_) {
        const double r2 = z.radius() * z.radius();
        for (const auto& c : g.cells_in_disk(z.center, z.radius())) {
            if ((g.cell_center(c) - z.center).norm2() < r2) mask_[g.linear(c)] = 1;
        }
    }
    return mask_;
}

}  // namespace hped
