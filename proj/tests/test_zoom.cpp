#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hped/zoom.hpp"

using namespace hped;

namespace {

struct World {
    SimParams p;
    Grid grid{{0, 0}, 0.5, 40, 40};
    Partition part;
    std::vector<ContinuousAgent> cont;
    std::vector<DiscreteAgent> disc;
    std::vector<double> rho;

    World() {
        p.dt_disc_s = 1.0;
        p.rho_thr_ped_m2 = 1.5;
        p.zoom_radius_m = 2.0;
        part = Partition(Mode::Hybrid, p.zoom_radius_m, p.transit_width(), p.k_max);
        rho.assign(grid.size(), 0.0);
    }

    void add_discrete(AgentId id, CellIndex c) {
        DiscreteAgent a;
        a.id = id;
        a.cell = c;
        a.route.waypoints = {grid.cell_center(c)};
        grid.occupy(c, id);
        disc.push_back(a);
    }

    void add_continuous(AgentId id, Vec2 pos) {
        ContinuousAgent a;
        a.id = id;
        a.position = pos;
        a.route.waypoints = {pos};
        cont.push_back(a);
    }
};

// Shifts zone centers so that no cell center sits exactly on a ring boundary.
const Vec2 kOffLattice{0.013, 0.021};

std::vector<double> uniform_field(const Grid& g, double v) { return std::vector<double>(g.size(), v); }

// Fills the cells within r1 of `center` with `inner` and those within r2 but
// not r1 with the value that makes the mean over r2 equal `mean2`.
void two_level_field(const Grid& g, std::vector<double>& rho, const Vec2& center, double r1, double r2, double inner,
                     double mean2) {
    const auto in1 = g.cells_in_disk(center, r1);
    const auto in2 = g.cells_in_disk(center, r2);
    const double n1 = static_cast<double>(in1.size());
    const double n2 = static_cast<double>(in2.size());
    const double outer = (mean2 * n2 - inner * n1) / (n2 - n1);
    for (const auto& c : in2) rho[g.linear(c)] = outer;
    for (const auto& c : in1) rho[g.linear(c)] = inner;
}

}  // namespace

TEST_CASE("zoom_in_scan with no hot cells is empty") {
    const Grid g({0, 0}, 0.5, 20, 20);
    CHECK(zoom_in_scan(g, uniform_field(g, 1.49), 1.5, 2.0).empty());
    CHECK(zoom_in_scan(g, uniform_field(g, 0.0), 1.5, 2.0).empty());
}

TEST_CASE("zoom_in_scan isolated hotspot") {
    const Grid g({0, 0}, 0.5, 20, 20);
    auto rho = uniform_field(g, 0.3);
    rho[g.linear({7, 12})] = 2.0;
    const auto hot = zoom_in_scan(g, rho, 1.5, 2.0);
    REQUIRE(hot.size() == 1);
    CHECK(hot[0].cell == CellIndex{7, 12});
    CHECK(hot[0].rho == 2.0);
}

TEST_CASE("zoom_in_scan suppresses a neighbor within the influence radius") {
    const Grid g({0, 0}, 0.5, 20, 20);
    auto rho = uniform_field(g, 0.0);
    // Two cells 1.0 m apart with R = 2.0 m.
    rho[g.linear({10, 5})] = 2.5;
    rho[g.linear({10, 7})] = 2.0;
    const auto hot = zoom_in_scan(g, rho, 1.5, 2.0);
    REQUIRE(hot.size() == 1);
    CHECK(hot[0].cell == CellIndex{10, 5});

    // Far apart: both survive, densest first.
    rho[g.linear({10, 7})] = 0.0;
    rho[g.linear({2, 18})] = 3.0;
    const auto two = zoom_in_scan(g, rho, 1.5, 2.0);
    REQUIRE(two.size() == 2);
    CHECK(two[0].cell == CellIndex{2, 18});
    CHECK(two[1].cell == CellIndex{10, 5});

    std::vector<char> excluded(g.size(), 0);
    excluded[g.linear({2, 18})] = 1;
    const auto one = zoom_in_scan(g, rho, 1.5, 2.0, &excluded);
    REQUIRE(one.size() == 1);
    CHECK(one[0].cell == CellIndex{10, 5});
}

TEST_CASE("zoom_in_scan is invariant under density rescaling") {
    const Grid g({0, 0}, 0.46, 15, 15);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> rho(g.size());
        for (auto& r : rho) r = u(rng);
        const double s = std::exp(std::uniform_real_distribution<double>(-3.0, 3.0)(rng));
        std::vector<double> scaled(rho);
        for (auto& r : scaled) r *= s;
        const auto a = zoom_in_scan(g, rho, 2.0, 1.5);
        const auto b = zoom_in_scan(g, scaled, 2.0 * s, 1.5);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].cell == b[i].cell);
    }
}

TEST_CASE("size_zone grows one step at exactly the threshold") {
    const Grid g({0, 0}, 0.5, 40, 40);
    std::vector<double> rho(g.size(), 0.0);
    const CellIndex c{20, 20};
    for (const auto& d : g.cells_in_disk(g.cell_center(c), 2.0)) rho[g.linear(d)] = 1.5;
    CHECK(local_density(g, rho, g.cell_center(c), 2.0) == 1.5);
    CHECK(local_density(g, rho, g.cell_center(c), 4.0) < 1.5);
    const auto z = size_zone(g, rho, c, 1.5, 2.0, 5);
    CHECK(z.k == 2);

    // Saturated field grows to k_max and no further.
    CHECK(size_zone(g, uniform_field(g, 2.0), c, 1.5, 2.0, 5).k == 5);
    CHECK(size_zone(g, uniform_field(g, 2.0), c, 1.5, 2.0, 3).k == 3);
    // Below threshold at k = 1 keeps the minimum size.
    CHECK(size_zone(g, uniform_field(g, 1.0), c, 1.5, 2.0, 5).k == 1);
}

TEST_CASE("size_zone consumes pooled candidates inside the final radius") {
    const Grid g({0, 0}, 0.5, 40, 40);
    const auto rho = uniform_field(g, 2.0);
    std::vector<HotCell> pool{{{20, 20}, 2.0}, {{20, 30}, 2.0}, {{20, 39}, 2.0}, {{0, 0}, 2.0}};
    const auto z = size_zone(g, rho, {20, 20}, 1.5, 1.5, 4, &pool);
    REQUIRE(z.k == 4);
    // Radius 6 m: (20,30) is 5 m away and goes, (20,39) is 9.5 m away and stays.
    REQUIRE(pool.size() == 2);
    CHECK(pool[0].cell == CellIndex{20, 39});
    CHECK(pool[1].cell == CellIndex{0, 0});
}

TEST_CASE("size_zone center of mass") {
    const Grid g({0, 0}, 0.5, 40, 40);
    const CellIndex c{20, 20};
    const Vec2 cc = g.cell_center(c);

    std::vector<double> sym(g.size(), 0.0);
    for (int m = 0; m < g.rows(); ++m) {
        for (int n = 0; n < g.cols(); ++n) {
            const double d = distance(g.cell_center({m, n}), cc);
            sym[g.linear({m, n})] = 3.0 * std::exp(-d);
        }
    }
    const auto zs = size_zone(g, sym, c, 1.5, 2.0, 5);
    CHECK(zs.center.x == doctest::Approx(cc.x).epsilon(1e-12));
    CHECK(zs.center.y == doctest::Approx(cc.y).epsilon(1e-12));

    std::vector<double> single(g.size(), 0.0);
    single[g.linear({21, 18})] = 4.0;
    const auto z1 = size_zone(g, single, c, 1.5, 2.0, 5);
    CHECK(z1.k == 1);
    CHECK(z1.center == g.cell_center({21, 18}));

    // Obstacle cells carry no weight.
    Grid h = g;
    h.set_obstacle({21, 18});
    CHECK(density_center(h, single, cc, 2.0) == cc);
    CHECK(local_density(h, single, cc, 0.0) == 0.0);
}

TEST_CASE("ring_density") {
    const Grid g({0, 0}, 0.5, 40, 40);
    const Vec2 center = g.cell_center({20, 20});
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 4.0);
    std::vector<double> noisy(g.size());
    for (auto& r : noisy) r = u(rng);
    CHECK(ring_density(g, noisy, center, 2.0, 1) == local_density(g, noisy, center, 2.0));

    const auto flat = uniform_field(g, 2.25);
    for (int k = 1; k <= 5; ++k) CHECK(ring_density(g, flat, center, 2.0, k) == doctest::Approx(2.25));

    std::vector<double> rho(g.size(), 0.0);
    two_level_field(g, rho, center, 2.0, 4.0, 3.0, 1.5);
    REQUIRE(local_density(g, rho, center, 2.0) == doctest::Approx(3.0));
    REQUIRE(local_density(g, rho, center, 4.0) == doctest::Approx(1.5));
    CHECK(ring_density(g, rho, center, 2.0, 2) == doctest::Approx((1.5 * 4 - 3.0 * 1) / 3.0));
    CHECK(ring_density(g, rho, center, 2.0, 2) == doctest::Approx(1.0));
}

TEST_CASE("zoom_out_target") {
    const Grid g({0, 0}, 0.5, 40, 40);
    ContinuousZone z;
    z.center = g.cell_center({20, 20});
    z.k = 2;
    z.unit_radius = 2.0;
    CHECK(zoom_out_target(g, uniform_field(g, 2.0), z, 1.5) == 2);
    CHECK(zoom_out_target(g, uniform_field(g, 1.0), z, 1.5) == 0);

    // Rings from outside in: 0.5 then 2.0.
    std::vector<double> rho(g.size(), 0.0);
    two_level_field(g, rho, z.center, 2.0, 4.0, 2.0, (0.5 * 3.0 + 2.0) / 4.0);
    REQUIRE(ring_density(g, rho, z.center, 2.0, 2) == doctest::Approx(0.5));
    REQUIRE(ring_density(g, rho, z.center, 2.0, 1) == doctest::Approx(2.0));
    CHECK(zoom_out_target(g, rho, z, 1.5) == 1);
}

TEST_CASE("activate_zone on an empty area") {
    World w;
    ContinuousZone z;
    z.center = {10, 10};
    z.k = 1;
    ZoomTick out;
    const int id = activate_zone(w.part, z, w.cont, w.disc, w.grid, w.p, 3, 6.0, out);
    REQUIRE(w.part.zones().size() == 1);
    CHECK(w.part.find(id)->center == Vec2{10, 10});
    CHECK(w.part.find(id)->unit_radius == 2.0);
    CHECK(w.part.find(id)->created_frame == 3);
    CHECK(out.transforms.promoted.empty());
    REQUIRE(out.events.size() == 1);
    CHECK(out.events[0].event == "created");
    CHECK(out.events[0].population == 0);
}

TEST_CASE("activate_zone promotes agents in place") {
    World w;
    std::vector<CellIndex> cells;
    for (int i = 0; i < 10; ++i) cells.push_back({18 + i % 5, 18 + i / 5});
    for (int i = 0; i < 10; ++i) w.add_discrete(i, cells[i]);
    w.add_discrete(10, {0, 0});
    ContinuousZone z;
    z.center = {10, 10};
    ZoomTick out;
    activate_zone(w.part, z, w.cont, w.disc, w.grid, w.p, 1, 2.0, out);
    CHECK(out.transforms.promoted.size() == 10);
    REQUIRE(w.cont.size() == 10);
    REQUIRE(w.disc.size() == 1);
    CHECK(w.disc[0].id == 10);
    for (const auto& [id, d] : out.transforms.displacement) CHECK(d == 0.0);
    for (const auto& a : w.cont) {
        CHECK(a.position == w.grid.cell_center(cells[static_cast<std::size_t>(a.id)]));
        CHECK(w.grid.is_free(cells[static_cast<std::size_t>(a.id)]));
    }
    CHECK(out.events.back().population == 10);
}

TEST_CASE("activate_zone merges overlapping zones") {
    World w;
    ContinuousZone a;
    a.center = {5, 10};
    ZoomTick out;
    const int first = activate_zone(w.part, a, w.cont, w.disc, w.grid, w.p, 1, 2.0, out);
    ContinuousZone b;
    b.center = {8, 10};
    const int merged = activate_zone(w.part, b, w.cont, w.disc, w.grid, w.p, 2, 4.0, out);
    REQUIRE(w.part.zones().size() == 1);
    CHECK(merged != first);
    const auto& z = *w.part.find(merged);
    CHECK(z.center.x == doctest::Approx(6.5));
    CHECK(z.center.y == doctest::Approx(10.0));
    CHECK(z.k == 2);
    CHECK(z.created_frame == 1);
    // Both original disks lie inside the merged one.
    CHECK(distance(z.center, a.center) + 2.0 <= z.radius() + 1e-9);
    CHECK(distance(z.center, b.center) + 2.0 <= z.radius() + 1e-9);
    CHECK(out.events.back().event == "merged");

    // A zone far outside the annulus stays separate.
    ContinuousZone c;
    c.center = {16, 16};
    activate_zone(w.part, c, w.cont, w.disc, w.grid, w.p, 3, 6.0, out);
    CHECK(w.part.zones().size() == 2);
}

TEST_CASE("activate_zone refuses a merge beyond k_max") {
    World w;
    w.p.k_max = 2;
    w.part = Partition(Mode::Hybrid, 2.0, w.p.transit_width(), 2);
    ContinuousZone a;
    a.center = {5, 10};
    a.k = 2;
    ContinuousZone b;
    b.center = {12, 10};
    b.k = 2;
    ZoomTick out;
    activate_zone(w.part, a, w.cont, w.disc, w.grid, w.p, 1, 2.0, out);
    activate_zone(w.part, b, w.cont, w.disc, w.grid, w.p, 1, 2.0, out);
    CHECK(w.part.zones().size() == 2);
}

TEST_CASE("zoom_tick leaves a dense zone unchanged") {
    World w;
    ContinuousZone z;
    z.center = w.grid.cell_center({20, 20}) + kOffLattice;
    z.k = 2;
    const int id = w.part.add_zone(z);
    for (int i = 0; i < 5; ++i) w.add_continuous(i, w.grid.cell_center({19 + i, 20}));
    // Hot inside the core, cold outside.
    for (const auto& c : w.grid.cells_in_disk(z.center, 4.0)) w.rho[w.grid.linear(c)] = 2.0;
    const auto tick = zoom_tick(w.part, w.cont, w.disc, w.grid, w.rho, w.p, 5, 10.0);
    REQUIRE(w.part.find(id) != nullptr);
    CHECK(w.part.find(id)->k == 2);
    CHECK(tick.transforms.demoted.empty());
    CHECK(tick.events.empty());
    CHECK(tick.uncovered_hot_cells == 0);
}

TEST_CASE("zoom_tick dissolves a cold zone and demotes its agents") {
    World w;
    ContinuousZone z;
    z.center = w.grid.cell_center({20, 20});
    z.k = 1;
    w.part.add_zone(z);
    for (int i = 0; i < 4; ++i) w.add_continuous(i, w.grid.cell_center({19 + i, 21}));
    const auto tick = zoom_tick(w.part, w.cont, w.disc, w.grid, w.rho, w.p, 5, 10.0);
    CHECK(w.part.zones().empty());
    CHECK(w.cont.empty());
    CHECK(w.disc.size() == 4);
    CHECK(tick.transforms.demoted.size() == 4);
    for (const auto& [id, d] : tick.transforms.displacement) CHECK(d <= w.p.r_place());
    REQUIRE(tick.events.size() == 1);
    CHECK(tick.events[0].event == "dissolved");
    CHECK(tick.events[0].k == 0);
    CHECK(w.grid.occupancy_unique());
}

TEST_CASE("zoom_tick sheds the cold outer ring") {
    World w;
    ContinuousZone z;
    z.center = w.grid.cell_center({20, 20}) + kOffLattice;
    z.k = 2;
    const int id = w.part.add_zone(z);
    two_level_field(w.grid, w.rho, z.center, 2.0, 4.0, 2.0, (0.5 * 3.0 + 2.0) / 4.0);
    // Inner agent stays, outer-ring agent demotes.
    w.add_continuous(0, w.grid.cell_center({20, 21}));
    w.add_continuous(1, w.grid.cell_center({20, 26}));
    const auto tick = zoom_tick(w.part, w.cont, w.disc, w.grid, w.rho, w.p, 5, 10.0);
    REQUIRE(w.part.find(id) != nullptr);
    CHECK(w.part.find(id)->k == 1);
    REQUIRE(tick.transforms.demoted.size() == 1);
    CHECK(tick.transforms.demoted[0] == 1);
    REQUIRE(w.cont.size() == 1);
    CHECK(w.cont[0].id == 0);
    CHECK(tick.events.front().event == "shrunk");
}

TEST_CASE("zoom_tick keeps a ring alive when its agents cannot be placed") {
    World w;
    ContinuousZone z;
    z.center = w.grid.cell_center({20, 20});
    z.k = 1;
    const int id = w.part.add_zone(z);
    const Vec2 pos = w.grid.cell_center({20, 20});
    w.add_continuous(0, pos);
    for (const auto& c : w.grid.cells_in_disk(pos, w.p.r_place() + 1.0)) w.grid.set_obstacle(c);
    const auto tick = zoom_tick(w.part, w.cont, w.disc, w.grid, w.rho, w.p, 5, 10.0);
    REQUIRE(w.part.find(id) != nullptr);
    CHECK(w.part.find(id)->k == 1);
    CHECK(w.cont.size() == 1);
    REQUIRE(tick.events.size() == 1);
    CHECK(tick.events[0].event == "shrink_blocked");
}

TEST_CASE("zoom_tick covers every hot cell and promotes without displacement") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 40; ++trial) {
        World w;
        std::uniform_int_distribution<int> cell(0, 39);
        for (int h = 0; h < 6; ++h) {
            const CellIndex c{cell(rng), cell(rng)};
            for (const auto& d : w.grid.cells_in_disk(w.grid.cell_center(c), 1.0)) {
                w.rho[w.grid.linear(d)] = std::uniform_real_distribution<double>(1.0, 4.0)(rng);
            }
        }
        AgentId id = 0;
        for (int m = 0; m < 40; ++m) {
            for (int n = 0; n < 40; ++n) {
                if (rng() % 6 == 0) w.add_discrete(id++, {m, n});
            }
        }
        const std::size_t total = w.disc.size();
        const auto tick = zoom_tick(w.part, w.cont, w.disc, w.grid, w.rho, w.p, 1, 2.0);
        CHECK(tick.uncovered_hot_cells == 0);
        for (std::size_t i = 0; i < w.rho.size(); ++i) {
            if (w.rho[i] >= w.p.rho_thr_ped_m2) CHECK(w.part.in_core(w.grid.cell_center(w.grid.from_linear(i))));
        }
        for (const auto& [aid, d] : tick.transforms.displacement) CHECK(d == 0.0);
        CHECK(w.cont.size() + w.disc.size() == total);
        CHECK(tick.transforms.promoted.size() == w.cont.size());
        for (const auto& a : w.cont) CHECK(w.part.in_core(a.position));
        for (const auto& a : w.disc) CHECK_FALSE(w.part.in_core(w.grid.cell_center(a.cell)));
        for (const auto& e : tick.events) CHECK(e.event != "dissolved");
        for (const auto& z : w.part.zones()) {
            CHECK(z.k >= 1);
            CHECK(z.k <= w.p.k_max);
        }
    }
}

TEST_CASE("zoom_tick is inert outside hybrid mode") {
    World w;
    w.part = Partition(Mode::PureContinuous, 2.0, w.p.transit_width(), 5);
    w.rho = uniform_field(w.grid, 3.0);
    const auto tick = zoom_tick(w.part, w.cont, w.disc, w.grid, w.rho, w.p, 1, 2.0);
    CHECK(w.part.zones().empty());
    CHECK(tick.events.empty());
}
