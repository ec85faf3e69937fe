#include <doctest.h>

#include <cstring>
#include <random>

#include "hped/continuous.hpp"

using namespace hped;

namespace {

Scenario field(double half, std::vector<Polygon> obstacles = {}) {
    Scenario s;
    s.bounds = make_rect({-half, -half}, {half, half});
    s.obstacles = std::move(obstacles);
    return s;
}

ContinuousAgent walker(AgentId id, Vec2 pos, Vec2 goal, double speed = 1.34) {
    ContinuousAgent a;
    a.id = id;
    a.position = pos;
    a.desired_speed = speed;
    a.route.waypoints = {pos, goal};
    return a;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("driving force only: one step from rest") {
    const SimParams p;
    SocialForceModel m(field(50.0), p);
    std::vector<ContinuousAgent> agents{walker(0, {0, 0}, {10, 0})};
    m.step(agents, {}, 0.01);
    // dv = (v0 / tau) * dt with no other forces in range.
    CHECK(agents[0].velocity.x == doctest::Approx(1.34 / 0.5 * 0.01).epsilon(1e-12));
    CHECK(agents[0].velocity.y == 0.0);
    CHECK(agents[0].position.x == doctest::Approx(0.0268 * 0.01).epsilon(1e-12));
}

TEST_CASE("head-on mirror symmetry") {
    const SimParams p;
    SocialForceModel m(field(50.0), p);
    std::vector<ContinuousAgent> agents{walker(0, {-1.0, 0.0}, {10, 0}), walker(1, {1.0, 0.0}, {-10, 0})};
    for (int s = 0; s < 300; ++s) {
        m.step(agents, {}, 0.01);
        REQUIRE(agents[0].position.x == -agents[1].position.x);
        REQUIRE(agents[0].position.y == agents[1].position.y);
        REQUIRE(agents[0].velocity.x == -agents[1].velocity.x);
    }
}

TEST_CASE("static circle exerts the same force as an agent at rest") {
    const SimParams p;
    const Vec2 pi{0.0, 0.0}, vi{0.8, 0.1}, pj{0.5, 0.2};
    const Vec2 f_agent = pair_force(pi, vi, 0.23, 75.0, pj, Vec2{}, 0.23, p);
    SocialForceModel m(field(50.0), p);

    ContinuousAgent a = walker(0, pi, {10, 0});
    a.velocity = vi;
    std::vector<ContinuousAgent> with_static{a};
    m.step(with_static, {{99, pj, 0.23}}, 0.01);

    ContinuousAgent real = walker(99, pj, pj, 0.0);
    std::vector<ContinuousAgent> with_agent{a, real};
    m.step(with_agent, {}, 0.01);
    CHECK(same_bits(with_static[0].velocity.x, with_agent[0].velocity.x));
    CHECK(same_bits(with_static[0].velocity.y, with_agent[0].velocity.y));
    CHECK(f_agent.norm() > 0.0);
}

TEST_CASE("pair forces are equal and opposite") {
    const SimParams p;
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 1000; ++t) {
        const Vec2 a{u(rng), u(rng)}, b{u(rng), u(rng)};
        const Vec2 v{u(rng), u(rng)};
        // Same velocity on both sides keeps the friction term antisymmetric.
        const Vec2 fab = pair_force(a, v, 0.23, 75.0, b, v, 0.23, p);
        const Vec2 fba = pair_force(b, v, 0.23, 75.0, a, v, 0.23, p);
        const double scale = std::max(fab.norm(), 1e-300);
        CHECK((fab + fba).norm() <= 1e-9 * scale);
    }
}

TEST_CASE("repulsion magnitude follows the exponential law") {
    SimParams p;
    const double d = 0.8;
    const Vec2 f = pair_force({0, 0}, {}, 0.23, 75.0, {d, 0}, {}, 0.23, p);
    CHECK(f.x == doctest::Approx(-75.0 * 26.67 * std::exp((0.46 - d) / 0.06)));
    CHECK(f.y == 0.0);
    // Overlap adds body compression along the normal.
    const double o = 0.02;
    const Vec2 g = pair_force({0, 0}, {}, 0.23, 75.0, {0.46 - o, 0}, {}, 0.23, p);
    CHECK(-g.x == doctest::Approx(75.0 * 26.67 * std::exp(o / 0.06) + 2.4e5 * o));
    const Vec2 w = wall_force({0, 0}, {}, 0.23, 75.0, {0.5, 0}, p);
    CHECK(w.x == doctest::Approx(-75.0 * 26.67 * std::exp((0.23 - 0.5) / 0.06)));
}

TEST_CASE("sliding friction opposes tangential motion") {
    SimParams p;
    const Vec2 f = pair_force({0, 0}, {0, 1.0}, 0.23, 75.0, {0.44, 0}, {0, 0}, 0.23, p);
    CHECK(f.y < 0.0);
    CHECK(f.y == doctest::Approx(-1.2e5 * 0.02 * 1.0));
    const Vec2 w = wall_force({0, 0}, {0, 1.0}, 0.23, 75.0, {0.2, 0}, p);
    CHECK(w.y == doctest::Approx(-1.2e5 * 0.03 * 1.0));
}

TEST_CASE("extrapolate_position") {
    ContinuousAgent a;
    a.position = {0, 0};
    a.velocity = {1, 0};
    CHECK(extrapolate_position(a, 0.0) == Vec2{0, 0});
    CHECK(extrapolate_position(a, 0.01).x == doctest::Approx(0.01));
    a.velocity = {};
    a.position = {3, 4};
    CHECK(extrapolate_position(a, 0.007) == Vec2{3, 4});
}

TEST_CASE("route advancement") {
    Route r;
    r.waypoints = {{0, 0}, {1, 0}, {2, 0}};
    CHECK(r.current() == Vec2{1, 0});
    CHECK(r.previous() == Vec2{0, 0});
    r.advance_if_within({0.9, 0}, 0.46);
    CHECK(r.current() == Vec2{2, 0});
    CHECK(r.at_last());
    r.advance_if_within({2, 0}, 0.46);
    CHECK(r.current() == Vec2{2, 0});
}

TEST_CASE("random stress: speed cap, impermeability, determinism") {
    SimParams p;
    const std::vector<Polygon> obstacles{make_rect({-1, -1}, {1, 1}), make_rect({2, -4}, {2.5, 0}),
                                         Polygon({{-4, 2}, {-2, 2}, {-3, 3.5}})};
    auto run = [&](std::uint64_t seed) {
        SocialForceModel m(field(5.0, obstacles), p);
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-4.6, 4.6);
        std::vector<ContinuousAgent> agents;
        while (agents.size() < 40) {
            const Vec2 pos{u(rng), u(rng)};
            if (!m.position_valid(pos)) continue;
            bool clash = false;
            for (const auto& o : agents) clash = clash || distance(o.position, pos) < 0.5;
            if (clash) continue;
            agents.push_back(walker(static_cast<AgentId>(agents.size()), pos, {u(rng), u(rng)}));
        }
        std::vector<StaticCircle> statics{{100, {-3.0, -3.0}, 0.23}, {101, {3.5, 3.5}, 0.23}};
        std::vector<Vec2> trace;
        for (int s = 0; s < 10000; ++s) {
            if (s % 500 == 0) {
                for (auto& a : agents) a.route.waypoints = {a.position, {u(rng), u(rng)}}, a.route.next = 1;
            }
            m.step(agents, statics, p.dt_cont_s);
            for (const auto& a : agents) {
                REQUIRE(a.velocity.norm() <= p.v_max_mps + 1e-12);
                REQUIRE(m.position_valid(a.position));
                REQUIRE(a.position.finite());
            }
        }
        for (const auto& a : agents) trace.push_back(a.position);
        return trace;
    };
    const auto a = run(8);
    const auto b = run(8);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(same_bits(a[i].x, b[i].x));
        CHECK(same_bits(a[i].y, b[i].y));
    }
}
