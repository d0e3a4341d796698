#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "cwplan/constraints.hpp"
#include "cwplan/cw.hpp"
#include "cwplan/errors.hpp"
#include "oracles.hpp"

using namespace cwplan;
using constraints::Kind;
using constraints::PathConstraint;

namespace {

cw::OrbitParams leo() { return cw::OrbitParams::from_altitude(400.0); }

PathConstraint shell(double inner, double outer, double t_end) {
    PathConstraint c;
    c.rho_inner = inner;
    c.rho_outer = outer;
    c.t_end = t_end;
    return c;
}

}  // namespace

TEST_SUITE("constraints") {

TEST_CASE("constraints classify by their radii and window shape") {
    CHECK(shell(0.5, 2.0, 100.0).kind() == Kind::shell);

    PathConstraint keep;
    keep.rho_inner = 1.0;
    CHECK(keep.kind() == Kind::keep_out);

    PathConstraint eq;
    eq.rho_inner = 0.0;
    eq.rho_outer = 0.0;
    eq.t_end = 50.0;
    eq.instant = true;
    CHECK(eq.kind() == Kind::equality);

    // Zero radii without the instant flag are still a (degenerate) shell.
    PathConstraint degenerate = shell(0.0, 0.0, 50.0);
    CHECK(degenerate.kind() == Kind::shell);
}

TEST_CASE("invalid radii and windows are rejected") {
    CHECK_THROWS_AS(shell(-0.1, 1.0, 10.0).validate(), ValidationError);
    CHECK_THROWS_AS(shell(2.0, 1.0, 10.0).validate(), ValidationError);
    CHECK_THROWS_AS(shell(0.0, 1.0, 0.0).validate(), ValidationError);
    CHECK_NOTHROW(PathConstraint{}.validate());
}

TEST_CASE("pointwise checks respect the open window") {
    const auto c = shell(1.0, 2.0, 100.0);
    const Vec3 violating(0.1, 0.0, 0.0);
    const Vec3 inside(1.5, 0.0, 0.0);

    CHECK(constraints::check_point(c, 0.0, violating));    // boundary exempt
    CHECK(constraints::check_point(c, 100.0, violating));  // boundary exempt
    CHECK(constraints::check_point(c, 150.0, violating));
    CHECK_FALSE(constraints::check_point(c, 50.0, violating));
    CHECK(constraints::check_point(c, 50.0, inside));

    PathConstraint keep;
    keep.rho_inner = 1.0;
    CHECK_FALSE(constraints::check_point(keep, 5.0, Vec3(0.5, 0, 0)));
    CHECK(constraints::check_point(keep, 5.0, Vec3(5.0, 0, 0)));

    PathConstraint eq;
    eq.rho_inner = eq.rho_outer = 0.0;
    eq.center = Vec3(1, 2, 3);
    eq.t_end = 40.0;
    eq.instant = true;
    CHECK(constraints::check_point(eq, 40.0, Vec3(1, 2, 3)));
    CHECK_FALSE(constraints::check_point(eq, 40.0, Vec3(1, 2, 3 + 1e-12)));
    CHECK(constraints::check_point(eq, 39.0, Vec3(0, 0, 0)));  // off-epoch
}

TEST_CASE("trajectory verdicts equal the conjunction of pointwise checks") {
    const auto p = leo();
    std::mt19937 rng(321u);
    for (int trial = 0; trial < 60; ++trial) {
        const Vec3 r_i = oracle::uniform_vec3(rng, -2.0, 2.0);
        const Vec3 r_j = oracle::uniform_vec3(rng, -2.0, 2.0);
        const double dt = oracle::uniform(rng, 200.0, 2500.0);
        const auto leg = cw::solve_transfer(p, r_i, r_j, Vec3::Zero(), dt);
        const auto traj = cw::sample_trajectory(p, leg, 120);

        PathConstraint c;
        c.center = oracle::uniform_vec3(rng, -1.0, 1.0);
        c.rho_inner = oracle::uniform(rng, 0.0, 1.5);
        c.rho_outer = (trial % 3 == 0)
                          ? constraints::kInfiniteRadius
                          : c.rho_inner + oracle::uniform(rng, 0.5, 4.0);
        c.t_end = oracle::uniform(rng, 0.3 * dt, 1.2 * dt);

        const auto verdict = constraints::check_trajectory(c, traj, dt);

        bool all_ok = true;
        double min_margin = std::numeric_limits<double>::infinity();
        std::optional<double> first_bad_t;
        for (const auto& [t, r] : traj.samples) {
            if (!constraints::check_point(c, t, r) && !first_bad_t) {
                first_bad_t = t;
            }
            all_ok = all_ok && constraints::check_point(c, t, r);
            if (c.in_window(t)) {
                const double d = (r - c.center).norm();
                double m = d - c.rho_inner;
                if (!std::isinf(c.rho_outer)) m = std::min(m, c.rho_outer - d);
                min_margin = std::min(min_margin, m);
            }
        }

        CHECK(verdict.satisfied == all_ok);
        if (std::isinf(min_margin)) {
            CHECK(std::isinf(verdict.min_margin));
        } else {
            CHECK(verdict.min_margin ==
                  doctest::Approx(min_margin).epsilon(1e-12));
        }
        CHECK(verdict.first_violation.has_value() == first_bad_t.has_value());
        if (first_bad_t) {
            CHECK(verdict.first_violation->t == *first_bad_t);
            const double d =
                (verdict.first_violation->r - c.center).norm();
            CHECK(verdict.first_violation->distance ==
                  doctest::Approx(d).epsilon(1e-12));
        }
    }
}

TEST_CASE("under-sampled windows are refused instead of silently passing") {
    const auto p = leo();
    const auto leg =
        cw::solve_transfer(p, Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3::Zero(), 1000.0);
    const auto traj = cw::sample_trajectory(p, leg, 11);  // 100 s spacing

    auto c = shell(0.0, 10.0, 1e9);
    CHECK_THROWS_AS((void)constraints::check_trajectory(c, traj, 50.0),
                    InsufficientSampling);
    CHECK_NOTHROW((void)constraints::check_trajectory(c, traj, 100.1));

    // Spacing only matters where the interval overlaps the window.
    c.t_end = 0.5;  // window ends before the second sample
    CHECK_THROWS_AS((void)constraints::check_trajectory(c, traj, 50.0),
                    InsufficientSampling);
    auto late = shell(0.0, 10.0, 1e9);
    cw::Trajectory shifted = traj;
    for (auto& s : shifted.samples) s.first += 2000.0;
    late.t_end = 1000.0;  // window ends before the shifted trajectory begins
    CHECK_NOTHROW((void)constraints::check_trajectory(late, shifted, 50.0));

    CHECK_THROWS_AS((void)constraints::check_trajectory(c, traj, 0.0),
                    ValidationError);
    cw::Trajectory empty;
    CHECK_THROWS_AS((void)constraints::check_trajectory(c, empty, 10.0),
                    EmptyList);
    cw::Trajectory backwards;
    backwards.samples = {{1.0, Vec3::Zero()}, {0.5, Vec3::Zero()}};
    CHECK_THROWS_AS((void)constraints::check_trajectory(c, backwards, 10.0),
                    ValidationError);
}

TEST_CASE("instant constraints demand an exact sample at their epoch") {
    cw::Trajectory traj;
    for (int k = 0; k <= 10; ++k) {
        traj.samples.push_back({10.0 * k, Vec3(1.0 * k, 0, 0)});
    }

    PathConstraint eq;
    eq.rho_inner = eq.rho_outer = 0.0;
    eq.center = Vec3(3.0, 0, 0);
    eq.instant = true;

    eq.t_end = 30.0;  // exact grid point, position matches exactly
    auto verdict = constraints::check_trajectory(eq, traj, 1e9);
    CHECK(verdict.satisfied);
    CHECK(verdict.min_margin == 0.0);

    eq.center = Vec3(3.0, 1e-9, 0);  // off by a nanometer: equality fails
    verdict = constraints::check_trajectory(eq, traj, 1e9);
    CHECK_FALSE(verdict.satisfied);
    REQUIRE(verdict.first_violation.has_value());
    CHECK(verdict.first_violation->t == 30.0);

    eq.t_end = 35.0;  // inside the span but between samples
    CHECK_THROWS_AS((void)constraints::check_trajectory(eq, traj, 1e9),
                    InsufficientSampling);

    eq.t_end = 500.0;  // beyond the span: nothing to verify
    verdict = constraints::check_trajectory(eq, traj, 1e9);
    CHECK(verdict.satisfied);
    CHECK(std::isinf(verdict.min_margin));
}

TEST_CASE("margins report signed slack to the nearest boundary") {
    const auto c = shell(1.0, 3.0, 100.0);
    cw::Trajectory traj;
    traj.samples = {{10.0, Vec3(1.2, 0, 0)},   // 0.2 above inner
                    {20.0, Vec3(2.9, 0, 0)},   // 0.1 below outer
                    {30.0, Vec3(2.0, 0, 0)}};  // comfortably inside
    const auto verdict = constraints::check_trajectory(c, traj, 1e9);
    CHECK(verdict.satisfied);
    CHECK(verdict.min_margin == doctest::Approx(0.1).epsilon(1e-12));

    cw::Trajectory bad = traj;
    bad.samples.push_back({40.0, Vec3(3.5, 0, 0)});  // 0.5 beyond outer
    const auto v2 = constraints::check_trajectory(c, bad, 1e9);
    CHECK_FALSE(v2.satisfied);
    CHECK(v2.min_margin == doctest::Approx(-0.5).epsilon(1e-12));
    REQUIRE(v2.first_violation.has_value());
    CHECK(v2.first_violation->t == 40.0);
    CHECK(v2.first_violation->distance == doctest::Approx(3.5).epsilon(1e-12));
}

}  // TEST_SUITE
