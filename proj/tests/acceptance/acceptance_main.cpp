// Acceptance gate: nine end-to-end criteria with pinned tolerances and time
// budgets. Each prints exactly one [PASS]/[FAIL] line; the process exits
// nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cwplan/constraints.hpp"
#include "cwplan/cw.hpp"
#include "cwplan/planner.hpp"
#include "cwplan/reachability.hpp"
#include "cwplan/spectral.hpp"
#include "oracles.hpp"

using namespace cwplan;
namespace fs = std::filesystem;

namespace {

struct Failure {
    std::string msg;
};

void require(bool cond, const std::string& msg) {
    if (!cond) throw Failure{msg};
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

cw::OrbitParams leo() { return cw::OrbitParams::from_altitude(400.0); }
cw::OrbitParams study() { return cw::OrbitParams::from_mean_motion(1.1e-3); }

// --- criterion bodies ----------------------------------------------------

void spherical_bound_pinned_values() {
    const auto p = leo();
    const Vec3 r_i(1, 0, 0), r_j(0, 1, 0);
    for (double dt : {200.0, 1000.0}) {
        const auto b = spectral::sphere_bound(p, r_i, r_j, dt);
        require(b.sigma == 1.0,
                "sigma must be exactly 1 below the half window (dt=" +
                    fmt(dt) + ")");
        require(b.delta == std::sqrt(2.0),
                "delta must be exactly sqrt(2) for unit waypoints (dt=" +
                    fmt(dt) + ")");
    }
    const auto b = spectral::sphere_bound(study(), r_i, r_j, 1700.0);
    const double ratio = b.delta / std::sqrt(2.0);
    require(ratio >= 1.19 * 0.95 && ratio <= 1.19 * 1.05,
            "delta/sqrt(2) at 1700 s must sit within 5% of 1.19, got " +
                fmt(ratio));
}

void cone_aperture_pinned_values() {
    const auto c = spectral::cone_bound(Vec3(0, 1, 0), 0.9, Vec3(1, 0.5, 0));
    require(std::abs(c.c_theta - 5.0 / 9.0) <= 1e-12,
            "aperture for (e_y, 0.9, [1, 0.5, 0]) must be 5/9, got " +
                fmt(c.c_theta));
    const spectral::ConeBound saturated[] = {
        spectral::cone_bound(Vec3(0, 1, 0), 0.5, Vec3(1, 0.9, 0)),
        spectral::cone_bound(Vec3(1, 0, 0), 0.9, Vec3(1, 1.1, 0)),
        spectral::cone_bound(Vec3(1, 0, 0), 1.0, Vec3(1, 1.0, 0)),
    };
    for (const auto& s : saturated) {
        require(s.c_theta == 1.0, "saturated apertures must clamp exactly to 1");
    }
}

void spectral_identity_suite() {
    for (const auto& p : {study(), leo()}) {
        const auto report = spectral::verify_spectral_facts(p, 50);
        require(report.checks.size() == 7, "expected seven named checks");
        for (const auto& c : report.checks) {
            require(c.pass, "check '" + c.name + "' failed: " + c.detail +
                                " (worst error " + fmt(c.worst_error) + ")");
        }
        require(report.all_pass, "aggregate flag must be set");
    }
}

void norm_bound_on_random_scenarios() {
    const auto p = leo();
    std::mt19937 rng(90210u);
    double best_ratio[2] = {0.0, 0.0};
    for (int i = 0; i < 500; ++i) {
        const double radius = oracle::uniform(rng, 0.1, 5.0);
        const Vec3 r_1 = oracle::random_unit(rng) * radius;
        const Vec3 r_2 = Vec3::Zero();
        const int cls = i % 2;
        const double dt = (cls == 0 ? 0.5 : 0.75) * M_PI / p.kappa;

        const auto bound = spectral::sphere_bound(p, r_1, r_2, dt);
        const cw::LegEvaluator eval(p, r_1, r_2, dt);
        double max_norm = 0.0;
        for (int k = 0; k <= 2000; ++k) {
            max_norm = std::max(max_norm, eval.position(dt * k / 2000.0).norm());
        }
        require(max_norm <= bound.delta + 1e-9,
                "sampled norm " + fmt(max_norm) + " exceeded the bound " +
                    fmt(bound.delta));
        best_ratio[cls] = std::max(best_ratio[cls], max_norm / bound.delta);
    }
    for (int cls = 0; cls < 2; ++cls) {
        require(best_ratio[cls] >= 0.5,
                "the bound must be within 2x of attained norms somewhere "
                "(class " + fmt(cls) + " best ratio " + fmt(best_ratio[cls]) +
                    ")");
    }
}

void inversion_recovers_time_pairs() {
    const auto p = leo();
    const Vec3 r_i(1, 0, 0), r_j(0, 2, 0);
    std::mt19937 rng(777u);
    for (int i = 0; i < 500; ++i) {
        const double dt = oracle::uniform(rng, 300.0, p.max_dt() - 300.0);
        const double t = oracle::uniform(rng, 0.15 * dt, 0.85 * dt);
        const Vec3 target = cw::trajectory_position(p, r_i, r_j, dt, t);
        const auto res = reach::invert_reach(p, target, r_i, r_j);
        require(res.status == reach::InversionStatus::converged,
                "inversion " + fmt(i) + " did not converge");
        require(std::abs(res.t - t) <= 0.1 &&
                    std::abs(res.dt_total - dt) <= 0.1,
                "inversion " + fmt(i) + " missed the generator: got (" +
                    fmt(res.t) + ", " + fmt(res.dt_total) + ") want (" +
                    fmt(t) + ", " + fmt(dt) + ")");
    }
    for (int i = 0; i < 10; ++i) {
        const double dt = oracle::uniform(rng, 500.0, p.max_dt() - 500.0);
        const double t = oracle::uniform(rng, 0.25 * dt, 0.75 * dt);
        const Vec3 target = cw::trajectory_position(p, r_i, r_j, dt, t);
        const auto basins =
            reach::scan_inversion_basins(p, target, r_i, r_j, 500);
        require(basins.size() == 1,
                "expected a single basin, found " + fmt(basins.size()));
        require(basins[0].residual <= 1e-6,
                "basin residual " + fmt(basins[0].residual) + " too large");
    }
}

void certificates_hold_for_all_flight_times() {
    const auto p = study();
    constraints::PathConstraint ball;
    ball.rho_inner = 0.5;

    const auto good = planner::certify_leg_always_clear(p, Vec3(1, 0, 0),
                                                        Vec3(0, -1, 0), ball);
    require(good.certified, "the with-circulation leg must certify");
    const auto bad = planner::certify_leg_always_clear(p, Vec3(1, 0, 0),
                                                       Vec3(0, 1, 0), ball);
    require(!bad.certified, "the against-circulation leg must not certify");

    const std::vector<Vec3> square{Vec3(1, 0, 0), Vec3(0, -1, 0),
                                   Vec3(-1, 0, 0), Vec3(0, 1, 0)};
    const auto tour = planner::plan_clear_tour(p, square, ball);
    require(tour.certified && tour.legs.size() == 4,
            "the four-waypoint tour must certify all four legs");

    std::mt19937 rng(4242u);
    int violations = 0;
    for (const auto& leg : tour.legs) {
        for (int trial = 0; trial < 100; ++trial) {
            const double dt = oracle::uniform(rng, 2.0, p.max_dt() - 1.0);
            const cw::LegEvaluator eval(p, leg.r_a, leg.r_b, dt);
            for (int k = 0; k <= 2000; ++k) {
                if (eval.position(dt * k / 2000.0).norm() < ball.rho_inner) {
                    ++violations;
                    break;
                }
            }
        }
    }
    require(violations == 0,
            fmt(violations) + " of 400 random flight times broke a certified leg");
}

void formation_map_regions() {
    const auto sc = planner::CfkScenario::defaults(study());
    const auto two = planner::cfk_two_impulse_map(sc);
    const auto three = planner::cfk_three_impulse_map(sc);

    double full_lo = 1e300, full_hi = -1e300;
    double partial_hi = -1e300;
    std::vector<int> unreachable_return_cols, unreachable_both_cols;
    for (std::size_t ib = 0; ib < three.beta_deg.size(); ++ib) {
        const auto v0 = three.at(ib, 0).verdict;
        if (v0 == planner::CellVerdict::unreachable_two_and_three_impulse) {
            unreachable_both_cols.push_back(static_cast<int>(ib));
        }
        if (v0 == planner::CellVerdict::unreachable_two_impulse) {
            unreachable_return_cols.push_back(static_cast<int>(ib));
        }
        for (std::size_t it = 0; it < three.t_s.size(); ++it) {
            const auto& cell = three.at(ib, it);
            if (cell.verdict != planner::CellVerdict::feasible) continue;
            if (cell.full_coverage) {
                full_lo = std::min(full_lo, three.t_s[it]);
                full_hi = std::max(full_hi, three.t_s[it]);
            } else {
                partial_hi = std::max(partial_hi, three.t_s[it]);
            }
        }
    }

    require(full_lo <= full_hi, "no full-coverage cells found");
    require(full_lo >= 1491.5 && full_lo <= 1648.5,
            "full-coverage return times must start near 1570 s +- 5%, got " +
                fmt(full_lo));
    require(full_hi >= 1767.0 && full_hi <= 1953.0,
            "full-coverage return times must end near 1860 s +- 5%, got " +
                fmt(full_hi));
    require(partial_hi <= 777.0,
            "partial-coverage cells must end by 740 s + 5%, got " +
                fmt(partial_hi));

    // Both unreachable families must be nonempty contiguous angle bands.
    for (const auto* cols : {&unreachable_both_cols, &unreachable_return_cols}) {
        require(!cols->empty(), "expected a nonempty unreachable angle band");
        for (std::size_t k = 1; k < cols->size(); ++k) {
            require((*cols)[k] == (*cols)[k - 1] + 1,
                    "unreachable angle band must be contiguous");
        }
    }

    // The two maps agree on which angles cannot be reached at all.
    for (std::size_t ib = 0; ib < two.beta_deg.size(); ++ib) {
        const bool two_unreachable =
            two.at(ib, 0).verdict ==
            planner::CellVerdict::unreachable_two_impulse;
        const bool three_unreachable =
            three.at(ib, 0).verdict ==
            planner::CellVerdict::unreachable_two_and_three_impulse;
        require(two_unreachable == three_unreachable,
                "outbound reachability must agree between the maps at column " +
                    fmt(ib));
    }
}

void interior_positions_match_rk4() {
    const auto p = leo();
    std::mt19937 rng(31337u);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Vec3 r_i = oracle::uniform_vec3(rng, -5.0, 5.0);
        const Vec3 r_j = oracle::uniform_vec3(rng, -5.0, 5.0);
        const double dt = oracle::uniform(rng, 10.0, p.max_dt() - 50.0);
        const double t = oracle::uniform(rng, 0.0, dt);

        const Vec3 dv = cw::impulse_for_transfer(p, r_i, r_j, Vec3::Zero(), dt);
        const int steps = std::max(200, static_cast<int>(t / 2.0));
        const auto ref = oracle::rk4_propagate(
            p.kappa, oracle::pack_state(r_i, dv), t, steps);
        const Vec3 pos = cw::trajectory_position(p, r_i, r_j, dt, t);
        worst = std::max(worst, (pos - ref.head<3>()).norm());
    }
    require(worst <= 1e-6,
            "worst closed-form vs RK4 deviation " + fmt(worst) + " km");
}

std::string slurp_or_fail(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "missing expected output " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void cli_runs_are_reproducible() {
    const char* cli = std::getenv("CWPLAN_CLI");
    const char* scenario_dir = std::getenv("CWPLAN_SCENARIO_DIR");
    require(cli != nullptr, "CWPLAN_CLI must point at the cwplan binary");
    require(scenario_dir != nullptr,
            "CWPLAN_SCENARIO_DIR must point at the scenario directory");
    const fs::path scenario = fs::path(scenario_dir) / "plan-cfk.json";
    require(fs::exists(scenario), "missing scenario " + scenario.string());

    const fs::path base = fs::temp_directory_path() / "cwplan_acceptance";
    fs::remove_all(base);
    const fs::path out_a = base / "a";
    const fs::path out_b = base / "b";
    for (const auto& out : {out_a, out_b}) {
        const std::string cmd = std::string("\"") + cli +
                                "\" plan-cfk --scenario \"" +
                                scenario.string() + "\" --out \"" +
                                out.string() + "\" > /dev/null 2>&1";
        const int rc = std::system(cmd.c_str());
        require(rc == 0, "CLI run into " + out.string() +
                             " exited with status " + fmt(rc));
    }
    for (const char* name : {"map_two_impulse.csv", "map_three_impulse.csv",
                             "region_summary.csv"}) {
        const std::string a = slurp_or_fail(out_a / name);
        const std::string b = slurp_or_fail(out_b / name);
        require(!a.empty(), std::string(name) + " is empty");
        require(a == b, std::string(name) + " differs between identical runs");
    }
    fs::remove_all(base);
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double budget_s;
        std::function<void()> body;
    };
    const std::vector<Criterion> criteria = {
        {"spherical bound pinned values", 1.0, spherical_bound_pinned_values},
        {"cone aperture pinned values", 1.0, cone_aperture_pinned_values},
        {"spectral identity suite on a 50x50 grid", 30.0,
         spectral_identity_suite},
        {"norm bound sound and tight on 500 random scenarios", 60.0,
         norm_bound_on_random_scenarios},
        {"inversion recovers 500 time pairs with single basins", 120.0,
         inversion_recovers_time_pairs},
        {"flight-time-independent certificates survive stress", 60.0,
         certificates_hold_for_all_flight_times},
        {"formation map regions match the published study", 600.0,
         formation_map_regions},
        {"interior positions match RK4 on 1000 legs", 60.0,
         interior_positions_match_rk4},
        {"identical CLI runs produce byte-identical tables", 120.0,
         cli_runs_are_reproducible},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        const auto start = std::chrono::steady_clock::now();
        std::string error;
        try {
            c.body();
        } catch (const Failure& f) {
            error = f.msg;
        } catch (const std::exception& e) {
            error = std::string("unexpected exception: ") + e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        if (error.empty() && elapsed > c.budget_s) {
            error = "exceeded the " + fmt(c.budget_s) + " s budget";
        }
        if (error.empty()) {
            std::printf("[PASS] %zu. %s (%.2f s)\n", i + 1, c.name, elapsed);
        } else {
            std::printf("[FAIL] %zu. %s (%.2f s): %s\n", i + 1, c.name,
                        elapsed, error.c_str());
            ++failures;
        }
        std::fflush(stdout);
    }
    if (failures > 0) {
        std::printf("%d of %zu acceptance criteria failed\n", failures,
                    criteria.size());
        return 1;
    }
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
    return 0;
}
