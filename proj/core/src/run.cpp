#include "cwplan/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "cwplan/constraints.hpp"
#include "cwplan/csv.hpp"
#include "cwplan/cw.hpp"
#include "cwplan/errors.hpp"
#include "cwplan/hash.hpp"
#include "cwplan/manifest.hpp"
#include "cwplan/planner.hpp"
#include "cwplan/reachability.hpp"
#include "cwplan/scenario.hpp"
#include "cwplan/spectral.hpp"
#include "cwplan/version.hpp"

namespace cwplan::io {

namespace {

using nlohmann::json;

constexpr double kPi = 3.141592653589793238462643383279502884;

double quiet_nan() { return std::numeric_limits<double>::quiet_NaN(); }

/// Accumulates output files and their manifest records in one directory.
struct Sink {
    std::filesystem::path dir;
    RunManifest manifest;

    void emit(const std::string& name, const Dataset& data) {
        const std::string text = render_csv(data);
        write_text_file(dir / name, text);
        manifest.outputs.push_back(
            OutputRecord{name, fnv1a64(text), text.size()});
    }
};

Vec3 vec3_req(const json& p, const char* key) {
    if (!p.contains(key)) {
        throw ValidationError(std::string("params needs \"") + key + "\"");
    }
    const json& v = p.at(key);
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() ||
        !v[1].is_number() || !v[2].is_number()) {
        throw ValidationError(std::string("params.") + key +
                              " must be a 3-element number array");
    }
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

double dbl_req(const json& p, const char* key) {
    if (!p.contains(key) || !p.at(key).is_number()) {
        throw ValidationError(std::string("params needs a numeric \"") + key +
                              "\"");
    }
    return p.at(key).get<double>();
}

int int_opt(const json& p, const char* key, int fallback) {
    if (!p.contains(key)) {
        return fallback;
    }
    if (!p.at(key).is_number_integer()) {
        throw ValidationError(std::string("params.") + key +
                              " must be an integer");
    }
    return p.at(key).get<int>();
}

double dbl_opt(const json& p, const char* key, double fallback) {
    if (!p.contains(key)) {
        return fallback;
    }
    if (!p.at(key).is_number()) {
        throw ValidationError(std::string("params.") + key +
                              " must be a number");
    }
    return p.at(key).get<double>();
}

std::vector<double> dbl_list_req(const json& p, const char* key) {
    if (!p.contains(key) || !p.at(key).is_array() || p.at(key).empty()) {
        throw ValidationError(std::string("params needs a nonempty array \"") +
                              key + "\"");
    }
    std::vector<double> out;
    for (const json& v : p.at(key)) {
        if (!v.is_number()) {
            throw ValidationError(std::string("params.") + key +
                                  " must contain numbers only");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

const char* kind_name(constraints::Kind kind) {
    switch (kind) {
    case constraints::Kind::shell:
        return "shell";
    case constraints::Kind::keep_out:
        return "keep_out";
    case constraints::Kind::equality:
        return "equality";
    }
    return "unknown";
}

// ---------------------------------------------------------------- propagate

int do_propagate(const Scenario& sc, const json& p, Sink& out) {
    const Vec3 r0 = vec3_req(p, "r0_km");
    const Vec3 v0 = vec3_req(p, "v0_km_s");
    const double t_end = dbl_req(p, "t_end_s");
    const int n = int_opt(p, "n_samples", 601);
    if (n < 2) {
        throw ValidationError("params.n_samples must be at least 2");
    }
    if (!(t_end > 0.0)) {
        throw ValidationError("params.t_end_s must be positive");
    }

    Dataset states;
    states.columns = {"t_s", "x_km",     "y_km",     "z_km",
                      "vx_km_s", "vy_km_s", "vz_km_s"};
    cw::Trajectory traj;
    traj.leg.r_i = r0;
    traj.leg.v_i_minus = v0;
    traj.leg.dt = t_end;
    for (int k = 0; k < n; ++k) {
        const double t =
            t_end * static_cast<double>(k) / static_cast<double>(n - 1);
        const cw::RelState s =
            cw::propagate(sc.orbit, cw::RelState{r0, v0, 0.0}, t);
        states.add_row({t, s.r.x(), s.r.y(), s.r.z(), s.v.x(), s.v.y(),
                        s.v.z()});
        traj.samples.emplace_back(t, s.r);
    }
    traj.leg.r_j = traj.samples.back().second;
    out.emit("states.csv", states);
    out.manifest.grids["n_samples"] = n;
    out.manifest.grids["t_end_s"] = t_end;

    bool all_satisfied = true;
    if (!sc.constraint_list.empty()) {
        Dataset verdicts;
        verdicts.columns = {"constraint", "kind", "satisfied",
                            "min_margin_km", "violation_t_s"};
        const double spacing = t_end / (n - 1) * (1.0 + 1e-9);
        for (std::size_t i = 0; i < sc.constraint_list.size(); ++i) {
            const auto& c = sc.constraint_list[i];
            const constraints::ConstraintVerdict v =
                constraints::check_trajectory(c, traj, spacing);
            all_satisfied = all_satisfied && v.satisfied;
            verdicts.add_row({static_cast<long long>(i), kind_name(c.kind()),
                              static_cast<long long>(v.satisfied),
                              v.min_margin,
                              v.first_violation ? v.first_violation->t
                                                : quiet_nan()});
        }
        out.emit("constraints.csv", verdicts);
    }
    return all_satisfied ? 0 : 3;
}

// -------------------------------------------------------------------- bound

int do_bound(const Scenario& sc, const json& p, Sink& out) {
    const Vec3 r_i = vec3_req(p, "r_i_km");
    const Vec3 r_j = vec3_req(p, "r_j_km");
    const std::vector<double> dt_grid = dbl_list_req(p, "dt_grid_s");
    const int n_samples = int_opt(p, "n_samples", 2000);
    if (n_samples < 2) {
        throw ValidationError("params.n_samples must be at least 2");
    }
    Vec3 axis(0.0, 1.0, 0.0);
    if (p.contains("axis")) {
        axis = vec3_req(p, "axis");
    }

    Dataset table;
    table.columns = {"dt_s",         "sigma",         "delta_km",
                     "max_sampled_km", "rho_minus_km", "rho_plus_x_km",
                     "rho_plus_y_km", "rho_plus_z_km", "c_theta"};
    for (double dt : dt_grid) {
        const spectral::SphereBound bound =
            spectral::sphere_bound(sc.orbit, r_i, r_j, dt);
        const cw::Trajectory traj = cw::sample_trajectory(
            sc.orbit,
            cw::solve_transfer(sc.orbit, r_i, r_j, Vec3::Zero(), dt,
                               sc.transfer),
            n_samples, sc.transfer);
        double max_norm = 0.0;
        for (const auto& [t, r] : traj.samples) {
            max_norm = std::max(max_norm, r.norm());
        }
        const spectral::Extents ext = spectral::measure_extents(traj);
        // rho_minus = 0 means the cone degenerates to the whole space.
        const double c_theta =
            ext.rho_minus > 0.0
                ? spectral::cone_bound(axis, ext.rho_minus, ext.rho_plus)
                      .c_theta
                : 1.0;
        table.add_row({dt, bound.sigma, bound.delta, max_norm, ext.rho_minus,
                       ext.rho_plus.x(), ext.rho_plus.y(), ext.rho_plus.z(),
                       c_theta});
    }
    out.emit("bound.csv", table);
    out.manifest.grids["n_samples"] = n_samples;
    out.manifest.grids["n_dt"] = static_cast<double>(dt_grid.size());

    if (p.contains("sweep")) {
        const json& sweep = p.at("sweep");
        if (!sweep.is_object()) {
            throw ValidationError("params.sweep must be an object");
        }
        const double r1_min = dbl_opt(sweep, "r1_min_km", 0.1);
        const double r1_max = dbl_opt(sweep, "r1_max_km", 5.0);
        const int n_r1 = int_opt(sweep, "n_r1", 50);
        const int n_psi = int_opt(sweep, "n_psi", 24);
        const int n_phi = int_opt(sweep, "n_phi", 12);
        const int n_leg = int_opt(sweep, "n_samples", 400);
        std::vector<double> fracs{0.5, 0.75};
        if (sweep.contains("window_fracs")) {
            fracs = dbl_list_req(sweep, "window_fracs");
        }
        if (!(r1_min > 0.0) || !(r1_max > r1_min) || n_r1 < 2 || n_psi < 1 ||
            n_phi < 2 || n_leg < 2) {
            throw ValidationError("params.sweep has out-of-range settings");
        }

        const double window = sc.orbit.max_dt();
        for (double frac : fracs) {
            const double t2 = frac * window;
            if (!(t2 >= sc.transfer.guard_s) ||
                !(t2 <= window - sc.transfer.guard_s)) {
                throw ValidationError(
                    "sweep window fraction leaves the admissible flight-time "
                    "window");
            }
            Dataset d;
            d.columns = {"r1_km", "max_reached_km", "delta_bound_km"};
            const double sigma = spectral::sigma_envelope(sc.orbit, t2);
            for (int a = 0; a < n_r1; ++a) {
                const double r1_norm =
                    r1_min + (r1_max - r1_min) * static_cast<double>(a) /
                                 static_cast<double>(n_r1 - 1);
                double max_reached = 0.0;
                for (int kp = 0; kp < n_psi; ++kp) {
                    const double psi = 2.0 * kPi * kp / n_psi;
                    for (int m = 0; m < n_phi; ++m) {
                        const double phi = -0.5 * kPi + kPi * m / (n_phi - 1);
                        const Vec3 dir(std::cos(phi) * std::cos(psi),
                                       std::cos(phi) * std::sin(psi),
                                       std::sin(phi));
                        const cw::LegEvaluator eval(sc.orbit, r1_norm * dir,
                                                    Vec3::Zero(), t2,
                                                    sc.transfer);
                        for (int s = 0; s <= n_leg; ++s) {
                            const double t = t2 * s / n_leg;
                            max_reached = std::max(
                                max_reached, eval.position(t).norm());
                        }
                    }
                }
                d.add_row({r1_norm, max_reached, sigma * r1_norm});
            }
            char name[48];
            std::snprintf(name, sizeof name, "sweep_t2_%02dpct.csv",
                          static_cast<int>(std::lround(frac * 100.0)));
            out.emit(name, d);
        }
        out.manifest.grids["sweep_n_r1"] = n_r1;
        out.manifest.grids["sweep_n_directions"] =
            static_cast<double>(n_psi) * n_phi;
        out.manifest.grids["sweep_n_samples"] = n_leg;
    }
    return 0;
}

// -------------------------------------------------------------------- reach

int do_reach(const Scenario& sc, const json& p, Sink& out) {
    const Vec3 r_i = vec3_req(p, "r_i_km");
    const Vec3 r_j = vec3_req(p, "r_j_km");
    const int t_res = int_opt(p, "t_res", 60);
    const int dt_res = int_opt(p, "dt_res", 60);

    const reach::ReachSurface surface =
        reach::reach_surface(sc.orbit, r_i, r_j, t_res, dt_res, sc.transfer);

    Dataset surf;
    surf.columns = {"t_s", "dt_s", "x_km", "y_km", "z_km"};
    for (const reach::ReachCurve& curve : surface.curves) {
        for (const auto& [dt, r] : curve.samples) {
            surf.add_row({curve.t, dt, r.x(), r.y(), r.z()});
        }
    }
    out.emit("surface.csv", surf);

    const auto leg_table = [](const cw::Trajectory& leg) {
        Dataset d;
        d.columns = {"t_s", "x_km", "y_km", "z_km"};
        for (const auto& [t, r] : leg.samples) {
            d.add_row({t, r.x(), r.y(), r.z()});
        }
        return d;
    };
    out.emit("boundary_min.csv", leg_table(surface.min_dt_leg));
    out.emit("boundary_max.csv", leg_table(surface.max_dt_leg));
    out.manifest.grids["t_res"] = t_res;
    out.manifest.grids["dt_res"] = dt_res;

    int code = 0;
    if (!sc.constraint_list.empty()) {
        const reach::ClearanceReport report = reach::boundary_clearance(
            sc.orbit, r_i, r_j, sc.constraint_list.front(), t_res, dt_res,
            std::nullopt, sc.transfer);
        Dataset d;
        d.columns = {"clear",          "min_inner_km",  "min_outer_km",
                     "max_spacing_km", "violation_t_s", "violation_dt_s"};
        d.add_row({static_cast<long long>(report.clear),
                   report.min_inner_distance, report.min_outer_distance,
                   report.max_sample_spacing,
                   report.first_violation ? report.first_violation->t
                                          : quiet_nan(),
                   report.first_violation ? report.first_violation->dt_total
                                          : quiet_nan()});
        out.emit("clearance.csv", d);
        if (!report.clear) {
            code = 3;
        }
    }

    if (p.contains("exclusion")) {
        if (sc.constraint_list.empty()) {
            throw ValidationError(
                "params.exclusion needs a constraint in the scenario");
        }
        const json& ex = p.at("exclusion");
        const reach::ExclusionReport report = reach::time_window_exclusion(
            sc.orbit, r_i, r_j, sc.constraint_list.front(),
            dbl_req(ex, "dt_a_s"), dbl_req(ex, "dt_b_s"),
            int_opt(ex, "n_scan", 200), int_opt(ex, "n_samples", 200),
            sc.transfer);
        const char* region = "none_found";
        if (report.certified == reach::ExclusionRegion::inside) {
            region = "inside";
        } else if (report.certified == reach::ExclusionRegion::outside) {
            region = "outside";
        }
        Dataset d;
        d.columns = {"certified_region", "dt_witness_s", "dt_a_s", "dt_b_s"};
        d.add_row({region, report.dt_witness, report.dt_a, report.dt_b});
        out.emit("exclusion.csv", d);
    }
    return code;
}

// ------------------------------------------------------------------- invert

int do_invert(const Scenario& sc, const json& p, Sink& out) {
    const Vec3 r_i = vec3_req(p, "r_i_km");
    const Vec3 r_j = vec3_req(p, "r_j_km");
    const Vec3 target = vec3_req(p, "r_target_km");

    const reach::InversionResult res =
        reach::invert_reach(sc.orbit, target, r_i, r_j, sc.transfer);
    Dataset d;
    d.columns = {"t_s", "dt_s", "residual_km", "status"};
    d.add_row({res.t, res.dt_total, res.residual,
               res.status == reach::InversionStatus::converged
                   ? "converged"
                   : "ambiguous_endpoint"});
    out.emit("inversion.csv", d);

    if (p.value("scan_basins", false)) {
        const int grid_n = int_opt(p, "grid_n", 200);
        const std::vector<reach::InversionResult> basins =
            reach::scan_inversion_basins(sc.orbit, target, r_i, r_j, grid_n,
                                         0.1, sc.transfer);
        Dataset b;
        b.columns = {"t_s", "dt_s", "residual_km"};
        for (const auto& root : basins) {
            b.add_row({root.t, root.dt_total, root.residual});
        }
        out.emit("basins.csv", b);
        out.manifest.grids["basin_grid_n"] = grid_n;
    }
    out.manifest.tolerances["inversion_residual_km"] = 1e-6;
    return 0;
}

// ----------------------------------------------------------------- plan-cfk

void add_map_csv(Sink& out, const std::string& name,
                 const planner::FeasibilityMap& map, bool with_coverage) {
    Dataset d;
    d.columns = {"beta_deg", "t_s", "verdict"};
    if (with_coverage) {
        d.columns.push_back("full_coverage");
        d.columns.push_back("witness_t2_s");
    }
    for (std::size_t ib = 0; ib < map.beta_deg.size(); ++ib) {
        for (std::size_t it = 0; it < map.t_s.size(); ++it) {
            const planner::MapCell& cell = map.at(ib, it);
            std::vector<Cell> row{map.beta_deg[ib], map.t_s[it],
                                  planner::to_string(cell.verdict)};
            if (with_coverage) {
                row.emplace_back(static_cast<long long>(cell.full_coverage));
                row.emplace_back(cell.witness_t2);
            }
            d.add_row(std::move(row));
        }
    }
    out.emit(name, d);
}

int do_plan_cfk(const Scenario& sc, const json& p, Sink& out) {
    planner::CfkScenario cfk = planner::CfkScenario::defaults(sc.orbit);
    cfk.transfer = sc.transfer;
    cfk.rho_inner = dbl_opt(p, "rho_inner_km", cfk.rho_inner);
    cfk.rho_outer = dbl_opt(p, "rho_outer_km", cfk.rho_outer);
    cfk.min_leg_samples = int_opt(p, "min_leg_samples", cfk.min_leg_samples);
    cfk.coverage_gap_deg = dbl_opt(p, "coverage_gap_deg", cfk.coverage_gap_deg);
    if (p.contains("beta_step_deg")) {
        const double step = dbl_req(p, "beta_step_deg");
        if (!(step > 0.0)) {
            throw ValidationError("params.beta_step_deg must be positive");
        }
        cfk.beta_grid_deg.clear();
        for (int k = 0; step * k <= 360.0; ++k) {
            cfk.beta_grid_deg.push_back(step * k);
        }
    }
    if (p.contains("time_step_s")) {
        const double step = dbl_req(p, "time_step_s");
        if (!(step > 0.0)) {
            throw ValidationError("params.time_step_s must be positive");
        }
        const double hi = sc.orbit.max_dt() - sc.transfer.guard_s;
        cfk.time_grid_s.clear();
        for (int k = 1; step * k <= hi; ++k) {
            cfk.time_grid_s.push_back(step * k);
        }
    }
    cfk.validate();

    const planner::FeasibilityMap two = planner::cfk_two_impulse_map(cfk);
    const planner::FeasibilityMap three = planner::cfk_three_impulse_map(cfk);
    add_map_csv(out, "map_two_impulse.csv", two, false);
    add_map_csv(out, "map_three_impulse.csv", three, true);

    // Region summary over the three-impulse map.
    struct Region {
        long long cells = 0;
        double bmin = std::numeric_limits<double>::infinity();
        double bmax = -std::numeric_limits<double>::infinity();
        double tmin = std::numeric_limits<double>::infinity();
        double tmax = -std::numeric_limits<double>::infinity();
        void tally(double b, double t) {
            ++cells;
            bmin = std::min(bmin, b);
            bmax = std::max(bmax, b);
            tmin = std::min(tmin, t);
            tmax = std::max(tmax, t);
        }
    };
    Region feasible, infeasible, unreach_two, unreach_both, covered, partial;
    long long n_feasible = 0;
    for (std::size_t ib = 0; ib < three.beta_deg.size(); ++ib) {
        for (std::size_t it = 0; it < three.t_s.size(); ++it) {
            const planner::MapCell& cell = three.at(ib, it);
            const double b = three.beta_deg[ib];
            const double t = three.t_s[it];
            switch (cell.verdict) {
            case planner::CellVerdict::feasible:
                feasible.tally(b, t);
                ++n_feasible;
                (cell.full_coverage ? covered : partial).tally(b, t);
                break;
            case planner::CellVerdict::infeasible:
                infeasible.tally(b, t);
                break;
            case planner::CellVerdict::unreachable_two_impulse:
                unreach_two.tally(b, t);
                break;
            case planner::CellVerdict::unreachable_two_and_three_impulse:
                unreach_both.tally(b, t);
                break;
            }
        }
    }
    Dataset summary;
    summary.columns = {"region",       "cells",   "beta_min_deg",
                       "beta_max_deg", "t_min_s", "t_max_s"};
    const auto add_region = [&](const char* name, const Region& r) {
        summary.add_row({name, r.cells, r.cells ? r.bmin : quiet_nan(),
                         r.cells ? r.bmax : quiet_nan(),
                         r.cells ? r.tmin : quiet_nan(),
                         r.cells ? r.tmax : quiet_nan()});
    };
    add_region("feasible", feasible);
    add_region("infeasible", infeasible);
    add_region("unreachable_two_impulse", unreach_two);
    add_region("unreachable_two_and_three_impulse", unreach_both);
    add_region("full_coverage", covered);
    add_region("partial_coverage", partial);
    out.emit("region_summary.csv", summary);

    out.manifest.grids["n_beta"] = static_cast<double>(cfk.beta_grid_deg.size());
    out.manifest.grids["n_time"] = static_cast<double>(cfk.time_grid_s.size());
    out.manifest.grids["min_leg_samples"] = cfk.min_leg_samples;
    out.manifest.tolerances["coverage_gap_deg"] = cfk.coverage_gap_deg;
    out.manifest.tolerances["rho_inner_km"] = cfk.rho_inner;
    out.manifest.tolerances["rho_outer_km"] = cfk.rho_outer;
    return n_feasible > 0 ? 0 : 3;
}

// ----------------------------------------------------------------- plan-cfm

int do_plan_cfm(const Scenario& sc, const json& p, Sink& out) {
    if (!p.contains("positions_km") || !p.at("positions_km").is_array() ||
        p.at("positions_km").size() < 2) {
        throw ValidationError(
            "params.positions_km must list at least two positions");
    }
    std::vector<Vec3> positions;
    for (std::size_t i = 0; i < p.at("positions_km").size(); ++i) {
        const json& v = p.at("positions_km")[i];
        if (!v.is_array() || v.size() != 3) {
            throw ValidationError("params.positions_km[" + std::to_string(i) +
                                  "] must be a 3-element array");
        }
        positions.emplace_back(v[0].get<double>(), v[1].get<double>(),
                               v[2].get<double>());
    }
    if (sc.constraint_list.empty()) {
        throw ValidationError("plan-cfm needs a keep-out constraint");
    }
    const double epsilon_s = dbl_opt(p, "epsilon_s", 1.0);
    const int n_samples = int_opt(p, "n_samples", 2000);

    const planner::TourPlan plan = planner::plan_clear_tour(
        sc.orbit, positions, sc.constraint_list.front(), epsilon_s, n_samples,
        sc.transfer);

    Dataset d;
    d.columns = {"leg",   "ax_km", "ay_km",        "az_km",      "bx_km",
                 "by_km", "bz_km", "chord_min_km", "far_min_km", "certified"};
    for (std::size_t k = 0; k < plan.legs.size(); ++k) {
        const planner::LegCertificate& leg = plan.legs[k];
        d.add_row({static_cast<long long>(k), leg.r_a.x(), leg.r_a.y(),
                   leg.r_a.z(), leg.r_b.x(), leg.r_b.y(), leg.r_b.z(),
                   leg.chord_min_distance, leg.far_min_distance,
                   static_cast<long long>(leg.certified)});
    }
    out.emit("plan.csv", d);
    out.manifest.grids["n_samples"] = n_samples;
    out.manifest.tolerances["epsilon_s"] = epsilon_s;

    if (p.contains("mission")) {
        const json& m = p.at("mission");
        if (!m.is_object()) {
            throw ValidationError("params.mission must be an object");
        }
        std::vector<double> dts;
        if (m.contains("leg_dt_s")) {
            dts = dbl_list_req(m, "leg_dt_s");
            if (dts.size() != plan.legs.size()) {
                throw ValidationError(
                    "params.mission.leg_dt_s must list one flight time per "
                    "leg (" +
                    std::to_string(plan.legs.size()) + ")");
            }
        } else {
            const double dt = dbl_req(m, "dt_s");
            dts.assign(plan.legs.size(), dt);
        }
        Vec3 v0 = Vec3::Zero();
        if (m.contains("v0_km_s")) {
            v0 = vec3_req(m, "v0_km_s");
        }
        std::vector<cw::TransferLeg> legs;
        for (std::size_t k = 0; k < plan.legs.size(); ++k) {
            cw::TransferLeg leg;
            leg.r_i = plan.legs[k].r_a;
            leg.r_j = plan.legs[k].r_b;
            leg.v_i_minus = k == 0 ? v0 : Vec3::Zero();
            leg.dt = dts[k];
            legs.push_back(leg);
        }
        const planner::MissionSummary mission =
            planner::assemble_mission(sc.orbit, legs, sc.transfer);

        Dataset impulses;
        impulses.columns = {"leg",        "t_s",        "dv_x_km_s",
                            "dv_y_km_s",  "dv_z_km_s",  "dv_mag_km_s",
                            "delta_km"};
        for (std::size_t k = 0; k < mission.legs.size(); ++k) {
            impulses.add_row({static_cast<long long>(k),
                              mission.impulse_times[k], mission.legs[k].dv.x(),
                              mission.legs[k].dv.y(), mission.legs[k].dv.z(),
                              mission.dv_mags[k], mission.leg_delta[k]});
        }
        out.emit("impulses.csv", impulses);

        Dataset summary;
        summary.columns = {"n_legs",      "total_dv_km_s", "envelope_km",
                           "vf_x_km_s",   "vf_y_km_s",     "vf_z_km_s"};
        summary.add_row({static_cast<long long>(mission.legs.size()),
                         mission.total_dv, mission.envelope,
                         mission.v_final.x(), mission.v_final.y(),
                         mission.v_final.z()});
        out.emit("mission.csv", summary);
    }
    return plan.certified ? 0 : 3;
}

// ------------------------------------------------------------- verify-facts

int do_verify_facts(const Scenario& sc, const json& p, Sink& out) {
    const int grid_n = int_opt(p, "grid_n", 50);
    const spectral::FactsReport report =
        spectral::verify_spectral_facts(sc.orbit, grid_n);
    Dataset d;
    d.columns = {"check", "pass", "worst_error"};
    for (const spectral::FactCheck& check : report.checks) {
        d.add_row({check.name, static_cast<long long>(check.pass),
                   check.worst_error});
    }
    out.emit("facts.csv", d);
    out.manifest.grids["grid_n"] = grid_n;
    return report.all_pass ? 0 : 3;
}

int classify(const Error& e) {
    if (dynamic_cast<const IoError*>(&e) != nullptr) {
        return 4;
    }
    if (dynamic_cast<const Unreachable*>(&e) != nullptr ||
        dynamic_cast<const NoWitness*>(&e) != nullptr ||
        dynamic_cast<const BoundaryNotClear*>(&e) != nullptr ||
        dynamic_cast<const EndpointInside*>(&e) != nullptr ||
        dynamic_cast<const ChainBroken*>(&e) != nullptr) {
        return 3;
    }
    if (dynamic_cast<const ValidationError*>(&e) != nullptr ||
        dynamic_cast<const DtOutOfRange*>(&e) != nullptr ||
        dynamic_cast<const SingularTransfer*>(&e) != nullptr ||
        dynamic_cast<const NotSymmetric*>(&e) != nullptr ||
        dynamic_cast<const BadAxis*>(&e) != nullptr ||
        dynamic_cast<const AllZero*>(&e) != nullptr ||
        dynamic_cast<const EmptyList*>(&e) != nullptr ||
        dynamic_cast<const BadGrid*>(&e) != nullptr ||
        dynamic_cast<const InsufficientSampling*>(&e) != nullptr) {
        return 2;
    }
    return 1;
}

} // namespace

int run(const std::string& subcommand, const std::string& scenario_path,
        const RunOptions& options) {
    try {
        const Scenario sc = load_scenario(scenario_path, options.overrides);
        if (sc.mode != subcommand) {
            throw ValidationError("scenario mode '" + sc.mode +
                                  "' does not match subcommand '" +
                                  subcommand + "'");
        }
        Sink out;
        out.dir = options.out_dir.empty() ? sc.out_dir : options.out_dir;
        std::error_code ec;
        std::filesystem::create_directories(out.dir, ec);
        if (ec) {
            throw IoError("cannot create output directory " +
                          out.dir.string() + ": " + ec.message());
        }
        out.manifest.tool_version = kVersion;
        out.manifest.subcommand = subcommand;
        out.manifest.scenario_hash = sc.hash();

        const json params = json::parse(sc.params_json);
        int code = 0;
        if (subcommand == "propagate") {
            code = do_propagate(sc, params, out);
        } else if (subcommand == "bound") {
            code = do_bound(sc, params, out);
        } else if (subcommand == "reach") {
            code = do_reach(sc, params, out);
        } else if (subcommand == "invert") {
            code = do_invert(sc, params, out);
        } else if (subcommand == "plan-cfk") {
            code = do_plan_cfk(sc, params, out);
        } else if (subcommand == "plan-cfm") {
            code = do_plan_cfm(sc, params, out);
        } else if (subcommand == "verify-facts") {
            code = do_verify_facts(sc, params, out);
        } else {
            throw ValidationError("unknown subcommand '" + subcommand + "'");
        }

        out.manifest.timestamp = current_utc_timestamp();
        write_manifest(out.manifest, out.dir);
        return code;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return classify(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 1;
    }
}

} // namespace cwplan::io
