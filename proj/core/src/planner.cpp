#include "cwplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>

#include "cwplan/hash.hpp"
#include "cwplan/parallel.hpp"
#include "cwplan/spectral.hpp"

namespace cwplan::planner {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kStudyStepS = 10.0;  ///< sampling cadence of the ring study

double quiet_nan() { return std::numeric_limits<double>::quiet_NaN(); }

Vec3 ring_point(double beta_deg) {
    const double b = beta_deg * kPi / 180.0;
    return {std::cos(b), std::sin(b), 0.0};
}

int sample_count(double dt, int min_leg_samples) {
    return std::max(min_leg_samples,
                    static_cast<int>(dt / kStudyStepS) + 1);
}

/// Sample the leg; false as soon as a sample leaves the shell. When angles
/// is given and the leg is feasible, it receives the sorted in-plane polar
/// angles (deg, [0, 360)) of all samples.
bool leg_in_shell(const CfkScenario& sc, const Vec3& r_a, const Vec3& r_b,
                  double dt, std::vector<double>* angles) {
    const cw::LegEvaluator eval(sc.orbit, r_a, r_b, dt, sc.transfer);
    const int n = sample_count(dt, sc.min_leg_samples);
    if (angles != nullptr) {
        angles->clear();
        angles->reserve(static_cast<std::size_t>(n));
    }
    for (int k = 0; k < n; ++k) {
        const double t =
            dt * static_cast<double>(k) / static_cast<double>(n - 1);
        const Vec3 r = eval.position(t);
        const double d = r.norm();
        if (d < sc.rho_inner || d > sc.rho_outer) {
            return false;
        }
        if (angles != nullptr) {
            double a = std::atan2(r.y(), r.x()) * (180.0 / kPi);
            if (a < 0.0) {
                a += 360.0;
            }
            angles->push_back(a);
        }
    }
    if (angles != nullptr) {
        std::sort(angles->begin(), angles->end());
    }
    return true;
}

double max_circular_gap_deg(const std::vector<double>& sorted) {
    if (sorted.empty()) {
        return 360.0;
    }
    double worst = 360.0 - sorted.back() + sorted.front();
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        worst = std::max(worst, sorted[i] - sorted[i - 1]);
    }
    return worst;
}

/// Largest circular gap of the union of two sorted angle lists, without
/// materializing the merge.
double merged_circular_gap_deg(const std::vector<double>& a,
                               const std::vector<double>& b) {
    if (a.empty()) {
        return max_circular_gap_deg(b);
    }
    if (b.empty()) {
        return max_circular_gap_deg(a);
    }
    std::size_t i = 0;
    std::size_t j = 0;
    const double first = std::min(a.front(), b.front());
    double prev = first;
    double worst = 0.0;
    while (i < a.size() || j < b.size()) {
        double v;
        if (i < a.size() && (j >= b.size() || a[i] <= b[j])) {
            v = a[i++];
        } else {
            v = b[j++];
        }
        worst = std::max(worst, v - prev);
        prev = v;
    }
    return std::max(worst, 360.0 - prev + first);
}

FeasibilityMap map_skeleton(const CfkScenario& sc, int n_impulses) {
    FeasibilityMap map;
    map.beta_deg = sc.beta_grid_deg;
    map.t_s = sc.time_grid_s;
    map.n_impulses = n_impulses;
    map.scenario_hash = sc.hash();
    map.cells.assign(map.beta_deg.size() * map.t_s.size(), MapCell{});
    return map;
}

} // namespace

CfkScenario CfkScenario::defaults(const cw::OrbitParams& orbit) {
    CfkScenario sc;
    sc.orbit = orbit;
    sc.beta_grid_deg.reserve(361);
    for (int b = 0; b <= 360; ++b) {
        sc.beta_grid_deg.push_back(static_cast<double>(b));
    }
    const double hi = kPi / orbit.kappa - sc.transfer.guard_s;
    for (int k = 1; 10.0 * k <= hi; ++k) {
        sc.time_grid_s.push_back(10.0 * k);
    }
    return sc;
}

void CfkScenario::validate() const {
    if (!(orbit.kappa > 0.0)) {
        throw ValidationError("orbit rate must be positive");
    }
    if (!(rho_inner > 0.0) || !(rho_inner < 1.0) || !(rho_outer > 1.0)) {
        throw ValidationError(
            "ring shell must satisfy 0 < rho_inner < 1 < rho_outer");
    }
    if (beta_grid_deg.empty() || time_grid_s.empty()) {
        throw ValidationError("angle and time grids must be nonempty");
    }
    const double lo = transfer.guard_s;
    const double hi = kPi / orbit.kappa - transfer.guard_s;
    for (double t : time_grid_s) {
        if (!(t >= lo) || !(t <= hi)) {
            throw ValidationError(
                "every flight time must lie inside the conditioning guard "
                "window");
        }
    }
    if (min_leg_samples < 2) {
        throw ValidationError("need at least two samples per leg");
    }
    if (!(coverage_gap_deg > 0.0)) {
        throw ValidationError("coverage gap must be positive");
    }
}

std::uint64_t CfkScenario::hash() const {
    std::string blob;
    blob.reserve(32 * (beta_grid_deg.size() + time_grid_s.size() + 16));
    char buf[40];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g;", v);
        blob += buf;
    };
    put(orbit.mu);
    put(orbit.a_ts);
    put(orbit.kappa);
    put(rho_inner);
    put(rho_outer);
    put(static_cast<double>(min_leg_samples));
    put(coverage_gap_deg);
    put(transfer.guard_s);
    put(transfer.max_condition);
    put(static_cast<double>(beta_grid_deg.size()));
    for (double b : beta_grid_deg) {
        put(b);
    }
    put(static_cast<double>(time_grid_s.size()));
    for (double t : time_grid_s) {
        put(t);
    }
    return fnv1a64(blob);
}

const char* to_string(CellVerdict verdict) {
    switch (verdict) {
    case CellVerdict::feasible:
        return "feasible";
    case CellVerdict::infeasible:
        return "infeasible";
    case CellVerdict::unreachable_two_impulse:
        return "unreachable_two_impulse";
    case CellVerdict::unreachable_two_and_three_impulse:
        return "unreachable_two_and_three_impulse";
    }
    return "unknown";
}

FeasibilityMap cfk_two_impulse_map(const CfkScenario& scenario) {
    scenario.validate();
    FeasibilityMap map = map_skeleton(scenario, 2);
    const std::size_t nt = map.t_s.size();
    const Vec3 home = ring_point(0.0);

    parallel_for(map.beta_deg.size(), [&](std::size_t ib) {
        const Vec3 target = ring_point(map.beta_deg[ib]);
        bool any_feasible = false;
        for (std::size_t it = 0; it < nt; ++it) {
            MapCell& cell = map.cells[ib * nt + it];
            cell.witness_t2 = quiet_nan();
            const bool ok =
                leg_in_shell(scenario, home, target, map.t_s[it], nullptr);
            cell.verdict = ok ? CellVerdict::feasible : CellVerdict::infeasible;
            any_feasible = any_feasible || ok;
        }
        if (!any_feasible) {
            for (std::size_t it = 0; it < nt; ++it) {
                map.cells[ib * nt + it].verdict =
                    CellVerdict::unreachable_two_impulse;
            }
        }
    });
    return map;
}

FeasibilityMap cfk_three_impulse_map(const CfkScenario& scenario) {
    scenario.validate();
    FeasibilityMap map = map_skeleton(scenario, 3);
    const std::size_t nt = map.t_s.size();
    const Vec3 home = ring_point(0.0);

    parallel_for(map.beta_deg.size(), [&](std::size_t ib) {
        const Vec3 target = ring_point(map.beta_deg[ib]);
        MapCell* row = &map.cells[ib * nt];
        for (std::size_t it = 0; it < nt; ++it) {
            row[it].witness_t2 = quiet_nan();
        }

        // Feasible outbound flight times, cheapest coverage first.
        struct Candidate {
            double t2;
            double own_gap;
            std::vector<double> angles;
        };
        std::vector<Candidate> outbound;
        for (double t2 : scenario.time_grid_s) {
            std::vector<double> angles;
            if (leg_in_shell(scenario, home, target, t2, &angles)) {
                const double gap = max_circular_gap_deg(angles);
                outbound.push_back(Candidate{t2, gap, std::move(angles)});
            }
        }
        if (outbound.empty()) {
            for (std::size_t it = 0; it < nt; ++it) {
                row[it].verdict =
                    CellVerdict::unreachable_two_and_three_impulse;
            }
            return;
        }
        std::stable_sort(outbound.begin(), outbound.end(),
                         [](const Candidate& a, const Candidate& b) {
                             if (a.own_gap != b.own_gap) {
                                 return a.own_gap < b.own_gap;
                             }
                             return a.t2 < b.t2;
                         });

        bool any_return = false;
        std::vector<double> return_angles;
        for (std::size_t it = 0; it < nt; ++it) {
            MapCell& cell = row[it];
            if (!leg_in_shell(scenario, target, home, map.t_s[it],
                              &return_angles)) {
                cell.verdict = CellVerdict::infeasible;
                continue;
            }
            any_return = true;
            cell.verdict = CellVerdict::feasible;
            for (const Candidate& c : outbound) {
                if (merged_circular_gap_deg(c.angles, return_angles) <=
                    scenario.coverage_gap_deg) {
                    cell.full_coverage = true;
                    cell.witness_t2 = c.t2;
                    break;
                }
            }
        }
        if (!any_return) {
            for (std::size_t it = 0; it < nt; ++it) {
                row[it].verdict = CellVerdict::unreachable_two_impulse;
                row[it].full_coverage = false;
                row[it].witness_t2 = quiet_nan();
            }
        }
    });
    return map;
}

LegCertificate certify_leg_always_clear(const cw::OrbitParams& params,
                                        const Vec3& r_a, const Vec3& r_b,
                                        const constraints::PathConstraint& keep_out,
                                        double epsilon_s, int n_samples,
                                        const cw::TransferConfig& cfg) {
    keep_out.validate();
    if (keep_out.kind() != constraints::Kind::keep_out) {
        throw ValidationError(
            "flight-time-independent certificates need a pure keep-out ball");
    }
    if (!(epsilon_s > 0.0)) {
        throw ValidationError("epsilon must be positive");
    }
    if (n_samples < 2) {
        throw ValidationError("need at least two samples on the long leg");
    }
    const double da = (r_a - keep_out.center).norm();
    const double db = (r_b - keep_out.center).norm();
    if (da < keep_out.rho_inner || db < keep_out.rho_inner) {
        throw EndpointInside("a waypoint lies inside the keep-out ball");
    }

    LegCertificate cert;
    cert.r_a = r_a;
    cert.r_b = r_b;

    // Short-flight-time limit: the leg degenerates to the chord, whose
    // minimum distance to the ball center is available in closed form.
    const Vec3 u = r_b - r_a;
    const double uu = u.squaredNorm();
    double s = 0.0;
    if (uu > 0.0) {
        s = std::clamp((keep_out.center - r_a).dot(u) / uu, 0.0, 1.0);
    }
    cert.chord_min_distance = (r_a + s * u - keep_out.center).norm();

    const double dt = kPi / params.kappa - epsilon_s;
    const cw::LegEvaluator eval(params, r_a, r_b, dt, cfg);
    double dmin = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= n_samples; ++k) {
        const double t =
            dt * static_cast<double>(k) / static_cast<double>(n_samples);
        dmin = std::min(dmin, (eval.position(t) - keep_out.center).norm());
    }
    cert.far_min_distance = dmin;

    cert.certified = cert.chord_min_distance >= keep_out.rho_inner &&
                     cert.far_min_distance >= keep_out.rho_inner;
    return cert;
}

TourPlan plan_clear_tour(const cw::OrbitParams& params,
                         const std::vector<Vec3>& positions,
                         const constraints::PathConstraint& keep_out,
                         double epsilon_s, int n_samples,
                         const cw::TransferConfig& cfg) {
    if (positions.size() < 2) {
        throw ValidationError("a tour needs at least two positions");
    }
    TourPlan plan;
    plan.positions = positions;
    plan.keep_out = keep_out;
    plan.epsilon_s = epsilon_s;
    plan.certified = true;

    auto add_leg = [&](const Vec3& a, const Vec3& b) {
        plan.legs.push_back(certify_leg_always_clear(params, a, b, keep_out,
                                                     epsilon_s, n_samples, cfg));
        plan.certified = plan.certified && plan.legs.back().certified;
    };
    for (std::size_t i = 0; i + 1 < positions.size(); ++i) {
        add_leg(positions[i], positions[i + 1]);
    }
    if ((positions.back() - positions.front()).norm() > 0.0) {
        add_leg(positions.back(), positions.front());
    }
    return plan;
}

MissionSummary assemble_mission(const cw::OrbitParams& params,
                                const std::vector<cw::TransferLeg>& legs,
                                const cw::TransferConfig& cfg) {
    if (legs.empty()) {
        throw EmptyList("a mission needs at least one leg");
    }
    MissionSummary mission;
    mission.legs.reserve(legs.size());
    mission.impulse_times.reserve(legs.size());
    mission.dv_mags.reserve(legs.size());
    mission.leg_delta.reserve(legs.size());

    const double half_window = 0.5 * kPi / params.kappa;
    Vec3 v_minus = legs.front().v_i_minus;
    double clock = 0.0;
    double max_radius = legs.front().r_i.norm();
    bool all_below_half = true;

    for (std::size_t k = 0; k < legs.size(); ++k) {
        const cw::TransferLeg& leg = legs[k];
        if (k > 0 && (leg.r_i - legs[k - 1].r_j).norm() > 1e-9) {
            throw ChainBroken("legs " + std::to_string(k - 1) + " and " +
                              std::to_string(k) +
                              " disagree on the shared waypoint");
        }
        const cw::TransferLeg solved =
            cw::solve_transfer(params, leg.r_i, leg.r_j, v_minus, leg.dt, cfg);
        mission.legs.push_back(solved);
        mission.impulse_times.push_back(clock);
        mission.dv_mags.push_back(solved.dv.norm());
        mission.total_dv += solved.dv.norm();
        mission.leg_delta.push_back(
            spectral::sphere_bound(params, leg.r_i, leg.r_j, leg.dt).delta);

        const cw::StmBlocks blocks = cw::stm_blocks(params, leg.dt);
        v_minus = blocks.f_vr * leg.r_i + blocks.f_vv * (v_minus + solved.dv);
        clock += leg.dt;
        max_radius = std::max(max_radius, leg.r_j.norm());
        all_below_half = all_below_half && leg.dt <= half_window;
    }
    mission.v_final = v_minus;
    mission.envelope = (all_below_half && max_radius > 0.0)
                           ? std::sqrt(2.0) * max_radius
                           : quiet_nan();
    return mission;
}

} // namespace cwplan::planner
