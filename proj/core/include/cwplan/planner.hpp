#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cwplan/constraints.hpp"
#include "cwplan/cw.hpp"
#include "cwplan/errors.hpp"
#include "cwplan/types.hpp"

namespace cwplan::planner {

/// Inputs of a circular-formation keeping study: waypoints live on the unit
/// circle of the orbital plane and every sampled leg must stay inside the
/// shell rho_inner <= |r| <= rho_outer.
struct CfkScenario {
    cw::OrbitParams orbit;
    double rho_inner = 0.9;           ///< km
    double rho_outer = 1.1;           ///< km
    std::vector<double> beta_grid_deg;
    std::vector<double> time_grid_s;
    int min_leg_samples = 200;
    double coverage_gap_deg = 5.0;    ///< largest tolerated polar-angle hole
    cw::TransferConfig transfer;

    /// Degree grid 0..360 step 1 and time grid 10 s .. pi/kappa - guard
    /// step 10 s, matching the published study resolution.
    static CfkScenario defaults(const cw::OrbitParams& orbit);

    /// @throws ValidationError unless rho_inner < 1 < rho_outer, the grids
    /// are nonempty, every flight time is admissible, and the sampling /
    /// coverage knobs are positive.
    void validate() const;

    /// Fingerprint of every numeric field; identical scenarios hash equal.
    std::uint64_t hash() const;
};

enum class CellVerdict {
    feasible,
    infeasible,
    unreachable_two_impulse,            ///< no admissible direct return leg
    unreachable_two_and_three_impulse,  ///< no admissible outbound leg at all
};

const char* to_string(CellVerdict verdict);

struct MapCell {
    CellVerdict verdict = CellVerdict::infeasible;
    /// Whether the sampled legs of the mission sweep the full circle (largest
    /// polar-angle gap at most coverage_gap_deg). Only meaningful on
    /// feasible cells of the three-impulse map.
    bool full_coverage = false;
    /// Outbound flight time realizing full coverage (NaN when none does, and
    /// on cells where coverage is not evaluated).
    double witness_t2 = 0.0;
};

/// Row-major feasibility grid: cell (ib, it) describes the mission whose
/// target angle is beta_deg[ib] and whose scanned leg time is t_s[it].
struct FeasibilityMap {
    std::vector<double> beta_deg;
    std::vector<double> t_s;
    int n_impulses = 2;
    std::vector<MapCell> cells;
    std::uint64_t scenario_hash = 0;

    const MapCell& at(std::size_t ib, std::size_t it) const {
        return cells[ib * t_s.size() + it];
    }
};

/// Classify every (beta, flight time) pair of the single transfer from the
/// angle-zero waypoint to the angle-beta waypoint: feasible when every
/// sample stays inside the shell, otherwise infeasible; columns with no
/// feasible time are marked unreachable.
FeasibilityMap cfk_two_impulse_map(const CfkScenario& scenario);

/// Classify the out-and-back mission 0 -> beta -> 0 over (beta, return
/// flight time). Columns whose outbound leg is never feasible are
/// unreachable outright; columns that can be reached but never left again
/// are unreachable for the direct return. Feasible cells additionally
/// record whether some feasible outbound time makes the combined sweep
/// cover the whole circle.
FeasibilityMap cfk_three_impulse_map(const CfkScenario& scenario);

/// Certificate that the two-impulse leg between r_a and r_b avoids a
/// keep-out ball for every admissible flight time: the short-time limit
/// (the chord, checked exactly) and a sampled leg at pi/kappa - epsilon
/// both stay outside the ball.
struct LegCertificate {
    Vec3 r_a = Vec3::Zero();
    Vec3 r_b = Vec3::Zero();
    double chord_min_distance = 0.0;  ///< exact segment-to-center distance
    double far_min_distance = 0.0;    ///< sampled minimum on the long leg
    bool certified = false;
};

/// @throws ValidationError unless keep_out has no outer boundary;
/// EndpointInside when either endpoint starts inside the ball.
LegCertificate certify_leg_always_clear(
    const cw::OrbitParams& params, const Vec3& r_a, const Vec3& r_b,
    const constraints::PathConstraint& keep_out, double epsilon_s = 1.0,
    int n_samples = 2000, const cw::TransferConfig& cfg = {});

/// Closed tour through the given positions (last leg returns to the first)
/// with every leg certified flight-time independent.
struct TourPlan {
    std::vector<Vec3> positions;
    constraints::PathConstraint keep_out;
    double epsilon_s = 0.0;
    std::vector<LegCertificate> legs;
    bool certified = false;  ///< all legs certified
};

/// @throws ValidationError on fewer than two positions.
TourPlan plan_clear_tour(const cw::OrbitParams& params,
                         const std::vector<Vec3>& positions,
                         const constraints::PathConstraint& keep_out,
                         double epsilon_s = 1.0, int n_samples = 2000,
                         const cw::TransferConfig& cfg = {});

/// Impulse schedule realizing a chain of legs, with the velocity state
/// propagated through every impulse.
struct MissionSummary {
    std::vector<cw::TransferLeg> legs;  ///< v_i_minus rewritten by chaining
    std::vector<double> impulse_times;  ///< mission time of each impulse (s)
    std::vector<double> dv_mags;        ///< km/s
    double total_dv = 0.0;              ///< km/s
    std::vector<double> leg_delta;      ///< per-leg spherical bound (km)
    /// Mission-wide position bound sqrt(2) * max waypoint radius; NaN when
    /// some leg exceeds half the admissible window (no closed form then).
    double envelope = 0.0;
    Vec3 v_final = Vec3::Zero();        ///< arrival velocity, before braking
};

/// Solve each leg in order, feeding the arrival velocity of leg k into the
/// impulse of leg k+1 (any v_i_minus stored on later input legs is
/// ignored); the first leg's v_i_minus is the initial relative velocity.
/// @throws ChainBroken when consecutive legs disagree on the shared
/// waypoint by more than 1e-9 km; EmptyList on no legs.
MissionSummary assemble_mission(const cw::OrbitParams& params,
                                const std::vector<cw::TransferLeg>& legs,
                                const cw::TransferConfig& cfg = {});

} // namespace cwplan::planner
