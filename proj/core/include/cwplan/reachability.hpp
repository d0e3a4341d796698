#ifndef CWPLAN_REACHABILITY_HPP
#define CWPLAN_REACHABILITY_HPP

/// @file reachability.hpp
/// Reachable curves and surfaces of two-impulse legs, numerical inversion of
/// the position -> (time, flight time) map, and boundary-based clearance
/// certificates for spherical constraints.
///
/// The clearance operations treat the constraint as pure geometry (its
/// spheres); time windows are deliberately ignored because the certificates
/// quantify over every admissible flight time.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "cwplan/constraints.hpp"
#include "cwplan/cw.hpp"
#include "cwplan/errors.hpp"
#include "cwplan/types.hpp"

namespace cwplan::reach {

/// Locus of positions attainable at a fixed interior time t over a grid of
/// admissible flight times (each > t).
struct ReachCurve {
    Vec3 r_i = Vec3::Zero();
    Vec3 r_j = Vec3::Zero();
    double t = 0.0;
    std::vector<std::pair<double, Vec3>> samples;  ///< (dt_total, r)
};

/// Union of reachable curves over a grid of interior times, plus the two
/// bounding trajectories at the smallest admissible flight time and at
/// pi/kappa - guard (the near-singular edge).
struct ReachSurface {
    Vec3 r_i = Vec3::Zero();
    Vec3 r_j = Vec3::Zero();
    std::vector<ReachCurve> curves;
    cw::Trajectory min_dt_leg;
    cw::Trajectory max_dt_leg;
    int t_res = 0;
    int dt_res = 0;
};

enum class InversionStatus {
    converged,           ///< unique interior solution found
    ambiguous_endpoint,  ///< target is an endpoint: every flight time fits
};

/// Solution of trajectory_position(r_i, r_j, dt_total, t) = r_target.
struct InversionResult {
    double t = 0.0;
    double dt_total = 0.0;
    double residual = 0.0;  ///< km
    InversionStatus status = InversionStatus::converged;
};

/// Sampled-grid certificate that a constraint's boundary spheres are never
/// crossed by any two-impulse trajectory between the endpoints.
struct ClearanceReport {
    struct Violation {
        double t = 0.0;         ///< interior time of the violating sample
        double dt_total = 0.0;  ///< flight time of the violating sample
        Vec3 r = Vec3::Zero();
    };
    bool clear = false;
    /// Smallest |distance to sphere| observed over all samples (km);
    /// infinite for the outer sphere of a keep-out constraint.
    double min_inner_distance = 0.0;
    double min_outer_distance = 0.0;
    /// Largest gap between consecutive samples along any sampled curve (km);
    /// certification is only meaningful down to this resolution.
    double max_sample_spacing = 0.0;
    int t_res = 0;
    int dt_res = 0;
    std::optional<Violation> first_violation;
};

/// Which flight-time region a time_window_exclusion call certified clear.
enum class ExclusionRegion {
    inside,      ///< [dt_a, dt_b] certified: a witness outside reaches the set
    outside,     ///< complement certified: a witness inside reaches the set
    none_found,  ///< no sampled flight time reaches the set at all
};

struct ExclusionReport {
    ExclusionRegion certified = ExclusionRegion::none_found;
    double dt_witness = 0.0;  ///< witness flight time (NaN when none found)
    double dt_a = 0.0;
    double dt_b = 0.0;
};

/// Evaluate the reachable curve at time t over dt_grid.
/// @throws BadGrid when t <= 0 or any grid flight time <= t;
/// SingularTransfer per the conditioning guard.
ReachCurve reach_curve(const cw::OrbitParams& params, const Vec3& r_i,
                       const Vec3& r_j, double t,
                       const std::vector<double>& dt_grid,
                       const cw::TransferConfig& cfg = {});

/// Sample the full reachable surface on a t_res x dt_res grid. Interior
/// times span (0, pi/kappa - guard); per curve, flight times span
/// (t, pi/kappa - guard].
/// @throws BadGrid when a resolution is < 2.
ReachSurface reach_surface(const cw::OrbitParams& params, const Vec3& r_i,
                           const Vec3& r_j, int t_res, int dt_res,
                           const cw::TransferConfig& cfg = {});

/// Recover the unique (t, dt_total) whose trajectory position equals
/// r_target, by coarse grid seeding plus damped Gauss-Newton. Targets within
/// 1e-9 km of an endpoint return status ambiguous_endpoint (t and dt_total
/// are NaN: every admissible flight time admits the endpoint).
/// @throws Unreachable when no root with residual < 1e-6 km is found.
InversionResult invert_reach(const cw::OrbitParams& params,
                             const Vec3& r_target, const Vec3& r_i,
                             const Vec3& r_j,
                             const cw::TransferConfig& cfg = {});

/// Exhaustive residual scan over a grid_n x grid_n (t, dt) grid: every
/// strict local minimum is refined by the same Gauss-Newton polish as
/// invert_reach and converged roots (residual < 1e-6 km) are clustered at
/// cluster_tol_s. Returns one representative per basin; a unique preimage
/// yields exactly one entry.
std::vector<InversionResult> scan_inversion_basins(
    const cw::OrbitParams& params, const Vec3& r_target, const Vec3& r_i,
    const Vec3& r_j, int grid_n = 500, double cluster_tol_s = 0.1,
    const cw::TransferConfig& cfg = {});

/// Check whether any sampled surface point crosses the constraint's
/// boundary spheres. If no sample violates the shell and the witness point
/// (default r_i) satisfies it, the constrained set is declared unreachable
/// by any two-impulse trajectory between the endpoints, up to the sampling
/// resolution recorded in the report.
/// @throws NoWitness when the witness point violates the shell geometry.
ClearanceReport boundary_clearance(const cw::OrbitParams& params,
                                   const Vec3& r_i, const Vec3& r_j,
                                   const constraints::PathConstraint& constraint,
                                   int t_res, int dt_res,
                                   std::optional<Vec3> witness = std::nullopt,
                                   const cw::TransferConfig& cfg = {});

/// Classify which flight times are certified clear of the constraint set,
/// given that the bounding trajectories at dt_a and dt_b are themselves
/// clear: a witness flight time reaching the set inside [dt_a, dt_b]
/// certifies the outside, and vice versa. Scans n_scan flight times with
/// n_samples points per trajectory.
/// @throws BoundaryNotClear when the trajectory at dt_a or dt_b intersects
/// the set; ValidationError on a degenerate interval.
ExclusionReport time_window_exclusion(const cw::OrbitParams& params,
                                      const Vec3& r_i, const Vec3& r_j,
                                      const constraints::PathConstraint& constraint,
                                      double dt_a, double dt_b,
                                      int n_scan = 200, int n_samples = 200,
                                      const cw::TransferConfig& cfg = {});

} // namespace cwplan::reach

#endif // CWPLAN_REACHABILITY_HPP
