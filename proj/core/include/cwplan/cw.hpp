#ifndef CWPLAN_CW_HPP
#define CWPLAN_CW_HPP

/// @file cw.hpp
/// Closed-form Clohessy-Wiltshire relative dynamics: state propagation,
/// two-point transfer matrices, impulse solving, and trajectory sampling.
///
/// Frame: RSW centered on the target spacecraft (x radial, y along-track,
/// z cross-track). Units are km, km/s, s throughout. Every inter-impulse
/// flight time must lie strictly inside (0, pi/kappa), where the in-plane
/// position/velocity coupling block of the state transition matrix becomes
/// singular.

#include <utility>
#include <vector>

#include "cwplan/errors.hpp"
#include "cwplan/types.hpp"

namespace cwplan::cw {

inline constexpr double kEarthMu = 398600.4418;     ///< km^3/s^2
inline constexpr double kEarthRadius = 6378.137;    ///< km

/// Circular reference orbit of the target spacecraft.
struct OrbitParams {
    double mu;      ///< gravitational parameter (km^3/s^2)
    double a_ts;    ///< reference semi-major axis (km)
    double kappa;   ///< mean motion sqrt(mu / a_ts^3) (rad/s)

    /// Build from the semi-major axis of the reference orbit.
    static OrbitParams from_semi_major_axis(double a_ts_km, double mu = kEarthMu);

    /// Build from altitude above a spherical body surface.
    static OrbitParams from_altitude(double altitude_km, double mu = kEarthMu,
                                     double body_radius_km = kEarthRadius);

    /// Build directly from the mean motion; the semi-major axis is derived
    /// so that kappa^2 * a_ts^3 == mu holds exactly.
    static OrbitParams from_mean_motion(double kappa_rad_s, double mu = kEarthMu);

    /// Supremum of the admissible flight-time window, pi/kappa (s).
    double max_dt() const;
};

/// Relative position/velocity of the chaser at an epoch.
struct RelState {
    Vec3 r = Vec3::Zero();  ///< km
    Vec3 v = Vec3::Zero();  ///< km/s
    double t = 0.0;         ///< epoch (s)
};

/// The four 3x3 blocks of the CW state transition matrix at flight time dt.
struct StmBlocks {
    Mat3 f_rr;
    Mat3 f_rv;
    Mat3 f_vr;
    Mat3 f_vv;
    double dt = 0.0;

    /// Assemble the full 6x6 transition matrix [f_rr f_rv; f_vr f_vv].
    Mat6 assemble() const;
};

/// Guard settings for operations that invert f_rv.
struct TransferConfig {
    /// Inversion-based operations accept dt only in
    /// [guard_s, pi/kappa - guard_s] (inclusive).
    double guard_s = 1.0;
    /// 1-norm condition estimate limit on f_rv.
    double max_condition = 1e12;
};

/// One two-impulse transfer leg: depart r_i with incoming velocity
/// v_i_minus, apply impulse dv, coast dt, arrive at r_j.
struct TransferLeg {
    Vec3 r_i = Vec3::Zero();
    Vec3 r_j = Vec3::Zero();
    Vec3 v_i_minus = Vec3::Zero();
    double dt = 0.0;
    Vec3 dv = Vec3::Zero();
};

/// Sampled position history of a transfer leg.
struct Trajectory {
    std::vector<std::pair<double, Vec3>> samples;  ///< (t since departure, r)
    TransferLeg leg;
};

/// Evaluate the closed-form CW transition blocks at flight time dt.
/// @throws DtOutOfRange unless 0 <= dt < pi/kappa.
StmBlocks stm_blocks(const OrbitParams& params, double dt);

/// Coast a state for dt without an impulse.
/// @throws DtOutOfRange unless 0 <= dt < pi/kappa.
RelState propagate(const OrbitParams& params, const RelState& state, double dt);

/// Impulse that transfers the chaser from (r_i, v_i_minus) to r_j in dt:
/// dv = f_rv(dt)^-1 (r_j - f_rr(dt) r_i) - v_i_minus.
/// @throws SingularTransfer when dt violates the conditioning guard.
Vec3 impulse_for_transfer(const OrbitParams& params, const Vec3& r_i,
                          const Vec3& r_j, const Vec3& v_i_minus, double dt,
                          const TransferConfig& cfg = {});

/// Convenience wrapper bundling impulse_for_transfer into a TransferLeg.
TransferLeg solve_transfer(const OrbitParams& params, const Vec3& r_i,
                           const Vec3& r_j, const Vec3& v_i_minus, double dt,
                           const TransferConfig& cfg = {});

/// Interior transfer matrices at time t into a leg of total flight time
/// dt_total:
///   F2(t, dt_total) = f_rv(t) f_rv(dt_total)^-1
///   F1(t, dt_total) = f_rr(t) - F2(t, dt_total) f_rr(dt_total)
/// so that r(t) = F1 r_i + F2 r_j on the leg. Accepts t in [0, dt_total]
/// (F1 = I, F2 = 0 at t = 0; F1 = 0, F2 = I at t = dt_total).
/// @throws SingularTransfer when dt_total violates the conditioning guard.
std::pair<Mat3, Mat3> two_point_matrices(const OrbitParams& params, double t,
                                         double dt_total,
                                         const TransferConfig& cfg = {});

/// Position at time t on the unique two-impulse path from r_i to r_j with
/// flight time dt_total. Returns r_i / r_j exactly at the endpoints; times
/// a few ulps past an endpoint (uniform-grid rounding) count as the
/// endpoint.
/// @throws DtOutOfRange unless 0 <= t <= dt_total; SingularTransfer per
/// two_point_matrices.
Vec3 trajectory_position(const OrbitParams& params, const Vec3& r_i,
                         const Vec3& r_j, double dt_total, double t,
                         const TransferConfig& cfg = {});

/// Evaluate the leg on a uniform time grid of n_samples points including
/// both endpoints.
/// @throws ValidationError when n_samples < 2.
Trajectory sample_trajectory(const OrbitParams& params, const TransferLeg& leg,
                             int n_samples, const TransferConfig& cfg = {});

/// Caches the flight-time-dependent factors of one leg so that many
/// interior times can be evaluated cheaply (one 3x3 inversion total instead
/// of one per query).
class LegEvaluator {
public:
    /// @throws SingularTransfer when dt_total violates the conditioning guard.
    LegEvaluator(const OrbitParams& params, const Vec3& r_i, const Vec3& r_j,
                 double dt_total, const TransferConfig& cfg = {});

    /// Position at t in [0, dt_total] on the leg; agrees with
    /// trajectory_position to roundoff.
    Vec3 position(double t) const;

    double dt_total() const { return dt_total_; }
    const Vec3& departure_velocity() const { return v_dep_; }

private:
    OrbitParams params_;
    Vec3 r_i_;
    Vec3 v_dep_;  ///< post-impulse velocity realizing the transfer
    double dt_total_;
};

} // namespace cwplan::cw

#endif // CWPLAN_CW_HPP
