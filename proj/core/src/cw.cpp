#include "cwplan/cw.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace cwplan::cw {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void require_dt_in_window(const OrbitParams& params, double dt) {
    if (!(dt >= 0.0) || !(dt < kPi / params.kappa)) {
        throw DtOutOfRange("flight time " + std::to_string(dt) +
                           " s outside [0, pi/kappa) = [0, " +
                           std::to_string(kPi / params.kappa) + ") s");
    }
}

// Inverts f_rv with a conditioning guard: dt must sit inside
// [guard, pi/kappa - guard] and the 1-norm condition estimate must stay
// below cfg.max_condition. f_rv is singular at both window ends.
Mat3 inverted_f_rv(const OrbitParams& params, double dt,
                   const TransferConfig& cfg) {
    const double hi = kPi / params.kappa - cfg.guard_s;
    if (!(dt >= cfg.guard_s) || !(dt <= hi)) {
        throw SingularTransfer("flight time " + std::to_string(dt) +
                               " s outside guard window [" +
                               std::to_string(cfg.guard_s) + ", " +
                               std::to_string(hi) + "] s");
    }
    const Mat3 f_rv = stm_blocks(params, dt).f_rv;
    const Mat3 inv = f_rv.partialPivLu().inverse();
    const double cond = f_rv.cwiseAbs().colwise().sum().maxCoeff() *
                        inv.cwiseAbs().colwise().sum().maxCoeff();
    if (!(cond < cfg.max_condition)) {
        throw SingularTransfer("position/velocity coupling block condition " +
                               std::to_string(cond) + " exceeds limit at dt = " +
                               std::to_string(dt) + " s");
    }
    return inv;
}

// Uniform time grids computed as dt * k / n can overshoot the interval by a
// few ulps; treat such times as the boundary they meant.
double absorb_rounding(double t, double dt_total) {
    const double slack = 64.0 * std::numeric_limits<double>::epsilon() *
                         std::max(1.0, std::abs(dt_total));
    if (t > dt_total && t <= dt_total + slack) return dt_total;
    if (t < 0.0 && t >= -slack) return 0.0;
    return t;
}

} // namespace

OrbitParams OrbitParams::from_semi_major_axis(double a_ts_km, double mu) {
    if (!(mu > 0.0) || !(a_ts_km > 0.0)) {
        throw ValidationError("orbit requires mu > 0 and a_ts > 0");
    }
    return OrbitParams{mu, a_ts_km, std::sqrt(mu / (a_ts_km * a_ts_km * a_ts_km))};
}

OrbitParams OrbitParams::from_altitude(double altitude_km, double mu,
                                       double body_radius_km) {
    return from_semi_major_axis(body_radius_km + altitude_km, mu);
}

OrbitParams OrbitParams::from_mean_motion(double kappa_rad_s, double mu) {
    if (!(mu > 0.0) || !(kappa_rad_s > 0.0)) {
        throw ValidationError("orbit requires mu > 0 and kappa > 0");
    }
    return OrbitParams{mu, std::cbrt(mu / (kappa_rad_s * kappa_rad_s)), kappa_rad_s};
}

double OrbitParams::max_dt() const { return kPi / kappa; }

Mat6 StmBlocks::assemble() const {
    Mat6 phi;
    phi.block<3, 3>(0, 0) = f_rr;
    phi.block<3, 3>(0, 3) = f_rv;
    phi.block<3, 3>(3, 0) = f_vr;
    phi.block<3, 3>(3, 3) = f_vv;
    return phi;
}

StmBlocks stm_blocks(const OrbitParams& params, double dt) {
    require_dt_in_window(params, dt);
    const double k = params.kappa;
    const double th = k * dt;
    const double s = std::sin(th);
    const double c = std::cos(th);

    StmBlocks b;
    b.dt = dt;
    b.f_rr << 4.0 - 3.0 * c, 0.0, 0.0,
              6.0 * (s - th), 1.0, 0.0,
              0.0, 0.0, c;
    b.f_rv << s / k, 2.0 * (1.0 - c) / k, 0.0,
              -2.0 * (1.0 - c) / k, (4.0 * s - 3.0 * th) / k, 0.0,
              0.0, 0.0, s / k;
    b.f_vr << 3.0 * k * s, 0.0, 0.0,
              6.0 * k * (c - 1.0), 0.0, 0.0,
              0.0, 0.0, -k * s;
    b.f_vv << c, 2.0 * s, 0.0,
              -2.0 * s, 4.0 * c - 3.0, 0.0,
              0.0, 0.0, c;
    return b;
}

RelState propagate(const OrbitParams& params, const RelState& state, double dt) {
    const StmBlocks b = stm_blocks(params, dt);
    RelState out;
    out.r = b.f_rr * state.r + b.f_rv * state.v;
    out.v = b.f_vr * state.r + b.f_vv * state.v;
    out.t = state.t + dt;
    return out;
}

Vec3 impulse_for_transfer(const OrbitParams& params, const Vec3& r_i,
                          const Vec3& r_j, const Vec3& v_i_minus, double dt,
                          const TransferConfig& cfg) {
    const Mat3 inv = inverted_f_rv(params, dt, cfg);
    const Mat3 f_rr = stm_blocks(params, dt).f_rr;
    return inv * (r_j - f_rr * r_i) - v_i_minus;
}

TransferLeg solve_transfer(const OrbitParams& params, const Vec3& r_i,
                           const Vec3& r_j, const Vec3& v_i_minus, double dt,
                           const TransferConfig& cfg) {
    TransferLeg leg;
    leg.r_i = r_i;
    leg.r_j = r_j;
    leg.v_i_minus = v_i_minus;
    leg.dt = dt;
    leg.dv = impulse_for_transfer(params, r_i, r_j, v_i_minus, dt, cfg);
    return leg;
}

std::pair<Mat3, Mat3> two_point_matrices(const OrbitParams& params, double t,
                                         double dt_total,
                                         const TransferConfig& cfg) {
    t = absorb_rounding(t, dt_total);
    if (!(t >= 0.0) || !(t <= dt_total)) {
        throw DtOutOfRange("interior time " + std::to_string(t) +
                           " s outside [0, " + std::to_string(dt_total) + "] s");
    }
    const Mat3 inv = inverted_f_rv(params, dt_total, cfg);
    const StmBlocks at_total = stm_blocks(params, dt_total);
    const StmBlocks at_t = stm_blocks(params, t);
    const Mat3 f2 = at_t.f_rv * inv;
    const Mat3 f1 = at_t.f_rr - f2 * at_total.f_rr;
    return {f1, f2};
}

Vec3 trajectory_position(const OrbitParams& params, const Vec3& r_i,
                         const Vec3& r_j, double dt_total, double t,
                         const TransferConfig& cfg) {
    t = absorb_rounding(t, dt_total);
    if (t == 0.0) {
        return r_i;
    }
    if (t == dt_total) {
        return r_j;
    }
    const auto [f1, f2] = two_point_matrices(params, t, dt_total, cfg);
    return f1 * r_i + f2 * r_j;
}

LegEvaluator::LegEvaluator(const OrbitParams& params, const Vec3& r_i,
                           const Vec3& r_j, double dt_total,
                           const TransferConfig& cfg)
    : params_(params), r_i_(r_i), dt_total_(dt_total) {
    v_dep_ = impulse_for_transfer(params, r_i, r_j, Vec3::Zero(), dt_total, cfg);
}

Vec3 LegEvaluator::position(double t) const {
    const StmBlocks b = stm_blocks(params_, t);
    return b.f_rr * r_i_ + b.f_rv * v_dep_;
}

Trajectory sample_trajectory(const OrbitParams& params, const TransferLeg& leg,
                             int n_samples, const TransferConfig& cfg) {
    if (n_samples < 2) {
        throw ValidationError("sample_trajectory needs n_samples >= 2");
    }
    Trajectory traj;
    traj.leg = leg;
    traj.samples.reserve(static_cast<std::size_t>(n_samples));
    const Mat3 inv = inverted_f_rv(params, leg.dt, cfg);
    const Mat3 f_rr_total = stm_blocks(params, leg.dt).f_rr;
    for (int i = 0; i < n_samples; ++i) {
        const double t = leg.dt * static_cast<double>(i) /
                         static_cast<double>(n_samples - 1);
        if (i == 0) {
            traj.samples.emplace_back(0.0, leg.r_i);
        } else if (i == n_samples - 1) {
            traj.samples.emplace_back(leg.dt, leg.r_j);
        } else {
            const StmBlocks at_t = stm_blocks(params, t);
            const Mat3 f2 = at_t.f_rv * inv;
            const Mat3 f1 = at_t.f_rr - f2 * f_rr_total;
            traj.samples.emplace_back(t, Vec3(f1 * leg.r_i + f2 * leg.r_j));
        }
    }
    return traj;
}

} // namespace cwplan::cw
