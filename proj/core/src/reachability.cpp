#include "cwplan/reachability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cwplan::reach {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kRootTol = 1e-6;      // km: residual defining a valid root
constexpr double kEndpointTol = 1e-9;  // km: endpoint degeneracy radius

double quiet_nan() { return std::numeric_limits<double>::quiet_NaN(); }

Vec3 leg_position(const cw::OrbitParams& params, const Vec3& r_i,
                  const Vec3& r_j, double t, double dt,
                  const cw::TransferConfig& cfg) {
    return cw::trajectory_position(params, r_i, r_j, dt, t, cfg);
}

struct Refined {
    double t = 0.0;
    double dt = 0.0;
    double residual = std::numeric_limits<double>::infinity();
    bool ok = false;
};

// Damped Gauss-Newton polish of the 3-residual / 2-unknown system
// r(t, dt) - target = 0, with central finite-difference Jacobian and
// backtracking line search; iterates stay inside the guard box with t <= dt.
Refined refine_root(const cw::OrbitParams& params, const Vec3& target,
                    const Vec3& r_i, const Vec3& r_j, double t0, double dt0,
                    const cw::TransferConfig& cfg) {
    const double lo = cfg.guard_s;
    const double hi = kPi / params.kappa - cfg.guard_s;
    const double h = 1e-4;

    auto clampit = [&](double& t, double& dt) {
        dt = std::clamp(dt, lo, hi);
        t = std::clamp(t, lo, dt);
    };

    double t = t0;
    double dt = dt0;
    clampit(t, dt);
    Vec3 g = leg_position(params, r_i, r_j, t, dt, cfg) - target;
    double res = g.norm();

    for (int iter = 0; iter < 100 && res > 1e-12; ++iter) {
        // Derivative in t (one-sided at the t = dt corner).
        Vec3 d_t;
        if (t + h <= dt) {
            const double tm = std::max(t - h, 0.0);
            d_t = (leg_position(params, r_i, r_j, t + h, dt, cfg) -
                   leg_position(params, r_i, r_j, tm, dt, cfg)) /
                  (t + h - tm);
        } else {
            d_t = (leg_position(params, r_i, r_j, t, dt, cfg) -
                   leg_position(params, r_i, r_j, t - h, dt, cfg)) /
                  h;
        }
        // Derivative in dt (one-sided at the guard edges).
        const double dp = std::min(dt + h, hi);
        const double dm = std::max(dt - h, std::max(t, lo));
        Vec3 d_dt;
        if (dp > dm) {
            d_dt = (leg_position(params, r_i, r_j, t, dp, cfg) -
                    leg_position(params, r_i, r_j, t, dm, cfg)) /
                   (dp - dm);
        } else {
            break;
        }

        Eigen::Matrix<double, 3, 2> jac;
        jac.col(0) = d_t;
        jac.col(1) = d_dt;
        const Eigen::Matrix2d a = jac.transpose() * jac;
        const Eigen::Vector2d b = -jac.transpose() * g;
        const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
        if (!(std::abs(det) > 1e-300)) {
            break;
        }
        Eigen::Vector2d step;
        step(0) = (a(1, 1) * b(0) - a(0, 1) * b(1)) / det;
        step(1) = (a(0, 0) * b(1) - a(1, 0) * b(0)) / det;

        bool accepted = false;
        for (double alpha = 1.0; alpha > 1e-8; alpha *= 0.5) {
            double tn = t + alpha * step(0);
            double dtn = dt + alpha * step(1);
            clampit(tn, dtn);
            const Vec3 gn = leg_position(params, r_i, r_j, tn, dtn, cfg) - target;
            if (gn.norm() < res) {
                t = tn;
                dt = dtn;
                g = gn;
                res = gn.norm();
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            break;
        }
    }

    Refined out;
    out.t = t;
    out.dt = dt;
    out.residual = res;
    out.ok = res < kRootTol;
    return out;
}

bool point_in_violating_set(const constraints::PathConstraint& c, const Vec3& r) {
    const double d = (r - c.center).norm();
    return d < c.rho_inner || d > c.rho_outer;
}

// True when any sampled point of the leg at flight time dt enters the
// violating set (geometry only).
bool leg_violates(const cw::OrbitParams& params, const Vec3& r_i,
                  const Vec3& r_j, const constraints::PathConstraint& c,
                  double dt, int n_samples, const cw::TransferConfig& cfg) {
    const cw::LegEvaluator eval(params, r_i, r_j, dt, cfg);
    for (int i = 0; i <= n_samples; ++i) {
        const double t = dt * static_cast<double>(i) /
                         static_cast<double>(n_samples);
        if (point_in_violating_set(c, eval.position(t))) {
            return true;
        }
    }
    return false;
}

} // namespace

ReachCurve reach_curve(const cw::OrbitParams& params, const Vec3& r_i,
                       const Vec3& r_j, double t,
                       const std::vector<double>& dt_grid,
                       const cw::TransferConfig& cfg) {
    if (!(t > 0.0)) {
        throw BadGrid("reach curve query time must be positive");
    }
    ReachCurve curve;
    curve.r_i = r_i;
    curve.r_j = r_j;
    curve.t = t;
    curve.samples.reserve(dt_grid.size());
    for (double dt : dt_grid) {
        if (!(dt > t)) {
            throw BadGrid("reach curve flight times must exceed the query time");
        }
        const cw::LegEvaluator eval(params, r_i, r_j, dt, cfg);
        curve.samples.emplace_back(dt, eval.position(t));
    }
    return curve;
}

ReachSurface reach_surface(const cw::OrbitParams& params, const Vec3& r_i,
                           const Vec3& r_j, int t_res, int dt_res,
                           const cw::TransferConfig& cfg) {
    if (t_res < 2 || dt_res < 2) {
        throw BadGrid("surface resolutions must be at least 2");
    }
    const double lo = cfg.guard_s;
    const double hi = kPi / params.kappa - cfg.guard_s;

    ReachSurface surface;
    surface.r_i = r_i;
    surface.r_j = r_j;
    surface.t_res = t_res;
    surface.dt_res = dt_res;
    surface.curves.reserve(static_cast<std::size_t>(t_res));
    for (int k = 1; k <= t_res; ++k) {
        const double t = hi * static_cast<double>(k) /
                         static_cast<double>(t_res + 1);
        const double start = std::max(t, lo);
        std::vector<double> dt_grid;
        dt_grid.reserve(static_cast<std::size_t>(dt_res));
        for (int j = 1; j <= dt_res; ++j) {
            // min() absorbs the ulp overshoot of the grid arithmetic.
            dt_grid.push_back(
                std::min(hi, start + (hi - start) * static_cast<double>(j) /
                                         static_cast<double>(dt_res)));
        }
        surface.curves.push_back(reach_curve(params, r_i, r_j, t, dt_grid, cfg));
    }

    const int n_boundary = std::max(t_res, dt_res) + 1;
    surface.min_dt_leg = cw::sample_trajectory(
        params, cw::solve_transfer(params, r_i, r_j, Vec3::Zero(), lo, cfg),
        n_boundary, cfg);
    surface.max_dt_leg = cw::sample_trajectory(
        params, cw::solve_transfer(params, r_i, r_j, Vec3::Zero(), hi, cfg),
        n_boundary, cfg);
    return surface;
}

InversionResult invert_reach(const cw::OrbitParams& params, const Vec3& r_target,
                             const Vec3& r_i, const Vec3& r_j,
                             const cw::TransferConfig& cfg) {
    if ((r_target - r_i).norm() <= kEndpointTol ||
        (r_target - r_j).norm() <= kEndpointTol) {
        InversionResult out;
        out.t = quiet_nan();
        out.dt_total = quiet_nan();
        out.residual = 0.0;
        out.status = InversionStatus::ambiguous_endpoint;
        return out;
    }

    const double lo = cfg.guard_s;
    const double hi = kPi / params.kappa - cfg.guard_s;
    constexpr int kSeedRes = 100;

    // Coarse residual scan; keep the best few mutually-separated seeds.
    struct Seed {
        double t = 0.0, dt = 0.0;
        double res = std::numeric_limits<double>::infinity();
    };
    std::vector<Seed> best(3);
    for (int i = 0; i < kSeedRes; ++i) {
        const double dt =
            std::min(hi, lo + (hi - lo) * static_cast<double>(i) /
                                  static_cast<double>(kSeedRes - 1));
        const cw::LegEvaluator eval(params, r_i, r_j, dt, cfg);
        for (int j = 0; j < kSeedRes; ++j) {
            const double t = lo + (dt - lo) * static_cast<double>(j) /
                                      static_cast<double>(kSeedRes - 1);
            const double res = (eval.position(t) - r_target).norm();
            const double sep = 2.0 * (hi - lo) / (kSeedRes - 1);
            for (std::size_t k = 0; k < best.size(); ++k) {
                if (std::abs(best[k].t - t) < sep &&
                    std::abs(best[k].dt - dt) < sep) {
                    if (res < best[k].res) {
                        best[k] = {t, dt, res};
                        std::sort(best.begin(), best.end(),
                                  [](const Seed& a, const Seed& b) {
                                      return a.res < b.res;
                                  });
                    }
                    goto next_cell;
                }
            }
            if (res < best.back().res) {
                best.back() = {t, dt, res};
                std::sort(best.begin(), best.end(),
                          [](const Seed& a, const Seed& b) {
                              return a.res < b.res;
                          });
            }
        next_cell:;
        }
    }

    Refined champion;
    for (const Seed& s : best) {
        if (!std::isfinite(s.res)) {
            continue;
        }
        const Refined r = refine_root(params, r_target, r_i, r_j, s.t, s.dt, cfg);
        if (r.residual < champion.residual) {
            champion = r;
        }
    }
    if (!champion.ok) {
        throw Unreachable("no (t, dt) pair maps onto the target within " +
                          std::to_string(kRootTol) + " km");
    }
    InversionResult out;
    out.t = champion.t;
    out.dt_total = champion.dt;
    out.residual = champion.residual;
    out.status = InversionStatus::converged;
    return out;
}

std::vector<InversionResult> scan_inversion_basins(
    const cw::OrbitParams& params, const Vec3& r_target, const Vec3& r_i,
    const Vec3& r_j, int grid_n, double cluster_tol_s,
    const cw::TransferConfig& cfg) {
    if (grid_n < 3) {
        throw BadGrid("basin scan needs at least a 3x3 grid");
    }
    const double lo = cfg.guard_s;
    const double hi = kPi / params.kappa - cfg.guard_s;
    const auto n = static_cast<std::size_t>(grid_n);
    const double inf = std::numeric_limits<double>::infinity();

    // Rectangular residual field over [lo, hi]^2; cells with t > dt are
    // outside the domain and marked infinite.
    std::vector<double> field(n * n, inf);
    std::vector<double> ts(n), dts(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(n - 1);
        ts[i] = std::min(hi, lo + (hi - lo) * f);
        dts[i] = ts[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        const cw::LegEvaluator eval(params, r_i, r_j, dts[i], cfg);
        for (std::size_t j = 0; j < n; ++j) {
            if (ts[j] <= dts[i]) {
                field[i * n + j] = (eval.position(ts[j]) - r_target).norm();
            }
        }
    }

    std::vector<InversionResult> basins;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = field[i * n + j];
            if (!std::isfinite(v)) {
                continue;
            }
            bool is_min = true;
            for (int di = -1; di <= 1 && is_min; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) {
                        continue;
                    }
                    const auto ni = static_cast<std::ptrdiff_t>(i) + di;
                    const auto nj = static_cast<std::ptrdiff_t>(j) + dj;
                    if (ni < 0 || nj < 0 ||
                        ni >= static_cast<std::ptrdiff_t>(n) ||
                        nj >= static_cast<std::ptrdiff_t>(n)) {
                        continue;
                    }
                    const double w =
                        field[static_cast<std::size_t>(ni) * n +
                              static_cast<std::size_t>(nj)];
                    if (std::isfinite(w) && w < v) {
                        is_min = false;
                        break;
                    }
                }
            }
            if (!is_min) {
                continue;
            }
            const Refined r =
                refine_root(params, r_target, r_i, r_j, ts[j], dts[i], cfg);
            if (!r.ok) {
                continue;
            }
            bool duplicate = false;
            for (const InversionResult& rep : basins) {
                if (std::abs(rep.t - r.t) <= cluster_tol_s &&
                    std::abs(rep.dt_total - r.dt) <= cluster_tol_s) {
                    duplicate = true;
                    break;
                }
            }
            if (!duplicate) {
                InversionResult rep;
                rep.t = r.t;
                rep.dt_total = r.dt;
                rep.residual = r.residual;
                rep.status = InversionStatus::converged;
                basins.push_back(rep);
            }
        }
    }
    return basins;
}

ClearanceReport boundary_clearance(const cw::OrbitParams& params,
                                   const Vec3& r_i, const Vec3& r_j,
                                   const constraints::PathConstraint& constraint,
                                   int t_res, int dt_res,
                                   std::optional<Vec3> witness,
                                   const cw::TransferConfig& cfg) {
    constraint.validate();
    const Vec3 w = witness.value_or(r_i);
    if (point_in_violating_set(constraint, w)) {
        throw NoWitness("witness point violates the shell geometry");
    }

    const ReachSurface surface =
        reach_surface(params, r_i, r_j, t_res, dt_res, cfg);

    ClearanceReport report;
    report.t_res = t_res;
    report.dt_res = dt_res;
    report.min_inner_distance = std::numeric_limits<double>::infinity();
    report.min_outer_distance = std::numeric_limits<double>::infinity();
    report.max_sample_spacing = 0.0;

    auto inspect = [&](double t, double dt, const Vec3& r) {
        const double d = (r - constraint.center).norm();
        report.min_inner_distance =
            std::min(report.min_inner_distance, std::abs(d - constraint.rho_inner));
        if (std::isfinite(constraint.rho_outer)) {
            report.min_outer_distance = std::min(
                report.min_outer_distance, std::abs(constraint.rho_outer - d));
        }
        if (point_in_violating_set(constraint, r) && !report.first_violation) {
            report.first_violation = ClearanceReport::Violation{t, dt, r};
        }
    };

    for (const ReachCurve& curve : surface.curves) {
        for (std::size_t s = 0; s < curve.samples.size(); ++s) {
            const auto& [dt, r] = curve.samples[s];
            inspect(curve.t, dt, r);
            if (s > 0) {
                report.max_sample_spacing =
                    std::max(report.max_sample_spacing,
                             (r - curve.samples[s - 1].second).norm());
            }
        }
    }
    for (const cw::Trajectory* leg : {&surface.min_dt_leg, &surface.max_dt_leg}) {
        for (std::size_t s = 0; s < leg->samples.size(); ++s) {
            const auto& [t, r] = leg->samples[s];
            inspect(t, leg->leg.dt, r);
            if (s > 0) {
                report.max_sample_spacing =
                    std::max(report.max_sample_spacing,
                             (r - leg->samples[s - 1].second).norm());
            }
        }
    }
    report.clear = !report.first_violation.has_value();
    return report;
}

ExclusionReport time_window_exclusion(const cw::OrbitParams& params,
                                      const Vec3& r_i, const Vec3& r_j,
                                      const constraints::PathConstraint& constraint,
                                      double dt_a, double dt_b, int n_scan,
                                      int n_samples,
                                      const cw::TransferConfig& cfg) {
    constraint.validate();
    if (!(dt_a < dt_b)) {
        throw ValidationError("need dt_a < dt_b");
    }
    if (n_scan < 2 || n_samples < 2) {
        throw ValidationError("scan resolutions must be at least 2");
    }
    const double lo = cfg.guard_s;
    const double hi = kPi / params.kappa - cfg.guard_s;
    if (!(dt_a >= lo) || !(dt_b <= hi)) {
        throw ValidationError("interval endpoints must lie inside the guard window");
    }

    if (leg_violates(params, r_i, r_j, constraint, dt_a, n_samples, cfg) ||
        leg_violates(params, r_i, r_j, constraint, dt_b, n_samples, cfg)) {
        throw BoundaryNotClear(
            "a bounding trajectory intersects the constraint set");
    }

    ExclusionReport report;
    report.dt_a = dt_a;
    report.dt_b = dt_b;

    // Witness inside (dt_a, dt_b): the outside is certified clear.
    for (int j = 1; j <= n_scan; ++j) {
        const double dt = dt_a + (dt_b - dt_a) * static_cast<double>(j) /
                                     static_cast<double>(n_scan + 1);
        if (leg_violates(params, r_i, r_j, constraint, dt, n_samples, cfg)) {
            report.certified = ExclusionRegion::outside;
            report.dt_witness = dt;
            return report;
        }
    }
    // Witness outside: the inside is certified clear.
    const int half = std::max(n_scan / 2, 1);
    for (int j = 1; j <= half; ++j) {
        const double dt = lo + (dt_a - lo) * static_cast<double>(j) /
                                   static_cast<double>(half + 1);
        if (dt > lo &&
            leg_violates(params, r_i, r_j, constraint, dt, n_samples, cfg)) {
            report.certified = ExclusionRegion::inside;
            report.dt_witness = dt;
            return report;
        }
    }
    for (int j = 1; j <= half; ++j) {
        const double dt = dt_b + (hi - dt_b) * static_cast<double>(j) /
                                     static_cast<double>(half + 1);
        if (dt < hi &&
            leg_violates(params, r_i, r_j, constraint, dt, n_samples, cfg)) {
            report.certified = ExclusionRegion::inside;
            report.dt_witness = dt;
            return report;
        }
    }

    report.certified = ExclusionRegion::none_found;
    report.dt_witness = quiet_nan();
    return report;
}

} // namespace cwplan::reach
