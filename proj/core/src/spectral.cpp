#include "cwplan/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace cwplan::spectral {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

// One cyclic Jacobi pass: rotate away every off-diagonal pair once.
void jacobi_sweep(Eigen::MatrixXd& a, Eigen::MatrixXd& q) {
    const Eigen::Index n = a.rows();
    for (Eigen::Index p = 0; p < n - 1; ++p) {
        for (Eigen::Index r = p + 1; r < n; ++r) {
            const double apr = a(p, r);
            if (apr == 0.0) {
                continue;
            }
            const double theta = (a(r, r) - a(p, p)) / (2.0 * apr);
            const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                             (std::abs(theta) + std::sqrt(theta * theta + 1.0));
            const double c = 1.0 / std::sqrt(t * t + 1.0);
            const double s = t * c;
            for (Eigen::Index k = 0; k < n; ++k) {
                const double akp = a(k, p);
                const double akr = a(k, r);
                a(k, p) = c * akp - s * akr;
                a(k, r) = s * akp + c * akr;
            }
            for (Eigen::Index k = 0; k < n; ++k) {
                const double apk = a(p, k);
                const double ark = a(r, k);
                a(p, k) = c * apk - s * ark;
                a(r, k) = s * apk + c * ark;
            }
            for (Eigen::Index k = 0; k < n; ++k) {
                const double qkp = q(k, p);
                const double qkr = q(k, r);
                q(k, p) = c * qkp - s * qkr;
                q(k, r) = s * qkp + c * qkr;
            }
        }
    }
}

double off_diagonal_norm(const Eigen::MatrixXd& a) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            if (i != j) {
                sum += a(i, j) * a(i, j);
            }
        }
    }
    return std::sqrt(sum);
}

// Absolute row sums (diagonal included) of a square matrix.
Eigen::VectorXd abs_row_sums(const Eigen::MatrixXd& m) {
    return m.cwiseAbs().rowwise().sum();
}

} // namespace

FhatMatrix fhat(const cw::OrbitParams& params, double t, double dt_total,
                const cw::TransferConfig& cfg) {
    if (!(t > 0.0) || !(t < dt_total)) {
        throw DtOutOfRange("quadratic-form matrix needs 0 < t < dt_total");
    }
    const auto [f1, f2] = cw::two_point_matrices(params, t, dt_total, cfg);
    FhatMatrix out;
    out.t = t;
    out.dt_total = dt_total;
    const Mat3 cross = f1.transpose() * f2;
    out.m.block<3, 3>(0, 0) = f1.transpose() * f1;
    out.m.block<3, 3>(0, 3) = cross;
    out.m.block<3, 3>(3, 0) = cross.transpose();
    out.m.block<3, 3>(3, 3) = f2.transpose() * f2;
    return out;
}

EigenSystem sym_eigensystem(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw NotSymmetric("eigensolver needs a nonempty square matrix");
    }
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-9 * scale) {
        throw NotSymmetric("matrix asymmetry " + fmt(asym) +
                           " exceeds 1e-9 relative tolerance");
    }

    Eigen::MatrixXd a = 0.5 * (m + m.transpose());
    Eigen::MatrixXd q = Eigen::MatrixXd::Identity(m.rows(), m.cols());
    const double target = 1e-12 * a.norm();
    for (int sweep = 0; sweep < 64 && off_diagonal_norm(a) > target; ++sweep) {
        jacobi_sweep(a, q);
    }

    EigenSystem sys;
    sys.values = a.diagonal();
    sys.vectors = q;
    std::vector<Eigen::Index> order(static_cast<std::size_t>(m.rows()));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        return sys.values(i) < sys.values(j);
    });
    EigenSystem sorted;
    sorted.values.resize(m.rows());
    sorted.vectors.resize(m.rows(), m.cols());
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        sorted.values(k) = sys.values(order[static_cast<std::size_t>(k)]);
        sorted.vectors.col(k) = sys.vectors.col(order[static_cast<std::size_t>(k)]);
    }
    return sorted;
}

Eigen::VectorXd sym_eigenvalues(const Eigen::MatrixXd& m) {
    return sym_eigensystem(m).values;
}

std::vector<GerschgorinDisk> gerschgorin_disks(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) {
        throw ValidationError("Gershgorin disks need a square matrix");
    }
    std::vector<GerschgorinDisk> disks;
    disks.reserve(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        GerschgorinDisk d;
        d.center = m(i, i);
        d.radius = m.row(i).cwiseAbs().sum() - std::abs(m(i, i));
        disks.push_back(d);
    }
    return disks;
}

double sigma_envelope(const cw::OrbitParams& params, double dt_total) {
    const double window = kPi / params.kappa;
    if (!(dt_total > 0.0) || !(dt_total < window)) {
        throw DtOutOfRange("envelope defined for flight times in (0, pi/kappa)");
    }
    if (dt_total <= 0.5 * window) {
        return 1.0;
    }
    return 0.5 * std::sqrt(2.0) / std::cos(0.5 * params.kappa * dt_total);
}

SphereBound sphere_bound(const cw::OrbitParams& params, const Vec3& r_i,
                         const Vec3& r_j, double dt_total) {
    SphereBound b;
    b.sigma = sigma_envelope(params, dt_total);
    b.dt_total = dt_total;
    b.delta = b.sigma * std::sqrt(r_i.squaredNorm() + r_j.squaredNorm());
    return b;
}

double multi_impulse_envelope(const std::vector<double>& rho_list) {
    if (rho_list.empty()) {
        throw EmptyList("multi-impulse envelope needs at least one radius");
    }
    double max_rho = 0.0;
    for (double rho : rho_list) {
        if (!(rho > 0.0)) {
            throw ValidationError("impulse radii must be positive");
        }
        max_rho = std::max(max_rho, rho);
    }
    return std::sqrt(2.0) * max_rho;
}

ConeBound cone_bound(const Vec3& e_s, double rho_minus, const Vec3& rho_plus) {
    if (std::abs(e_s.norm() - 1.0) > 1e-9 || e_s.minCoeff() < -1e-12) {
        throw BadAxis("cone axis must be unit with nonnegative components");
    }
    if (!(rho_minus > 0.0)) {
        throw ValidationError("rho_minus must be positive");
    }
    if (rho_plus.minCoeff() < 0.0) {
        throw ValidationError("rho_plus components must be nonnegative");
    }
    ConeBound b;
    b.e_s = e_s;
    b.rho_minus = rho_minus;
    b.rho_plus = rho_plus;
    b.c_theta = std::min(1.0, e_s.dot(rho_plus) / rho_minus);
    return b;
}

Vec3 best_cone_axis(const Vec3& rho_plus) {
    if (rho_plus.minCoeff() < 0.0) {
        throw ValidationError("rho_plus components must be nonnegative");
    }
    int best = -1;
    for (int i = 0; i < 3; ++i) {
        if (rho_plus(i) > 0.0 && (best < 0 || rho_plus(i) < rho_plus(best))) {
            best = i;
        }
    }
    if (best < 0) {
        throw AllZero("every componentwise bound is zero");
    }
    return Vec3::Unit(best);
}

Extents measure_extents(const cw::Trajectory& trajectory) {
    if (trajectory.samples.empty()) {
        throw EmptyList("cannot measure extents of an empty trajectory");
    }
    Extents e;
    e.rho_minus = std::numeric_limits<double>::infinity();
    for (const auto& [t, r] : trajectory.samples) {
        (void)t;
        e.rho_minus = std::min(e.rho_minus, r.norm());
        e.rho_plus = e.rho_plus.cwiseMax(r.cwiseAbs());
    }
    return e;
}

FactsReport verify_spectral_facts(const cw::OrbitParams& params, int grid_n) {
    if (grid_n < 2) {
        throw ValidationError("facts grid needs at least 2 points per axis");
    }
    const double window = kPi / params.kappa;
    const int n = grid_n;

    FactCheck mirror{"eigenvalue-mirror", true, 0.0,
                     "sorted eig(F1'F1)(t) vs eig(F2'F2)(dt-t), tol 1e-8"};
    FactCheck rank{"rank-three", true, 0.0,
                   "exactly three near-zero eigenvalues, |l| < 1e-9*max(1,lmax)"};
    FactCheck psd{"positive-semidefinite", true, 0.0,
                  "smallest eigenvalue above -1e-9*max(1,lmax)"};
    FactCheck rowsum{"row-sum-mirror", true, 0.0,
                     "abs row sums, rows 1-3 at t vs rows 4-6 at dt-t, tol 1e-9"};

    for (int a = 1; a <= n; ++a) {
        const double tau = window * static_cast<double>(a) /
                           static_cast<double>(n + 1);
        for (int b = 1; b <= n; ++b) {
            const double t = tau * static_cast<double>(b) /
                             static_cast<double>(n + 1);
            const auto [f1_t, f2_t] = cw::two_point_matrices(params, t, tau);
            const auto [f1_m, f2_m] = cw::two_point_matrices(params, tau - t, tau);

            const Eigen::VectorXd l11 =
                sym_eigenvalues(Eigen::MatrixXd(f1_t.transpose() * f1_t));
            const Eigen::VectorXd l22 =
                sym_eigenvalues(Eigen::MatrixXd(f2_m.transpose() * f2_m));
            mirror.worst_error =
                std::max(mirror.worst_error, (l11 - l22).cwiseAbs().maxCoeff());

            const FhatMatrix fh = fhat(params, t, tau);
            const Eigen::VectorXd lh = sym_eigenvalues(fh.m);
            const double zero_tol = 1e-9 * std::max(1.0, lh(5));
            int near_zero = 0;
            for (int k = 0; k < 6; ++k) {
                if (std::abs(lh(k)) < zero_tol) {
                    ++near_zero;
                }
            }
            if (near_zero != 3) {
                rank.pass = false;
            }
            rank.worst_error = std::max(rank.worst_error, std::abs(lh(2)));
            psd.worst_error = std::max(psd.worst_error, -lh(0));
            if (lh(0) < -zero_tol) {
                psd.pass = false;
            }

            const Eigen::VectorXd rows_t = abs_row_sums(fh.m);
            const Eigen::VectorXd rows_m = abs_row_sums(fhat(params, tau - t, tau).m);
            for (int i = 0; i < 3; ++i) {
                rowsum.worst_error = std::max(
                    rowsum.worst_error, std::abs(rows_t(i) - rows_m(i + 3)));
            }
        }
    }
    mirror.pass = mirror.worst_error <= 1e-8;
    rowsum.pass = rowsum.worst_error <= 1e-9;

    // Largest-eigenvalue behavior vs the half-window: strictly below one
    // before it, pinned to one on it, strictly above one past it.
    FactCheck threshold{"max-eigenvalue-thresholds", true, 0.0,
                        "lmax <1 / =1 / >1 at dt = {0.3, 0.5, 0.7} of the window"};
    for (double frac : {0.3, 0.5, 0.7}) {
        const double tau = frac * window;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (int b = 1; b <= n; ++b) {
            const double t = tau * static_cast<double>(b) /
                             static_cast<double>(n + 1);
            const Eigen::VectorXd lh = sym_eigenvalues(fhat(params, t, tau).m);
            lo = std::min(lo, lh(5));
            hi = std::max(hi, lh(5));
        }
        if (frac < 0.5 && !(hi < 1.0)) {
            threshold.pass = false;
        }
        if (frac == 0.5) {
            const double err = std::max(std::abs(lo - 1.0), std::abs(hi - 1.0));
            threshold.worst_error = std::max(threshold.worst_error, err);
            if (err > 1e-6) {
                threshold.pass = false;
            }
        }
        if (frac > 0.5 && !(lo > 1.0)) {
            threshold.pass = false;
        }
    }

    // The largest eigenvalue over t is constant or has a single interior
    // extremum; checked as at most one direction change above noise level.
    FactCheck unimodal{"max-eigenvalue-unimodal", true, 0.0,
                       "lmax(t) constant or single-extremum over each leg"};
    for (double frac : {0.2, 0.4, 0.5, 0.6, 0.8}) {
        const double tau = frac * window;
        std::vector<double> lmax;
        lmax.reserve(static_cast<std::size_t>(n));
        for (int b = 1; b <= n; ++b) {
            const double t = tau * static_cast<double>(b) /
                             static_cast<double>(n + 1);
            lmax.push_back(sym_eigenvalues(fhat(params, t, tau).m)(5));
        }
        const double scale = std::max(
            1.0, *std::max_element(lmax.begin(), lmax.end()));
        const double noise = 1e-10 * scale;
        int direction = 0;
        int changes = 0;
        for (std::size_t i = 1; i < lmax.size(); ++i) {
            const double d = lmax[i] - lmax[i - 1];
            if (std::abs(d) <= noise) {
                continue;
            }
            const int sign = d > 0.0 ? 1 : -1;
            if (direction != 0 && sign != direction) {
                ++changes;
            }
            direction = sign;
        }
        unimodal.worst_error = std::max(unimodal.worst_error,
                                        static_cast<double>(changes));
        if (changes > 1) {
            unimodal.pass = false;
        }
    }

    // At the leg midpoint, past the half-window, the largest Gershgorin
    // bound equals 0.5 * sec^2(kappa * dt / 2) and caps the spectrum.
    FactCheck gersh{"gershgorin-midpoint", true, 0.0,
                    "max disk bound = 0.5*sec^2(kappa*dt/2) at t = dt/2, tol 1e-6"};
    for (double frac : {0.5, 0.7, 0.9}) {
        const double tau = frac * window;
        const FhatMatrix fh = fhat(params, 0.5 * tau, tau);
        double max_bound = -std::numeric_limits<double>::infinity();
        for (const auto& d : gerschgorin_disks(fh.m)) {
            max_bound = std::max(max_bound, d.center + d.radius);
        }
        const double sec = 1.0 / std::cos(0.5 * params.kappa * tau);
        const double expected = 0.5 * sec * sec;
        const double err = std::abs(max_bound - expected);
        gersh.worst_error = std::max(gersh.worst_error, err);
        if (err > 1e-6) {
            gersh.pass = false;
        }
        const Eigen::VectorXd lh = sym_eigenvalues(fh.m);
        if (lh(5) > max_bound + 1e-9) {
            gersh.pass = false;
        }
    }

    FactsReport report;
    report.checks = {mirror, rank, psd, rowsum, threshold, unimodal, gersh};
    report.all_pass = true;
    for (const auto& c : report.checks) {
        report.all_pass = report.all_pass && c.pass;
    }
    return report;
}

} // namespace cwplan::spectral
