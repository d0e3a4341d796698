#pragma once

// Reference implementations used to cross-check the library. Everything here
// is deliberately independent of the code under test: the integrator knows
// only the CW differential equation, and the eigenvalue oracle uses
// tridiagonalization + Sturm bisection instead of Jacobi rotations.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "cwplan/types.hpp"

namespace oracle {

using Vec6 = Eigen::Matrix<double, 6, 1>;

// d/dt [r; v] for the Clohessy-Wiltshire equations:
//   x'' = 3 k^2 x + 2 k y',  y'' = -2 k x',  z'' = -k^2 z
inline Vec6 cw_derivative(double kappa, const Vec6& s) {
    Vec6 d;
    d(0) = s(3);
    d(1) = s(4);
    d(2) = s(5);
    d(3) = 3.0 * kappa * kappa * s(0) + 2.0 * kappa * s(4);
    d(4) = -2.0 * kappa * s(3);
    d(5) = -kappa * kappa * s(2);
    return d;
}

// Classic fixed-step RK4. Accuracy scales as (kappa * h)^4, so a few
// thousand steps put the local error far below the comparison tolerances.
inline Vec6 rk4_propagate(double kappa, Vec6 state, double t_end, int n_steps) {
    const double h = t_end / static_cast<double>(n_steps);
    for (int i = 0; i < n_steps; ++i) {
        const Vec6 k1 = cw_derivative(kappa, state);
        const Vec6 k2 = cw_derivative(kappa, state + (0.5 * h) * k1);
        const Vec6 k3 = cw_derivative(kappa, state + (0.5 * h) * k2);
        const Vec6 k4 = cw_derivative(kappa, state + h * k3);
        state += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return state;
}

inline Vec6 pack_state(const cwplan::Vec3& r, const cwplan::Vec3& v) {
    Vec6 s;
    s << r(0), r(1), r(2), v(0), v(1), v(2);
    return s;
}

// --- Symmetric eigenvalues via Householder tridiagonalization + bisection ---

struct Tridiag {
    std::vector<double> diag;
    std::vector<double> off;  // sub-diagonal, size n-1
};

inline Tridiag tridiagonalize(Eigen::MatrixXd a) {
    const int n = static_cast<int>(a.rows());
    for (int k = 0; k + 2 < n; ++k) {
        Eigen::VectorXd x = a.col(k).segment(k + 1, n - k - 1);
        const double xnorm = x.norm();
        if (xnorm < 1e-300) continue;
        const double alpha = (x(0) >= 0.0) ? -xnorm : xnorm;
        Eigen::VectorXd v = x;
        v(0) -= alpha;
        const double vnorm = v.norm();
        if (vnorm < 1e-300) continue;
        v /= vnorm;
        Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
        h.block(k + 1, k + 1, n - k - 1, n - k - 1) -= 2.0 * v * v.transpose();
        a = h * a * h;
    }
    Tridiag t;
    t.diag.resize(n);
    t.off.resize(n > 0 ? n - 1 : 0);
    for (int i = 0; i < n; ++i) t.diag[i] = a(i, i);
    for (int i = 0; i + 1 < n; ++i) t.off[i] = a(i + 1, i);
    return t;
}

// Number of eigenvalues strictly below x (Sturm sequence / LDL^T inertia).
inline int eigen_count_below(const Tridiag& t, double x) {
    int count = 0;
    double d = 1.0;
    const int n = static_cast<int>(t.diag.size());
    for (int i = 0; i < n; ++i) {
        const double offsq = (i > 0) ? t.off[i - 1] * t.off[i - 1] : 0.0;
        d = (t.diag[i] - x) - offsq / d;
        if (d == 0.0) d = -1e-300;
        if (d < 0.0) ++count;
    }
    return count;
}

// All eigenvalues of a symmetric matrix, ascending, by interval bisection.
inline std::vector<double> sym_eigenvalues_bisect(const Eigen::MatrixXd& a) {
    const int n = static_cast<int>(a.rows());
    const Tridiag t = tridiagonalize(0.5 * (a + a.transpose()));
    double lo = t.diag[0];
    double hi = t.diag[0];
    for (int i = 0; i < n; ++i) {
        const double r = ((i > 0) ? std::abs(t.off[i - 1]) : 0.0) +
                         ((i + 1 < n) ? std::abs(t.off[i]) : 0.0);
        lo = std::min(lo, t.diag[i] - r);
        hi = std::max(hi, t.diag[i] + r);
    }
    const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
    std::vector<double> out(n);
    for (int k = 0; k < n; ++k) {
        double a0 = lo;
        double b0 = hi;
        while (b0 - a0 > 1e-14 * scale) {
            const double mid = 0.5 * (a0 + b0);
            if (eigen_count_below(t, mid) <= k) {
                a0 = mid;
            } else {
                b0 = mid;
            }
        }
        out[k] = 0.5 * (a0 + b0);
    }
    return out;
}

// --- Portable random helpers -------------------------------------------

// Maps two raw mt19937 draws onto a 53-bit uniform in [lo, hi). Avoids
// std::uniform_real_distribution so sequences are identical across
// standard library implementations.
inline double uniform(std::mt19937& rng, double lo, double hi) {
    const std::uint64_t high = rng();
    const std::uint64_t low = rng();
    const std::uint64_t bits = ((high << 32) | low) >> 11;
    const double u = static_cast<double>(bits) * (1.0 / 9007199254740992.0);
    return lo + (hi - lo) * u;
}

inline cwplan::Vec3 uniform_vec3(std::mt19937& rng, double lo, double hi) {
    return cwplan::Vec3(uniform(rng, lo, hi), uniform(rng, lo, hi),
                        uniform(rng, lo, hi));
}

inline cwplan::Vec3 random_unit(std::mt19937& rng) {
    const double z = uniform(rng, -1.0, 1.0);
    const double phi = uniform(rng, 0.0, 2.0 * M_PI);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    return cwplan::Vec3(s * std::cos(phi), s * std::sin(phi), z);
}

}  // namespace oracle
