#ifndef CWPLAN_SPECTRAL_HPP
#define CWPLAN_SPECTRAL_HPP

/// @file spectral.hpp
/// Spectral machinery for two-impulse trajectories: the 6x6 quadratic-form
/// matrix whose Rayleigh quotient gives the squared interior position norm,
/// its eigenvalue structure, Gershgorin envelopes, the sigma(dt) factor and
/// spherical bound on the trajectory norm, the multi-leg envelope, and conic
/// bounds on the angle between the position and a fixed axis.

#include <string>
#include <vector>

#include "cwplan/cw.hpp"
#include "cwplan/errors.hpp"
#include "cwplan/types.hpp"

namespace cwplan::spectral {

/// The symmetric positive-semidefinite matrix
///   [F1'F1  F1'F2]
///   [F2'F1  F2'F2]
/// built from the interior transfer matrices at (t, dt_total); for
/// x = [r_i; r_j], x' m x = |r(t)|^2 on the leg. Rank 3, nullity 3.
struct FhatMatrix {
    Mat6 m;
    double t = 0.0;
    double dt_total = 0.0;
};

/// Eigen-decomposition of a symmetric matrix, eigenvalues ascending.
struct EigenSystem {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;  ///< columns are eigenvectors, same order
};

/// One Gershgorin disk: center = diagonal entry, radius = deleted absolute
/// row sum.
struct GerschgorinDisk {
    double center = 0.0;
    double radius = 0.0;
};

/// Spherical bound on the interior position norm of a leg.
struct SphereBound {
    double delta = 0.0;     ///< radius (km)
    double sigma = 0.0;     ///< envelope factor, >= 1
    double dt_total = 0.0;  ///< flight time (s)
};

/// Double-cone restriction on the angle theta between the position and a
/// fixed axis e_s: |cos theta| <= c_theta.
struct ConeBound {
    Vec3 e_s = Vec3::Zero();
    double rho_minus = 0.0;   ///< lower bound on |r| (km)
    Vec3 rho_plus = Vec3::Zero();  ///< componentwise bound on |r_(i)| (km)
    double c_theta = 1.0;     ///< in [0, 1]
};

/// Componentwise position extents measured from a sampled trajectory.
struct Extents {
    double rho_minus = 0.0;  ///< min |r| over samples (km)
    Vec3 rho_plus = Vec3::Zero();  ///< max |r_(i)| over samples (km)
};

/// One named numeric check with its worst observed error.
struct FactCheck {
    std::string name;
    bool pass = false;
    double worst_error = 0.0;
    std::string detail;
};

/// Result of the spectral identity suite; see verify_spectral_facts.
struct FactsReport {
    std::vector<FactCheck> checks;
    bool all_pass = false;
};

/// Assemble the quadratic-form matrix at interior time t of a leg with
/// flight time dt_total. Requires 0 < t < dt_total.
/// @throws DtOutOfRange / SingularTransfer per two_point_matrices.
FhatMatrix fhat(const cw::OrbitParams& params, double t, double dt_total,
                const cw::TransferConfig& cfg = {});

/// Eigenvalues of a symmetric matrix, ascending. Cyclic Jacobi sweeps;
/// convergence when the off-diagonal Frobenius norm drops below
/// 1e-12 * |m|_F.
/// @throws NotSymmetric when m deviates from symmetry beyond 1e-9
/// (relative to max |entry|, floored at 1).
Eigen::VectorXd sym_eigenvalues(const Eigen::MatrixXd& m);

/// Full eigen-decomposition, same algorithm and ordering as sym_eigenvalues.
EigenSystem sym_eigensystem(const Eigen::MatrixXd& m);

/// Gershgorin disks of a square matrix (row form).
/// @throws ValidationError when m is not square.
std::vector<GerschgorinDisk> gerschgorin_disks(const Eigen::MatrixXd& m);

/// Envelope factor sigma(dt_total): 1 up to half the admissible window,
/// then 0.5*sqrt(2)*sec(0.5*kappa*dt_total); diverges at pi/kappa.
/// @throws DtOutOfRange unless 0 < dt_total < pi/kappa.
double sigma_envelope(const cw::OrbitParams& params, double dt_total);

/// Spherical bound delta = sigma(dt_total) * sqrt(|r_i|^2 + |r_j|^2) on the
/// interior position norm of the leg.
SphereBound sphere_bound(const cw::OrbitParams& params, const Vec3& r_i,
                         const Vec3& r_j, double dt_total);

/// Radius sqrt(2) * max(rho_list) bounding every leg of a multi-impulse
/// mission whose impulse radii are rho_list, valid when every leg's flight
/// time stays below half the admissible window.
/// @throws EmptyList / ValidationError on empty or nonpositive input.
double multi_impulse_envelope(const std::vector<double>& rho_list);

/// Conic bound c_theta = min(1, e_s . rho_plus / rho_minus).
/// @throws BadAxis unless e_s is unit with nonnegative components;
/// ValidationError on nonpositive rho_minus or negative rho_plus entries.
ConeBound cone_bound(const Vec3& e_s, double rho_minus, const Vec3& rho_plus);

/// Unit basis vector on the index of the smallest positive rho_plus entry
/// (zero entries give the vacuous axis and are skipped); ties break to the
/// lowest index.
/// @throws AllZero when every component is zero.
Vec3 best_cone_axis(const Vec3& rho_plus);

/// Measure rho_minus / rho_plus from a sampled trajectory.
/// @throws EmptyList on an empty trajectory.
Extents measure_extents(const cw::Trajectory& trajectory);

/// Numeric verification of the spectral identities on a grid_n x grid_n
/// (t, tau) grid:
///  - sorted eigenvalues of F1'F1 at t equal those of F2'F2 at tau - t;
///  - exactly three near-zero eigenvalues of the 6x6 form everywhere;
///  - absolute row sums of rows 1-3 at t equal rows 4-6 at tau - t;
///  - max eigenvalue <1 / =1 / >1 for tau below / at / above half-window;
///  - eigenvalue trajectories over t are constant or single-extremum;
///  - at t = tau/2 with tau at or beyond the half-window, the largest
///    Gershgorin bound equals 0.5 * sec^2(kappa * tau / 2).
FactsReport verify_spectral_facts(const cw::OrbitParams& params, int grid_n = 50);

} // namespace cwplan::spectral

#endif // CWPLAN_SPECTRAL_HPP
