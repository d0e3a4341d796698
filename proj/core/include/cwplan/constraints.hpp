#ifndef CWPLAN_CONSTRAINTS_HPP
#define CWPLAN_CONSTRAINTS_HPP

/// @file constraints.hpp
/// Spherical-shell path constraints with a time window, and direct
/// verification of sampled trajectories against them.

#include <limits>
#include <optional>

#include "cwplan/cw.hpp"
#include "cwplan/errors.hpp"
#include "cwplan/types.hpp"

namespace cwplan::constraints {

inline constexpr double kInfiniteRadius = std::numeric_limits<double>::infinity();

enum class Kind {
    shell,     ///< finite inner and outer radii: stay inside the shell
    keep_out,  ///< infinite outer radius: stay outside the inner sphere
    equality,  ///< zero radii at a single instant: be exactly at the center
};

/// Requirement that the position stay within rho_inner <= |r - center|
/// <= rho_outer during a time window. Windows are measured from mission
/// start and are open: (0, t_end), so the boundary instants are exempt.
/// With instant = true the window collapses to the single epoch {t_end}.
struct PathConstraint {
    Vec3 center = Vec3::Zero();           ///< km
    double rho_inner = 0.0;               ///< km, >= 0
    double rho_outer = kInfiniteRadius;   ///< km, may be infinite
    double t_end = kInfiniteRadius;       ///< s, > 0
    bool instant = false;

    Kind kind() const;
    bool in_window(double t) const;

    /// @throws ValidationError when radii or window violate the invariants.
    void validate() const;
};

/// Outcome of checking a trajectory against one constraint.
struct ConstraintVerdict {
    struct Violation {
        double t = 0.0;
        Vec3 r = Vec3::Zero();
        double distance = 0.0;  ///< |r - center| at the violation (km)
    };
    bool satisfied = false;
    std::optional<Violation> first_violation;
    /// Signed slack: smallest margin to a violated boundary over in-window
    /// samples (positive = satisfied with room, negative = worst penetration
    /// depth, +infinity when no sample falls inside the window).
    double min_margin = 0.0;
};

/// Pointwise check: true iff t lies outside the window or r satisfies the
/// shell inequality.
bool check_point(const PathConstraint& constraint, double t, const Vec3& r);

/// Check every sample of a trajectory whose epochs are absolute mission
/// times. max_spacing_s declares the verification resolution: consecutive
/// in-window samples further apart than this make the check meaningless.
/// @throws InsufficientSampling when in-window spacing exceeds
/// max_spacing_s, or when an instant constraint falls inside the sampled
/// span without an exact-epoch sample (|t - t_end| <= 1e-9 s).
ConstraintVerdict check_trajectory(const PathConstraint& constraint,
                                   const cw::Trajectory& trajectory,
                                   double max_spacing_s);

} // namespace cwplan::constraints

#endif // CWPLAN_CONSTRAINTS_HPP
