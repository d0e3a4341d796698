#include "cwplan/constraints.hpp"

#include <cmath>

namespace cwplan::constraints {

namespace {

constexpr double kInstantTol = 1e-9;  // s

// Signed slack of one in-window sample; negative = penetration depth.
double sample_margin(const PathConstraint& c, const Vec3& r) {
    const double d = (r - c.center).norm();
    if (c.kind() == Kind::equality) {
        return -d;
    }
    const double inner = d - c.rho_inner;
    if (std::isinf(c.rho_outer)) {
        return inner;
    }
    return std::min(inner, c.rho_outer - d);
}

} // namespace

Kind PathConstraint::kind() const {
    if (instant && rho_inner == 0.0 && rho_outer == 0.0) {
        return Kind::equality;
    }
    return std::isinf(rho_outer) ? Kind::keep_out : Kind::shell;
}

bool PathConstraint::in_window(double t) const {
    if (instant) {
        return std::abs(t - t_end) <= kInstantTol;
    }
    return t > 0.0 && t < t_end;
}

void PathConstraint::validate() const {
    if (!(rho_inner >= 0.0) || !(rho_outer >= rho_inner)) {
        throw ValidationError("constraint needs 0 <= rho_inner <= rho_outer");
    }
    if (!(t_end > 0.0)) {
        throw ValidationError("constraint window must end after t = 0");
    }
}

bool check_point(const PathConstraint& constraint, double t, const Vec3& r) {
    if (!constraint.in_window(t)) {
        return true;
    }
    if (constraint.kind() == Kind::equality) {
        return (r - constraint.center).norm() == 0.0;
    }
    const double d = (r - constraint.center).norm();
    return d >= constraint.rho_inner && d <= constraint.rho_outer;
}

ConstraintVerdict check_trajectory(const PathConstraint& constraint,
                                   const cw::Trajectory& trajectory,
                                   double max_spacing_s) {
    constraint.validate();
    if (!(max_spacing_s > 0.0)) {
        throw ValidationError("verification resolution must be positive");
    }
    const auto& samples = trajectory.samples;
    if (samples.empty()) {
        throw EmptyList("cannot check an empty trajectory");
    }
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (!(samples[i].first > samples[i - 1].first)) {
            throw ValidationError("trajectory sample times must be increasing");
        }
    }

    if (constraint.instant) {
        // The single verification epoch must be sampled exactly if the
        // trajectory spans it at all.
        const double t0 = samples.front().first;
        const double t1 = samples.back().first;
        if (constraint.t_end >= t0 - kInstantTol &&
            constraint.t_end <= t1 + kInstantTol) {
            bool found = false;
            for (const auto& [t, r] : samples) {
                (void)r;
                if (std::abs(t - constraint.t_end) <= kInstantTol) {
                    found = true;
                    break;
                }
            }
            if (!found) {
                throw InsufficientSampling(
                    "no sample at the instant-constraint epoch");
            }
        }
    } else {
        for (std::size_t i = 1; i < samples.size(); ++i) {
            const double t_a = samples[i - 1].first;
            const double t_b = samples[i].first;
            const bool touches_window = t_b > 0.0 && t_a < constraint.t_end;
            if (touches_window && t_b - t_a > max_spacing_s) {
                throw InsufficientSampling(
                    "sample spacing exceeds the declared resolution inside "
                    "the constraint window");
            }
        }
    }

    ConstraintVerdict verdict;
    verdict.min_margin = std::numeric_limits<double>::infinity();
    for (const auto& [t, r] : samples) {
        if (!constraint.in_window(t)) {
            continue;
        }
        const double margin = sample_margin(constraint, r);
        verdict.min_margin = std::min(verdict.min_margin, margin);
        if (margin < 0.0 && !verdict.first_violation) {
            verdict.first_violation = ConstraintVerdict::Violation{
                t, r, (r - constraint.center).norm()};
        }
    }
    verdict.satisfied = !verdict.first_violation;
    return verdict;
}

} // namespace cwplan::constraints
