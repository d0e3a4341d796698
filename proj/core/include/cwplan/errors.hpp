#ifndef CWPLAN_ERRORS_HPP
#define CWPLAN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cwplan {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Flight time outside the admissible window [0, pi/kappa).
class DtOutOfRange : public Error {
public:
    using Error::Error;
};

/// Transfer-matrix inversion rejected: flight time too close to 0 or
/// pi/kappa, or the condition estimate exceeded the configured limit.
class SingularTransfer : public Error {
public:
    using Error::Error;
};

/// Matrix handed to the symmetric eigensolver is not symmetric.
class NotSymmetric : public Error {
public:
    using Error::Error;
};

/// Cone axis is not a unit vector with nonnegative components.
class BadAxis : public Error {
public:
    using Error::Error;
};

/// All candidate components are zero where at least one positive is required.
class AllZero : public Error {
public:
    using Error::Error;
};

/// Empty input where a nonempty list is required.
class EmptyList : public Error {
public:
    using Error::Error;
};

/// A sampling grid violates its ordering/positivity preconditions.
class BadGrid : public Error {
public:
    using Error::Error;
};

/// No admissible (t, dt) pair maps onto the requested target position.
class Unreachable : public Error {
public:
    using Error::Error;
};

/// The designated witness point lies inside the region it must avoid.
class NoWitness : public Error {
public:
    using Error::Error;
};

/// A bounding trajectory that must be clear of the constraint is not.
class BoundaryNotClear : public Error {
public:
    using Error::Error;
};

/// A leg endpoint violates the keep-out sphere it must stay outside of.
class EndpointInside : public Error {
public:
    using Error::Error;
};

/// Consecutive legs of a mission do not share an endpoint.
class ChainBroken : public Error {
public:
    using Error::Error;
};

/// Trajectory samples are too sparse for the requested verification.
class InsufficientSampling : public Error {
public:
    using Error::Error;
};

/// Scenario or parameter validation failure (bad user input).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Filesystem read/write failure.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace cwplan

#endif // CWPLAN_ERRORS_HPP
