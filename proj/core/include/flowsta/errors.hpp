#ifndef FLOWSTA_ERRORS_HPP
#define FLOWSTA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace flowsta {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid input values (non-finite data, non-confining potential, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Query outside the representable range (inversion level, action range, ...).
class OutOfRangeError : public Error {
public:
    using Error::Error;
};

/// The requested accuracy cannot be met at the given discretization.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// Structural change that the method cannot follow (node count, shell splitting).
class TopologyError : public Error {
public:
    using Error::Error;
};

/// Eigenstate continuity lost between time samples; refine the time mesh.
class TrackingError : public Error {
public:
    using Error::Error;
};

/// Flow field invalid on the probability core; shortcut construction unsafe.
class SingularityError : public Error {
public:
    using Error::Error;
};

/// Trajectory left the bound region of phase space.
class EscapeError : public Error {
public:
    using Error::Error;
};

/// Gauge / Hamilton-Jacobi consistency failure.
class GaugeError : public Error {
public:
    using Error::Error;
};

/// Experiment configuration parse or validation failure.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace flowsta

#endif
