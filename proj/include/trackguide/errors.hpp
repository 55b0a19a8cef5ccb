#ifndef TRACKGUIDE_ERRORS_HPP
#define TRACKGUIDE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace trackguide {

/// Query parameter (arc length, spline parameter) outside the represented domain.
class OutOfDomainError : public std::domain_error {
public:
    explicit OutOfDomainError(const std::string& what) : std::domain_error(what) {}
};

/// A point projects onto a reference curve at several equidistant locations.
class AmbiguousProjectionError : public std::runtime_error {
public:
    explicit AmbiguousProjectionError(const std::string& what) : std::runtime_error(what) {}
};

/// Too few visible boundary points to build a local planning reference.
class InsufficientPerceptionError : public std::runtime_error {
public:
    explicit InsufficientPerceptionError(const std::string& what) : std::runtime_error(what) {}
};

/// The drivable corridor is narrower than twice the lateral margin somewhere.
class InfeasibleCorridorError : public std::runtime_error {
public:
    explicit InfeasibleCorridorError(const std::string& what) : std::runtime_error(what) {}
};

/// Every candidate path through the lattice has infinite cost.
class NoFeasiblePathError : public std::runtime_error {
public:
    explicit NoFeasiblePathError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace trackguide

#endif  // TRACKGUIDE_ERRORS_HPP
