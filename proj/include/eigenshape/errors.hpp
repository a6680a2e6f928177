#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace eigenshape {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A radial boundary dips below the r_min guard (or has a non-positive mean radius).
class InvalidBoundary : public Error {
public:
    using Error::Error;
};

/// Geometric input with no 2D extent (e.g. all points collinear).
class DegenerateInput : public Error {
public:
    using Error::Error;
};

class DegenerateTriangle : public Error {
public:
    using Error::Error;
};

class FactorizationFailure : public Error {
public:
    using Error::Error;
};

/// The eigensolver hit its iteration cap; `achieved_residual` is the worst
/// relative residual among the requested pairs at that point.
class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, double achieved_residual)
        : Error(what), achieved_residual(achieved_residual) {}
    double achieved_residual;
};

/// A simple-eigenvalue formula was requested for an eigenvalue whose relative
/// gap to a neighbour is below the configured threshold.
class DegenerateEigenvalue : public Error {
public:
    DegenerateEigenvalue(const std::string& what, double relative_gap)
        : Error(what), relative_gap(relative_gap) {}
    double relative_gap;
};

/// Unreadable file or malformed document.
class InputError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration value; `field` names the offending entry.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error(field + ": " + what), field(std::move(field)) {}
    std::string field;
};

}  // namespace eigenshape
