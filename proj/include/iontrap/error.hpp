// error.hpp — exception hierarchy shared by every iontrap module

#pragma once

#include <stdexcept>
#include <string>

namespace iontrap {

/// Base class; every error raised by the library derives from it.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad caller input: invalid parameters, regime mismatch, non-resonant call.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Operators built on different SpaceConfigs were combined.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A numerical self-check failed: ambiguous clustering, inconclusive fit,
/// a violated invariant, non-finite entries.
class NumericalDiagnostic : public Error {
public:
    using Error::Error;
};

/// Eigenvalue gap inside (ε_deg, 3ε_deg): degenerate or not is unclear.
class ClusteringAmbiguous : public NumericalDiagnostic {
public:
    using NumericalDiagnostic::NumericalDiagnostic;
};

/// Malformed or incomplete run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace iontrap
