#pragma once

#include <stdexcept>
#include <string>

namespace ghost {

/// Grid too coarse or too small for the requested physics.
class ResolutionError : public std::runtime_error {
public:
    explicit ResolutionError(const std::string& what) : std::runtime_error(what) {}
};

/// Inconsistent experiment configuration (bad geometry, wrong detector mode, ...).
class ConfigurationError : public std::runtime_error {
public:
    explicit ConfigurationError(const std::string& what) : std::runtime_error(what) {}
};

/// Nonlinear fit failed to converge; message carries iteration diagnostics.
class FitError : public std::runtime_error {
public:
    explicit FitError(const std::string& what) : std::runtime_error(what) {}
};

/// Data does not cover enough structure to constrain the requested fit.
class InsufficientDataError : public std::runtime_error {
public:
    explicit InsufficientDataError(const std::string& what) : std::runtime_error(what) {}
};

/// Pattern lacks the shape feature an extractor needs (peak, half-max crossing, ...).
class ShapeError : public std::runtime_error {
public:
    explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

/// Config file rejected; message names the offending line.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ghost
