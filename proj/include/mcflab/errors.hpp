#pragma once

#include <stdexcept>
#include <string>

namespace mcflab {

/// Argument outside the domain of a formula (negative radius, invariant out of range, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Spectrum violates the strict area-decreasing condition required by a formula.
class NotAreaDecreasingError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Inputs fail a stated hypothesis of an inequality (curvature bounds, positivity, ...).
class HypothesisError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Array shapes do not agree.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Bad scenario file, CLI option or model descriptor.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mcflab
