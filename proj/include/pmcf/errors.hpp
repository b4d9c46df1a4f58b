// Typed error hierarchy shared by all pmcf modules.
#pragma once

#include <stdexcept>
#include <string>

namespace pmcf {

// Base class so callers can catch any library error in one handler.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Metric eigenvalues do not have Lorentz signature (one negative, n positive).
class SignatureError : public Error {
public:
    using Error::Error;
};

// Point (or finite-difference stencil) left a chart's validity region.
class DomainError : public Error {
public:
    using Error::Error;
};

// Two frames have opposite time orientations.
class OrientationError : public Error {
public:
    using Error::Error;
};

// A graph state's spacelike margin q = 1 - |grad w|^2 fell below its floor.
class SpacelikeViolation : public Error {
public:
    using Error::Error;
};

// An embedded surface's induced metric failed positive definiteness.
class NotSpacelike : public Error {
public:
    using Error::Error;
};

// An iteration failed to reach its tolerance within the iteration budget.
class NoConvergence : public Error {
public:
    using Error::Error;
};

// The adaptive time step underflowed the representable floor.
class StepTooSmall : public Error {
public:
    using Error::Error;
};

// Foliation metric determinant collapsed (focal point reached).
class DegenerateMetric : public Error {
public:
    using Error::Error;
};

// Residual window states are not usable (wrong count or ordering in s).
class WindowError : public Error {
public:
    using Error::Error;
};

// Config file could not be parsed; message carries line information.
class ParseError : public Error {
public:
    using Error::Error;
};

// Config parsed but a field failed validation; message names the field.
class ValidationError : public Error {
public:
    using Error::Error;
};

// A fit was requested on too few samples.
class InsufficientData : public Error {
public:
    using Error::Error;
};

// A log-fit was requested on data containing non-positive values.
class NonPositiveValue : public Error {
public:
    using Error::Error;
};

} // namespace pmcf
