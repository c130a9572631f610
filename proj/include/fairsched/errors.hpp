#pragma once

#include <stdexcept>
#include <string>

namespace fairsched {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user-supplied parameter (non-positive size, load outside (0,1), ...).
class ParamError : public Error {
public:
    using Error::Error;
};

/// A component precondition was broken by the caller (time moved backwards,
/// unknown job id, duplicate id, ...).
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// A scheduler handed the engine an allocation that violates the schedule
/// invariants, or stopped making progress with jobs pending.
class PolicyViolation : public Error {
public:
    PolicyViolation(const std::string& what, double when)
        : Error(what + " at t=" + std::to_string(when)), when_(when) {}

    double when() const noexcept { return when_; }

private:
    double when_;
};

/// Malformed trace or config input; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A metric was requested on data that cannot support it (empty result,
/// zero-variance correlation input, zero baseline).
class MetricError : public Error {
public:
    using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace fairsched
