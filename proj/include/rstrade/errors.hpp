#pragma once

#include <stdexcept>
#include <string>

namespace rstrade {

// ---------------------------------------------------------------------------
// Input / usage errors (CLI exit code 2)
// ---------------------------------------------------------------------------

/// A model parameter breaks the required strict ordering mu1 > rho > mu2.
class ParamOrderViolation : public std::invalid_argument {
public:
    ParamOrderViolation(std::string field, const std::string& what)
        : std::invalid_argument(what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// A model parameter is outside its admissible range (K in (0,1), sigma > 0, ...).
class ParamRangeViolation : public std::invalid_argument {
public:
    ParamRangeViolation(std::string field, const std::string& what)
        : std::invalid_argument(what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// An argument is outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Surfaces were produced on a different mesh than the one supplied.
class GridMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A contact indicator row is not a single interval in p.
class NonMonotoneContact : public std::runtime_error {
public:
    NonMonotoneContact(const std::string& what, long time_index)
        : std::runtime_error(what), time_index_(time_index) {}
    long time_index() const { return time_index_; }

private:
    long time_index_;
};

class TimeOutOfRange : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

class PolicyRangeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class InterpolationOutOfRange : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Config file violates the schema; carries the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(what), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

/// Malformed surface/boundary file; carries the 1-based line number.
class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, long line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

/// Config digest does not match the one recorded in surface metadata.
class ParamMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Solver failures (CLI exit code 3)
// ---------------------------------------------------------------------------

/// Damped Newton failed to reduce the residual below tolerance.
class NewtonDivergence : public std::runtime_error {
public:
    NewtonDivergence(double last_residual, long time_index)
        : std::runtime_error("Newton iteration diverged at time level "
                             + std::to_string(time_index) + ", residual "
                             + std::to_string(last_residual)),
          last_residual_(last_residual), time_index_(time_index) {}
    double last_residual() const { return last_residual_; }
    long time_index() const { return time_index_; }

private:
    double last_residual_;
    long time_index_;
};

/// Projected relaxation failed to reach its fixed point within the sweep budget.
class FixedPointStall : public std::runtime_error {
public:
    FixedPointStall(double last_change, long time_index)
        : std::runtime_error("fixed point stalled at time level "
                             + std::to_string(time_index) + ", sup-change "
                             + std::to_string(last_change)),
          last_change_(last_change), time_index_(time_index) {}
    double last_change() const { return last_change_; }
    long time_index() const { return time_index_; }

private:
    double last_change_;
    long time_index_;
};

}  // namespace rstrade
