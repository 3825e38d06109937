#pragma once

#include <stdexcept>
#include <string>

namespace sarcoast {

/// Argument outside the mathematical domain of a density or special function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Log-cumulant inversion had no usable solution (degenerate data, no root).
class EstimationFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller broke an operation's documented precondition.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed or unsupported file content.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Filesystem read/write failure.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user configuration (CLI flags, config file, engine settings).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace sarcoast

namespace sarcoast {

/// The input collapses to a single land/water class; no coastline exists.
class OneClassOnly : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sarcoast
