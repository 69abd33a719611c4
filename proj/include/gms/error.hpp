#pragma once

#include <stdexcept>
#include <string>

namespace gms {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value or combination of values violates a type invariant or an
/// operation's argument contract.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Filesystem failure (open, read, write).
class IoError : public Error {
public:
    using Error::Error;
};

enum class FormatErrorKind {
    BadMagic,
    BadVersion,
    BadDtype,
    BadHeader,
    BadDimensions,
    DimensionOverflow,
    BadChannelId,
    NonFinite,
    BadPayloadValue,
    Truncated,
    TrailingBytes,
};

const char* to_string(FormatErrorKind kind);

/// Malformed GMS1/GMSV file contents.
class FormatError : public Error {
public:
    FormatError(FormatErrorKind kind, const std::string& detail)
        : Error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

    FormatErrorKind kind() const noexcept { return kind_; }

private:
    FormatErrorKind kind_;
};

/// An algorithm cannot proceed on the given data (constant gradient field,
/// every marker removed, ...). Distinct from bad arguments: the inputs are
/// well formed but degenerate.
class PreconditionError : public Error {
public:
    using Error::Error;
};

}  // namespace gms
