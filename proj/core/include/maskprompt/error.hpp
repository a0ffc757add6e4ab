#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace maskprompt {

enum class ErrorKind {
    FileNotFound,
    UnsupportedFormat,
    EmptyRaster,
    Io,
    InvalidArgument,
    DimensionMismatch,
    InvariantViolation,
    EmptySamplingRegion,
    NoPositiveRegion,
    NoNegativeRegion,
    NoSeeds,
    InvalidPrompt,
    PhantomDoesNotFit,
    EmptyInput,
    Config,
    Schema,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Library-wide exception. The kind lets callers (and the CLI exit-code
/// mapping) distinguish failures without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace maskprompt
