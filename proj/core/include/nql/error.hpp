#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nql {

enum class ErrorKind {
    MalformedRow,
    DuplicateCountry,
    EmptyTable,
    ZeroVariance,
    ConvergenceFailure,
    SingularSystem,
    DegenerateSegment,
    UnknownCountry,
    SchemaMismatch,
    InvalidConfig,
    Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace nql
