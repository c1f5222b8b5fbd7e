#include "nql/error.hpp"

namespace nql {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::MalformedRow: return "MalformedRow";
        case ErrorKind::DuplicateCountry: return "DuplicateCountry";
        case ErrorKind::EmptyTable: return "EmptyTable";
        case ErrorKind::ZeroVariance: return "ZeroVariance";
        case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorKind::SingularSystem: return "SingularSystem";
        case ErrorKind::DegenerateSegment: return "DegenerateSegment";
        case ErrorKind::UnknownCountry: return "UnknownCountry";
        case ErrorKind::SchemaMismatch: return "SchemaMismatch";
        case ErrorKind::InvalidConfig: return "InvalidConfig";
        case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace nql
