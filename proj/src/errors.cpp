#include "rdq/errors.hpp"

namespace rdq {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::UnknownField: return "UNKNOWN_FIELD";
    case ErrorCode::MalformedRow: return "MALFORMED_ROW";
    case ErrorCode::InvalidId: return "INVALID_ID";
    case ErrorCode::UnparseableName: return "UNPARSEABLE_NAME";
    case ErrorCode::UnparseableAddress: return "UNPARSEABLE_ADDRESS";
    case ErrorCode::GazetteerMiss: return "GAZETTEER_MISS";
    case ErrorCode::DuplicateZip: return "DUPLICATE_ZIP";
    case ErrorCode::EmptyDataset: return "EMPTY_DATASET";
    case ErrorCode::NonMonotoneTimestamp: return "NON_MONOTONE_TIMESTAMP";
    case ErrorCode::ConfigInvalid: return "CONFIG_INVALID";
    case ErrorCode::IoFailure: return "IO_FAILURE";
    case ErrorCode::MissingPrerequisite: return "MISSING_PREREQUISITE";
    }
    return "UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message)
    , code_(code)
{
}

} // namespace rdq
