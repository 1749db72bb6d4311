#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rdq {

enum class ErrorCode {
    UnknownField,
    MalformedRow,
    InvalidId,
    UnparseableName,
    UnparseableAddress,
    GazetteerMiss,
    DuplicateZip,
    EmptyDataset,
    NonMonotoneTimestamp,
    ConfigInvalid,
    IoFailure,
    MissingPrerequisite,
};

std::string_view to_string(ErrorCode code);

// Fatal conditions only. Data defects are reported through FieldStatus and
// violation lists, never thrown.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace rdq
