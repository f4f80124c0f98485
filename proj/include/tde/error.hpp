#pragma once

#include <stdexcept>
#include <string>

namespace tde {

enum class ErrorCode {
    InvalidArgument,
    Format,
    EmptyDataset,
    UnequalLength,
    MissingValues,
    StratificationImpossible,
    InsufficientWindow,
    SeriesTooShort,
    SeriesLengthMismatch,
    NoLegalParameters,
    EncodingError,
    SingularKernel,
    IncompleteMatrix,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a code so callers (the CLI in
/// particular) can map it to an exit status without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::Format: return "Format";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::UnequalLength: return "UnequalLength";
        case ErrorCode::MissingValues: return "MissingValues";
        case ErrorCode::StratificationImpossible: return "StratificationImpossible";
        case ErrorCode::InsufficientWindow: return "InsufficientWindow";
        case ErrorCode::SeriesTooShort: return "SeriesTooShort";
        case ErrorCode::SeriesLengthMismatch: return "SeriesLengthMismatch";
        case ErrorCode::NoLegalParameters: return "NoLegalParameters";
        case ErrorCode::EncodingError: return "EncodingError";
        case ErrorCode::SingularKernel: return "SingularKernel";
        case ErrorCode::IncompleteMatrix: return "IncompleteMatrix";
    }
    return "Unknown";
}

} // namespace tde
