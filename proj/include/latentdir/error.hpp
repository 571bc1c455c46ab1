#ifndef LATENTDIR_ERROR_HPP
#define LATENTDIR_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace latentdir {

enum class ErrorCode {
    DimensionMismatch,
    EmptyGroupSet,
    SingularDenominator,
    NonFiniteInput,
    ZeroDenominatorForm,
    ParseError,
    LabelOutOfRange,
    DuplicateId,
    DegenerateBinning,
    InvalidArgument,
    NonBinaryLabels,
    CoincidentCenters,
    ConstantLabels,
    DegenerateDistances,
    InvalidConfig,
    ConstantSeries,
    HoldoutOverlap,
};

constexpr std::string_view error_name(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyGroupSet: return "EmptyGroupSet";
    case ErrorCode::SingularDenominator: return "SingularDenominator";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::ZeroDenominatorForm: return "ZeroDenominatorForm";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::DegenerateBinning: return "DegenerateBinning";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonBinaryLabels: return "NonBinaryLabels";
    case ErrorCode::CoincidentCenters: return "CoincidentCenters";
    case ErrorCode::ConstantLabels: return "ConstantLabels";
    case ErrorCode::DegenerateDistances: return "DegenerateDistances";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ConstantSeries: return "ConstantSeries";
    case ErrorCode::HoldoutOverlap: return "HoldoutOverlap";
    }
    return "Unknown";
}

/// Every failure raised by the library. `code()` identifies the failure
/// class; `what()` is "<Name>: <detail>".
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    std::string_view name() const noexcept { return error_name(code_); }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& detail) {
    throw Error(code, detail);
}

} // namespace latentdir

#endif
