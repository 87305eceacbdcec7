#include "heterosolve/errors.hpp"

namespace heterosolve {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::RankDeficient: return "RankDeficient";
        case ErrorCode::RankDeficientBlock: return "RankDeficientBlock";
        case ErrorCode::NotSymmetric: return "NotSymmetric";
        case ErrorCode::Singular: return "Singular";
        case ErrorCode::SingularDraw: return "SingularDraw";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::NotDivisible: return "NotDivisible";
        case ErrorCode::BadSizes: return "BadSizes";
        case ErrorCode::TooFewMachines: return "TooFewMachines";
        case ErrorCode::ZeroRow: return "ZeroRow";
        case ErrorCode::BadKappa: return "BadKappa";
        case ErrorCode::BadLambda: return "BadLambda";
        case ErrorCode::DegenerateAngle: return "DegenerateAngle";
        case ErrorCode::UndefinedPhi: return "UndefinedPhi";
        case ErrorCode::NoConvergentParams: return "NoConvergentParams";
        case ErrorCode::BadSpectrum: return "BadSpectrum";
        case ErrorCode::ExcessiveRejection: return "ExcessiveRejection";
        case ErrorCode::Parse: return "Parse";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::optional<std::size_t> index)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), index_(index) {}

}  // namespace heterosolve
