#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace heterosolve {

enum class ErrorCode {
    InvalidArgument,
    DimensionMismatch,
    RankDeficient,
    RankDeficientBlock,
    NotSymmetric,
    Singular,
    SingularDraw,
    NoConvergence,
    NotDivisible,
    BadSizes,
    TooFewMachines,
    ZeroRow,
    BadKappa,
    BadLambda,
    DegenerateAngle,
    UndefinedPhi,
    NoConvergentParams,
    BadSpectrum,
    ExcessiveRejection,
    Parse,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library. `index()` carries the offending
/// machine or row when one is known.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::optional<std::size_t> index = std::nullopt);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    [[nodiscard]] std::optional<std::size_t> index() const noexcept { return index_; }

private:
    ErrorCode code_;
    std::optional<std::size_t> index_;
};

}  // namespace heterosolve
