#ifndef MUBTOMO_ERROR_HPP
#define MUBTOMO_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace mubtomo {

enum class ErrorCode {
    NotPrime,
    EvenDimension,
    ZeroDivisor,
    IndexOutOfRange,
    DimensionMismatch,
    EmptyGrid,
    InsufficientAngles,
    NonHermitianInput,
    AliasedGrid,
    DegenerateAngle,
    InvalidInput,
    IoError,
};

inline constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::EvenDimension: return "EvenDimension";
    case ErrorCode::ZeroDivisor: return "ZeroDivisor";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::InsufficientAngles: return "InsufficientAngles";
    case ErrorCode::NonHermitianInput: return "NonHermitianInput";
    case ErrorCode::AliasedGrid: return "AliasedGrid";
    case ErrorCode::DegenerateAngle: return "DegenerateAngle";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

/// Library exception carrying a machine-readable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace mubtomo

#endif
