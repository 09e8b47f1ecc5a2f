#pragma once

#include <stdexcept>
#include <string>

namespace lmv {

enum class ErrorCode {
    Ok = 0,
    InvalidArgument,
    DivergentMoment,
    InvalidRegion,
    InfiniteOverlap,
    QuadratureFailure,
    DimensionMismatch,
    EmptyMeasure,
    UnsupportedFamily,
    CaseViolation,
    NotInTheta,
    Blowup,
    NoiseFloorExceedsTol,
    SigmaViolatesH2,
    ZeroOverlap,
    GridTooCoarse,
    NoTransition,
    Io,
};

const char* error_name(ErrorCode code);

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

inline void require(bool cond, const std::string& what) {
    if (!cond) throw Error(ErrorCode::InvalidArgument, what);
}

}  // namespace lmv
