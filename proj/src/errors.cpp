#include "levymv/errors.hpp"

namespace lmv {

const char* error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::Ok: return "Ok";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DivergentMoment: return "DivergentMoment";
        case ErrorCode::InvalidRegion: return "InvalidRegion";
        case ErrorCode::InfiniteOverlap: return "InfiniteOverlap";
        case ErrorCode::QuadratureFailure: return "QuadratureFailure";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::EmptyMeasure: return "EmptyMeasure";
        case ErrorCode::UnsupportedFamily: return "UnsupportedFamily";
        case ErrorCode::CaseViolation: return "CaseViolation";
        case ErrorCode::NotInTheta: return "NotInTheta";
        case ErrorCode::Blowup: return "Blowup";
        case ErrorCode::NoiseFloorExceedsTol: return "NoiseFloorExceedsTol";
        case ErrorCode::SigmaViolatesH2: return "SigmaViolatesH2";
        case ErrorCode::ZeroOverlap: return "ZeroOverlap";
        case ErrorCode::GridTooCoarse: return "GridTooCoarse";
        case ErrorCode::NoTransition: return "NoTransition";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace lmv
