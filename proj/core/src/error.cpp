#include "ruinlab/error.hpp"

namespace ruinlab {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::TiltOutOfDomain: return "TiltOutOfDomain";
    case ErrorCode::NoDensity: return "NoDensity";
    case ErrorCode::ClaimMgfInfinite: return "ClaimMgfInfinite";
    case ErrorCode::ThetaOutOfDomain: return "ThetaOutOfDomain";
    case ErrorCode::DerivativeMismatch: return "DerivativeMismatch";
    case ErrorCode::NetProfitViolated: return "NetProfitViolated";
    case ErrorCode::NoPositiveRoot: return "NoPositiveRoot";
    case ErrorCode::MgfInfiniteAtRStar: return "MgfInfiniteAtRStar";
    case ErrorCode::MixingMgfInfinite: return "MixingMgfInfinite";
    case ErrorCode::DegenerateAge: return "DegenerateAge";
    case ErrorCode::NotRuined: return "NotRuined";
    case ErrorCode::WeightOverflow: return "WeightOverflow";
    case ErrorCode::TruncationExcessive: return "TruncationExcessive";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

}  // namespace ruinlab
