#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ruinlab {

enum class ErrorCode {
    InvalidArgument,
    TiltOutOfDomain,
    NoDensity,
    ClaimMgfInfinite,
    ThetaOutOfDomain,
    DerivativeMismatch,
    NetProfitViolated,
    NoPositiveRoot,
    MgfInfiniteAtRStar,
    MixingMgfInfinite,
    DegenerateAge,
    NotRuined,
    WeightOverflow,
    TruncationExcessive,
    SolverFailure,
    InvalidConfig,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to a stable exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace ruinlab
