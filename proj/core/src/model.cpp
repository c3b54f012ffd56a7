#include "ruinlab/model.hpp"

#include <cmath>

#include "ruinlab/error.hpp"

namespace ruinlab {

PremiumSpec::PremiumSpec(CmppRatioPremium p) : v_(p)
{
    if (!(std::isfinite(p.eta) && p.eta > 0.0)) fail(ErrorCode::InvalidArgument, "cmpp premium requires eta > 0");
}

double PremiumSpec::operator()(double theta) const noexcept
{
    if (const auto* a = std::get_if<AffinePremium>(&v_)) return a->slope * theta + a->intercept;
    const auto& r = std::get<CmppRatioPremium>(v_);
    return 2.0 * theta / (r.eta * (1.0 + theta));
}

void ModelSpec::validate() const
{
    if (!(domain.lo <= domain.hi) || !std::isfinite(domain.lo) || domain.lo < 0.0)
        fail(ErrorCode::InvalidArgument, "domain must satisfy 0 <= lo <= hi");
    if (!(interarrival.shape > 0.0 && std::isfinite(interarrival.shape)))
        fail(ErrorCode::InvalidArgument, "interarrival shape must be positive");

    const Support ms = support(mixing);
    if (ms.lo < domain.lo || ms.hi > domain.hi)
        fail(ErrorCode::InvalidArgument, "mixing support " + mixing.describe() + " is not contained in D");
    if (domain.is_point() && domain.lo <= 0.0)
        fail(ErrorCode::InvalidArgument, "single-point domain must be positive");

    if (support(claim).lo < 0.0) fail(ErrorCode::InvalidArgument, "claim sizes must be non-negative");
    if (mean(claim) <= 0.0) fail(ErrorCode::InvalidArgument, "claim law must have positive mean");
    if (!(mgf_domain_sup(claim) > 0.0))
        fail(ErrorCode::InvalidArgument, "claim law has no finite MGF to the right of 0");

    // c is affine or monotone, so positivity on D follows from the endpoint
    // limits plus an interior sweep.
    const double hi = domain.bounded() ? domain.hi : domain.lo + 1e6;
    constexpr int kProbe = 1024;
    for (int i = 0; i <= kProbe; ++i) {
        const double theta = domain.lo + (hi - domain.lo) * i / kProbe;
        const bool interior = domain.is_point() || (i > 0 && i < kProbe);
        const double c = premium_at(theta);
        if (interior ? !(c > 0.0) : !(c >= 0.0))
            fail(ErrorCode::InvalidArgument, "premium must be positive on D (theta=" + std::to_string(theta) + ")");
    }
    if (!domain.bounded()) {
        if (const auto* a = std::get_if<AffinePremium>(&premium.variant()); a != nullptr && a->slope < 0.0)
            fail(ErrorCode::InvalidArgument, "premium becomes negative on the unbounded domain");
    }
}

void ModelSpec::require_theta(double theta) const
{
    if (!std::isfinite(theta) || !domain.in_closure(theta) || !(theta > 0.0) || !(premium_at(theta) > 0.0))
        fail(ErrorCode::ThetaOutOfDomain, "theta=" + std::to_string(theta) + " is outside the parameter domain");
}

}  // namespace ruinlab
