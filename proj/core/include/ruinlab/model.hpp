#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <variant>

#include "ruinlab/distribution.hpp"

namespace ruinlab {

/// Parameter domain D as an interval. Endpoints are excluded for membership
/// in D itself; the Lundberg solver works on the closure. hi may be +inf.
/// lo == hi describes a single-point domain (a degenerate mixing law).
struct Domain {
    double lo;
    double hi = std::numeric_limits<double>::infinity();

    bool bounded() const noexcept { return std::isfinite(hi); }
    bool is_point() const noexcept { return lo == hi; }
    bool in_closure(double theta) const noexcept { return theta >= lo && theta <= hi; }
};

/// c(theta) = slope * theta + intercept
struct AffinePremium {
    double slope;
    double intercept;
    friend bool operator==(const AffinePremium&, const AffinePremium&) = default;
};

/// c(theta) = 2 theta / (eta (1 + theta)); the Poisson-mixing example premium.
struct CmppRatioPremium {
    double eta;
    friend bool operator==(const CmppRatioPremium&, const CmppRatioPremium&) = default;
};

class PremiumSpec {
public:
    using Variant = std::variant<AffinePremium, CmppRatioPremium>;

    PremiumSpec(AffinePremium p) : v_(p) {}
    PremiumSpec(CmppRatioPremium p);

    double operator()(double theta) const noexcept;
    const Variant& variant() const noexcept { return v_; }

    friend bool operator==(const PremiumSpec&, const PremiumSpec&) = default;

private:
    Variant v_;
};

/// theta -> K(theta) = Gamma{shape, theta}: theta enters as the rate.
struct GammaRateTheta {
    double shape;

    Distribution at(double theta) const { return Gamma{shape, theta}; }
    friend bool operator==(const GammaRateTheta&, const GammaRateTheta&) = default;
};

/// Compound mixed renewal risk model: mixing law of Theta over D, the
/// conditional interarrival family, the claim law and the premium rate.
struct ModelSpec {
    Distribution mixing;
    Domain domain;
    GammaRateTheta interarrival;
    Distribution claim;
    PremiumSpec premium;

    Distribution interarrival_at(double theta) const { return interarrival.at(theta); }
    double premium_at(double theta) const { return premium(theta); }

    /// Throws InvalidArgument on structural problems (support outside D,
    /// negative claims, non-positive premium, heavy tails).
    void validate() const;

    /// Throws ThetaOutOfDomain unless theta lies in the closure of D and the
    /// conditional model is well defined there (positive rate and premium).
    void require_theta(double theta) const;

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

}  // namespace ruinlab
