#pragma once

#include <cstdint>
#include <optional>

#include "ruinlab/model.hpp"

namespace ruinlab {

/// Law of one conditional path: fixed theta, premium rate, interarrival and
/// claim laws. Used both for P_theta and for the tilted Q_theta^r.
struct PathLaw {
    double theta;
    double premium;
    Distribution interarrival;
    Distribution claim;
};

/// Conditional law of the base model at theta.
PathLaw base_law(const ModelSpec& model, double theta);

/// Mixing reweight xi: identity keeps P_Theta, exp_tilt uses
/// xi(theta) = exp(r theta) / E_P[exp(r Theta)] with r the model tilt.
enum class XiMode { identity, exp_tilt };

/// The exponentially tilted model Q^r: claims tilted by r, interarrivals of
/// the theta-component tilted by -(kappa_theta(r) + c(theta) r), and the
/// mixing law reweighted by xi. Immutable after construction.
class TiltedModel {
public:
    /// Throws TiltOutOfDomain when the claim MGF is infinite at r and
    /// MixingMgfInfinite when exp_tilt is requested but E_P[exp(r Theta)]
    /// is infinite.
    TiltedModel(ModelSpec base, double r, XiMode xi);

    /// Q_theta^{R(theta)} for a single theta, with kappa_theta(R(theta)) pinned
    /// to exactly 0 (the adjustment-coefficient tilt).
    static TiltedModel at_adjustment(const ModelSpec& base, double theta);

    const ModelSpec& base() const noexcept { return base_; }
    double r() const noexcept { return r_; }
    XiMode xi_mode() const noexcept { return xi_; }

    const Distribution& claim_tilted() const noexcept { return claim_tilted_; }
    /// Law of Theta under Q.
    const Distribution& mixing() const noexcept { return mixing_; }
    double log_claim_mgf() const noexcept { return log_claim_mgf_; }
    /// log E_P[exp(r Theta)]; 0 in identity mode.
    double log_mixing_mgf() const noexcept { return log_mixing_mgf_; }

    double kappa_at(double theta) const;
    Distribution interarrival_tilted(double theta) const;
    double log_xi(double theta) const noexcept;

    /// Conditional law under Q_theta^r.
    PathLaw conditional_law(double theta) const;

private:
    ModelSpec base_;
    double r_;
    XiMode xi_;
    Distribution claim_tilted_;
    Distribution mixing_;
    double log_claim_mgf_;
    double log_mixing_mgf_ = 0.0;
    std::optional<double> pinned_theta_;
};

/// Snapshot of the claims process at time t.
struct PathState {
    double t = 0.0;
    double claims = 0.0;
    std::uint64_t count = 0;
    double last_arrival = 0.0;

    double age() const noexcept { return t - last_arrival; }
};

/// Likelihood-ratio martingale dQ_theta^r / dP_theta on F_t:
///   exp(r S_t - (kappa + c r) T_{N_t} + log M_X(r))
///     * int_{age}^inf exp(-(kappa + c r) w) K(theta)(dw) / (1 - K(theta)(age)).
/// At a claim epoch (age = 0) the last factor is 1 / M_X(r) and the value
/// reduces to exp(r S_t - (kappa + c r) T_{N_t}); that reduction is applied
/// exactly, so the value at t = 0 is exactly 1.
double martingale_value(const ModelSpec& model, double theta, double r, const PathState& state);

/// log of exp(r R_tau + kappa tau) / xi(theta) * exp(-r u), the importance
/// weight of a ruined path. Throws NotRuined when reserve_at_tau >= 0.
double log_path_weight(const TiltedModel& tilted, double theta, double tau, double reserve_at_tau, double u);

/// exp(log_path_weight); throws WeightOverflow above exp(700).
double path_weight(const TiltedModel& tilted, double theta, double tau, double reserve_at_tau, double u);

}  // namespace ruinlab
