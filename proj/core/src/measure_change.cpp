#include "ruinlab/measure_change.hpp"

#include <cmath>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "ruinlab/error.hpp"
#include "ruinlab/lundberg.hpp"

namespace ruinlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxLogWeight = 700.0;

}  // namespace

PathLaw base_law(const ModelSpec& model, double theta)
{
    model.require_theta(theta);
    return PathLaw{theta, model.premium_at(theta), model.interarrival_at(theta), model.claim};
}

TiltedModel::TiltedModel(ModelSpec base, double r, XiMode xi)
    : base_(std::move(base)), r_(r), xi_(xi), claim_tilted_(base_.claim), mixing_(base_.mixing), log_claim_mgf_(0.0)
{
    if (!(r >= 0.0) || !std::isfinite(r)) fail(ErrorCode::InvalidArgument, "tilt r must be finite and non-negative");
    claim_tilted_ = tilt(base_.claim, r);
    log_claim_mgf_ = log_mgf(base_.claim, r);
    if (xi_ == XiMode::exp_tilt) {
        log_mixing_mgf_ = log_mgf(base_.mixing, r);
        if (log_mixing_mgf_ == kInf) {
            fail(ErrorCode::MixingMgfInfinite, "E[exp(r Theta)] is infinite for " + base_.mixing.describe() +
                                                   " at r=" + std::to_string(r));
        }
        mixing_ = tilt(base_.mixing, r);
    }
}

TiltedModel TiltedModel::at_adjustment(const ModelSpec& base, double theta)
{
    TiltedModel out(base, adjustment_coefficient(base, theta), XiMode::identity);
    out.pinned_theta_ = theta;
    return out;
}

double TiltedModel::kappa_at(double theta) const
{
    if (pinned_theta_ && *pinned_theta_ == theta) return 0.0;
    return kappa(base_, theta, r_);
}

Distribution TiltedModel::interarrival_tilted(double theta) const
{
    return tilt(base_.interarrival_at(theta), -(kappa_at(theta) + base_.premium_at(theta) * r_));
}

double TiltedModel::log_xi(double theta) const noexcept
{
    return xi_ == XiMode::exp_tilt ? r_ * theta - log_mixing_mgf_ : 0.0;
}

PathLaw TiltedModel::conditional_law(double theta) const
{
    base_.require_theta(theta);
    return PathLaw{theta, base_.premium_at(theta), interarrival_tilted(theta), claim_tilted_};
}

double martingale_value(const ModelSpec& model, double theta, double r, const PathState& state)
{
    if (!(state.t >= 0.0) || !(state.last_arrival >= 0.0) || state.last_arrival > state.t || state.claims < 0.0)
        fail(ErrorCode::InvalidArgument, "inconsistent path state");
    const double k = kappa(model, theta, r);
    const double beta = k + model.premium_at(theta) * r;
    const double log_head = r * state.claims - beta * state.last_arrival;

    const double age = state.age();
    if (age == 0.0) return std::exp(log_head);

    const double shape = model.interarrival.shape;
    const double survival = boost::math::gamma_q(shape, theta * age);
    if (survival < 1e-300) {
        fail(ErrorCode::DegenerateAge, "interarrival survival underflows at age=" + std::to_string(age));
    }
    // int_a^inf e^{-beta w} Gamma{k, theta}(dw) = (theta / (theta + beta))^k Q(k, (theta + beta) a)
    const double tilted_rate = theta + beta;
    const double tail = boost::math::gamma_q(shape, tilted_rate * age);
    const double log_tail = shape * std::log(theta / tilted_rate) + std::log(tail);
    return std::exp(log_head + log_mgf(model.claim, r) + log_tail - std::log(survival));
}

double log_path_weight(const TiltedModel& tilted, double theta, double tau, double reserve_at_tau, double u)
{
    if (!(reserve_at_tau < 0.0)) fail(ErrorCode::NotRuined, "path weight requires a negative reserve at ruin");
    if (!std::isfinite(tau) || tau < 0.0) fail(ErrorCode::InvalidArgument, "ruin time must be finite");
    const double r = tilted.r();
    return r * reserve_at_tau + tilted.kappa_at(theta) * tau - tilted.log_xi(theta) - r * u;
}

double path_weight(const TiltedModel& tilted, double theta, double tau, double reserve_at_tau, double u)
{
    const double lw = log_path_weight(tilted, theta, tau, reserve_at_tau, u);
    if (lw > kMaxLogWeight) fail(ErrorCode::WeightOverflow, "log weight " + std::to_string(lw) + " exceeds 700");
    return std::exp(lw);
}

}  // namespace ruinlab
