#include "ruinlab/estimators.hpp"

#include <chrono>
#include <cmath>

#include "ruinlab/error.hpp"
#include "ruinlab/lundberg.hpp"

namespace ruinlab {

namespace {

constexpr double kFlagFraction = 1e-3;
constexpr double kMaxTruncation = 1e-2;

using Clock = std::chrono::steady_clock;

void require_paths(std::uint64_t n)
{
    if (n < 100) fail(ErrorCode::InvalidArgument, "at least 100 paths are required");
}

void require_reserve(double u)
{
    if (!(u >= 0.0) || !std::isfinite(u)) fail(ErrorCode::InvalidArgument, "initial reserve must be finite and >= 0");
}

double resolve_r(const ModelSpec& model, RChoice choice)
{
    switch (choice.kind) {
    case RChoice::Kind::r_star: return r_star(model);
    case RChoice::Kind::fixed:
        if (!(choice.value > 0.0) || !(choice.value < mgf_domain_sup(model.claim)))
            fail(ErrorCode::InvalidArgument, "fixed r must lie in (0, claim MGF domain)");
        return choice.value;
    case RChoice::Kind::adjustment: break;
    }
    fail(ErrorCode::InvalidArgument, "adjustment tilt is only defined for a fixed theta");
}

Estimate finish(EstimateMode mode, const BatchSummary& s, double u, std::uint64_t seed, Clock::time_point start,
                bool enforce_truncation)
{
    Estimate e;
    e.mode = mode;
    e.summary = s;
    e.n_paths = s.n_paths;
    e.u = u;
    e.seed = seed;
    e.value = s.mean();
    const double m = s.scaled_mean();
    e.log_value = m > 0.0 ? s.log_scale + std::log(m) : -std::numeric_limits<double>::infinity();
    e.std_error = s.std_error();
    e.ci95 = {std::max(0.0, e.value - 1.96 * e.std_error), e.value + 1.96 * e.std_error};
    e.max_weight_ratio = m > 0.0 && s.ruin_count > 0 ? s.max / m : 0.0;
    if (enforce_truncation) {
        e.truncation_fraction = static_cast<double>(s.n_paths - s.ruin_count) / static_cast<double>(s.n_paths);
        e.flagged = e.truncation_fraction > kFlagFraction;
        if (e.truncation_fraction > kMaxTruncation) {
            fail(ErrorCode::TruncationExcessive,
                 std::to_string(s.n_paths - s.ruin_count) + " of " + std::to_string(s.n_paths) +
                     " tilted paths hit the claim cap without ruin");
        }
    }
    e.runtime_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return e;
}

BatchOptions batch_options(const RunOptions& o, double log_scale)
{
    BatchOptions b;
    b.n = o.n;
    b.seed = o.seed;
    b.workers = o.workers;
    b.log_scale = log_scale;
    return b;
}

}  // namespace

std::string_view to_string(EstimateMode mode) noexcept
{
    switch (mode) {
    case EstimateMode::is_mixed: return "is_mixed";
    case EstimateMode::is_conditional: return "is_conditional";
    case EstimateMode::crude: return "crude";
    case EstimateMode::bound_lower: return "bound_lower";
    case EstimateMode::bound_upper: return "bound_upper";
    }
    return "unknown";
}

std::string_view to_string(DiagnosticKind kind) noexcept
{
    switch (kind) {
    case DiagnosticKind::martingale: return "martingale";
    case DiagnosticKind::lemma4: return "lemma4";
    case DiagnosticKind::slln: return "slln";
    case DiagnosticKind::ruin_certainty: return "ruin_certainty";
    }
    return "unknown";
}

Estimate estimate_ruin_is(const ModelSpec& model, double u, RChoice r_choice, XiMode xi, const RunOptions& options)
{
    const auto start = Clock::now();
    model.validate();
    require_reserve(u);
    require_paths(options.n);
    const double r = resolve_r(model, r_choice);

    const PathSource source(TiltedModel(model, r, xi));
    const auto batch =
        simulate_batch(source, u, StopRule::ruin_or_claim_cap(options.claim_cap), batch_options(options, -r * u));
    Estimate e = finish(EstimateMode::is_mixed, batch.summary, u, options.seed, start, true);
    e.r = r;
    return e;
}

Estimate estimate_ruin_conditional(const ModelSpec& model, double theta, double u, RChoice r_choice,
                                   const RunOptions& options)
{
    const auto start = Clock::now();
    model.validate();
    model.require_theta(theta);
    require_reserve(u);
    require_paths(options.n);

    const bool adjustment = r_choice.kind == RChoice::Kind::adjustment;
    TiltedModel tilted = adjustment ? TiltedModel::at_adjustment(model, theta)
                                    : TiltedModel(model, resolve_r(model, r_choice), XiMode::identity);
    const double r = tilted.r();
    const double log_bound = -r * u;

    LogContribution contribution = default_log_contribution;
    if (adjustment) {
        contribution = [log_bound](const PathResult& p) {
            const double lc = default_log_contribution(p);
            if (lc > log_bound) fail(ErrorCode::SolverFailure, "contribution exceeds the Lundberg bound exp(-R u)");
            return lc;
        };
    }
    const PathSource source(std::move(tilted), theta);
    const auto batch = simulate_batch(source, u, StopRule::ruin_or_claim_cap(options.claim_cap),
                                      batch_options(options, log_bound), contribution);
    Estimate e = finish(EstimateMode::is_conditional, batch.summary, u, options.seed, start, true);
    e.r = r;
    e.theta = theta;
    return e;
}

BoundsResult estimate_bounds(const ModelSpec& model, double u, const RunOptions& options)
{
    model.validate();
    require_reserve(u);
    require_paths(options.n);
    const double rs = r_star(model);
    const StopRule stop = StopRule::ruin_or_claim_cap(options.claim_cap);
    const BatchOptions bo = batch_options(options, -rs * u);

    auto start = Clock::now();
    const PathSource identity_source(TiltedModel(model, rs, XiMode::identity));
    const auto point_batch = simulate_batch(identity_source, u, stop, bo);
    Estimate point = finish(EstimateMode::is_mixed, point_batch.summary, u, options.seed, start, true);
    point.r = rs;

    // Same seed, same paths: drop the kappa tau >= 0 term.
    start = Clock::now();
    const auto lower_batch = simulate_batch(identity_source, u, stop, bo, [rs, u](const PathResult& p) {
        return p.ruined ? rs * p.reserve_at_tau - rs * u : -std::numeric_limits<double>::infinity();
    });
    Estimate lower = finish(EstimateMode::bound_lower, lower_batch.summary, u, options.seed, start, true);
    lower.r = rs;

    BoundsResult out{lower, point, std::nullopt, {}};
    try {
        start = Clock::now();
        TiltedModel nu(model, rs, XiMode::exp_tilt);
        const double log_mixing_mgf = nu.log_mixing_mgf();
        const PathSource nu_source(nu);
        // E_P[e^{R* Theta}] e^{R* R_tau + kappa tau} e^{-R* u} = weight * xi(theta) * E_P[e^{R* Theta}]
        const auto upper_batch = simulate_batch(nu_source, u, stop, bo, [&nu, log_mixing_mgf](const PathResult& p) {
            if (!p.ruined) return -std::numeric_limits<double>::infinity();
            return *p.log_weight + nu.log_xi(p.theta) + log_mixing_mgf;
        });
        Estimate upper = finish(EstimateMode::bound_upper, upper_batch.summary, u, options.seed, start, true);
        upper.r = rs;
        out.upper = upper;
    } catch (const Error& err) {
        if (err.code() != ErrorCode::MixingMgfInfinite) throw;
        out.upper_unavailable = err.what();
    }
    return out;
}

Estimate crude_monte_carlo(const ModelSpec& model, double u, double horizon, const RunOptions& options)
{
    const auto start = Clock::now();
    model.validate();
    require_reserve(u);
    require_paths(options.n);
    const PathSource source(model);
    const auto batch = simulate_batch(source, u, StopRule::ruin_or_horizon(horizon), batch_options(options, 0.0));
    return finish(EstimateMode::crude, batch.summary, u, options.seed, start, false);
}

double cramer_lundberg_closed_form(double eta, double lambda, double c, double u)
{
    if (!(eta > 0.0 && lambda > 0.0 && c > 0.0)) fail(ErrorCode::InvalidArgument, "rates and premium must be positive");
    if (!(c * eta > lambda)) fail(ErrorCode::NetProfitViolated, "c * eta must exceed lambda");
    return lambda / (c * eta) * std::exp(-(eta - lambda / c) * u);
}

DiagnosticReport run_diagnostic(DiagnosticKind kind, const ModelSpec& model, const DiagnosticParams& p)
{
    model.validate();
    DiagnosticReport rep{kind, 0.0, 0.0, 0.0, false};
    switch (kind) {
    case DiagnosticKind::lemma4: {
        const auto routes = kappa_prime_routes(model, p.theta, p.r);
        rep.observed = routes.finite_difference;
        rep.expected = routes.tilted_moments;
        rep.tolerance = 1e-5 * std::max(1.0, std::abs(rep.expected));
        break;
    }
    case DiagnosticKind::martingale: {
        rep.expected = 1.0;
        if (p.t == 0.0) {
            rep.observed = martingale_value(model, p.theta, p.r, PathState{});
            rep.tolerance = 0.0;
            break;
        }
        if (p.n < 2) fail(ErrorCode::InvalidArgument, "martingale check needs at least two paths");
        const PathLaw law = base_law(model, p.theta);
        double sum = 0.0;
        double sum_sq = 0.0;
        for (std::uint64_t i = 0; i < p.n; ++i) {
            RngStream stream(p.seed, i);
            const double m = martingale_value(model, p.theta, p.r, advance_to(law, p.t, stream));
            sum += m;
            sum_sq += m * m;
        }
        const double n = static_cast<double>(p.n);
        rep.observed = sum / n;
        const double var = std::max(0.0, (sum_sq - n * rep.observed * rep.observed) / (n - 1.0));
        rep.tolerance = 3.0 * std::sqrt(var / n);
        break;
    }
    case DiagnosticKind::slln: {
        const PathLaw law = p.r == 0.0 ? base_law(model, p.theta)
                                       : TiltedModel(model, p.r, XiMode::identity).conditional_law(p.theta);
        const double horizon = p.slln_claims * mean(law.interarrival);
        RngStream stream(p.seed, 0);
        rep.observed = slln_drift(law, horizon, stream);
        rep.expected = -kappa_prime(model, p.theta, p.r);
        rep.tolerance = 0.05 * std::abs(rep.expected);
        break;
    }
    case DiagnosticKind::ruin_certainty: {
        const PathSource source(TiltedModel(model, p.r, XiMode::identity));
        BatchOptions bo;
        bo.n = p.n;
        bo.seed = p.seed;
        bo.workers = p.workers;
        const auto batch = simulate_batch(source, p.u, StopRule::ruin_or_claim_cap(p.claim_cap), bo,
                                          [](const PathResult& r) { return r.ruined ? 0.0 : -INFINITY; });
        rep.observed = static_cast<double>(batch.summary.ruin_count) / static_cast<double>(batch.summary.n_paths);
        rep.expected = 1.0;
        rep.tolerance = 1e-3;
        break;
    }
    }
    rep.pass = std::abs(rep.observed - rep.expected) <= rep.tolerance;
    return rep;
}

}  // namespace ruinlab
