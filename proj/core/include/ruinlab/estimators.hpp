#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "ruinlab/measure_change.hpp"
#include "ruinlab/simulator.hpp"

namespace ruinlab {

enum class EstimateMode { is_mixed, is_conditional, crude, bound_lower, bound_upper };

std::string_view to_string(EstimateMode mode) noexcept;

/// Point estimate of a ruin probability with its Monte Carlo error.
struct Estimate {
    EstimateMode mode = EstimateMode::is_mixed;
    double value = 0.0;
    /// log(value), kept separately so that tiny probabilities can be reported.
    double log_value = -std::numeric_limits<double>::infinity();
    double std_error = 0.0;
    std::pair<double, double> ci95{0.0, 0.0};
    std::uint64_t n_paths = 0;
    double u = 0.0;
    /// Tilt exponent used; NaN for crude and per-theta adjustment runs.
    double r = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> theta;
    /// Fraction of paths stopped by the claim cap or horizon without ruin.
    double truncation_fraction = 0.0;
    /// True when truncation_fraction exceeds 0.1%.
    bool flagged = false;
    /// Largest per-path contribution over the mean; a variance health signal.
    double max_weight_ratio = 0.0;
    std::uint64_t seed = 0;
    double runtime_ms = 0.0;
    BatchSummary summary;

    double relative_se() const noexcept { return value > 0.0 ? std_error / value : 0.0; }
};

struct RChoice {
    enum class Kind { r_star, adjustment, fixed };
    Kind kind = Kind::r_star;
    double value = 0.0;

    static RChoice r_star() { return {Kind::r_star, 0.0}; }
    static RChoice adjustment() { return {Kind::adjustment, 0.0}; }
    static RChoice fixed(double r) { return {Kind::fixed, r}; }
};

struct RunOptions {
    std::uint64_t n = 100'000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::uint64_t claim_cap = kDefaultClaimCap;
};

/// psi(u) = E_Q[exp(r R_tau + kappa_Theta(r) tau) / xi(Theta)] exp(-r u)
/// with Theta drawn from the reweighted mixing law. Accepts r_star or fixed.
Estimate estimate_ruin_is(const ModelSpec& model, double u, RChoice r_choice, XiMode xi, const RunOptions& options);

/// psi_theta(u) for a fixed theta. In adjustment mode r = R(theta), kappa is
/// exactly 0 and every contribution is at most exp(-R(theta) u).
Estimate estimate_ruin_conditional(const ModelSpec& model, double theta, double u, RChoice r_choice,
                                   const RunOptions& options);

struct BoundsResult {
    Estimate lower;
    /// Full estimator on the same paths as the lower bound.
    Estimate point;
    std::optional<Estimate> upper;
    /// Why the upper bound is absent (MixingMgfInfinite), empty otherwise.
    std::string upper_unavailable;
};

/// Lower bound drops the kappa tau term from the mixed estimator at R*;
/// the upper bound simulates under the exp-tilted mixing law and replaces
/// 1 / xi(Theta) by E_P[exp(R* Theta)].
BoundsResult estimate_bounds(const ModelSpec& model, double u, const RunOptions& options);

/// Fraction of P-paths ruined by `horizon`. Biased low for psi(u).
Estimate crude_monte_carlo(const ModelSpec& model, double u, double horizon, const RunOptions& options);

/// Classical compound Poisson result with exponential claims:
/// (lambda / (c eta)) exp(-(eta - lambda / c) u).
double cramer_lundberg_closed_form(double eta, double lambda, double c, double u);

enum class DiagnosticKind { martingale, lemma4, slln, ruin_certainty };

std::string_view to_string(DiagnosticKind kind) noexcept;

struct DiagnosticReport {
    DiagnosticKind kind;
    double observed;
    double expected;
    double tolerance;
    bool pass;
};

struct DiagnosticParams {
    double theta = 0.0;
    double r = 0.0;
    /// Martingale evaluation time.
    double t = 1.0;
    /// Initial reserve for ruin_certainty.
    double u = 10.0;
    std::uint64_t n = 10'000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::uint64_t claim_cap = kDefaultClaimCap;
    /// Target claim count for the SLLN path.
    double slln_claims = 1e5;
};

DiagnosticReport run_diagnostic(DiagnosticKind kind, const ModelSpec& model, const DiagnosticParams& params);

}  // namespace ruinlab
