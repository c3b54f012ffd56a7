#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "ruinlab/measure_change.hpp"
#include "ruinlab/rng.hpp"

namespace ruinlab {

/// Finite truncation of the infinite-horizon ruin event.
struct StopRule {
    enum class Kind { horizon, claim_cap };

    Kind kind;
    double horizon = std::numeric_limits<double>::infinity();
    std::uint64_t claim_cap = 0;

    static StopRule ruin_or_horizon(double T);
    static StopRule ruin_or_claim_cap(std::uint64_t n_max);
};

inline constexpr std::uint64_t kDefaultClaimCap = 10'000'000;

/// Summary of one simulated reserve trajectory. When ruined, tau is the
/// arrival time of claim n_claims and reserve_at_tau < 0 is the reserve
/// right after that claim; otherwise reserve_at_tau is the reserve at the
/// stopping time.
struct PathResult {
    double theta = 0.0;
    bool ruined = false;
    double tau = std::numeric_limits<double>::infinity();
    double reserve_at_tau = 0.0;
    std::uint64_t n_claims = 0;
    double total_time = 0.0;
    /// Importance weight; filled only for ruined paths under a tilted model.
    std::optional<double> weight;
    std::optional<double> log_weight;
};

PathResult simulate_path(const PathLaw& law, double u, const StopRule& stop, RngStream& stream);
/// Theta is drawn from the mixing law when not given.
PathResult simulate_path(const ModelSpec& model, std::optional<double> theta, double u, const StopRule& stop,
                         RngStream& stream);
PathResult simulate_path(const TiltedModel& tilted, std::optional<double> theta, double u, const StopRule& stop,
                         RngStream& stream);

/// Either the base model or a tilted model, optionally at a fixed theta.
class PathSource {
public:
    PathSource(ModelSpec model, std::optional<double> theta = std::nullopt);
    PathSource(TiltedModel tilted, std::optional<double> theta = std::nullopt);

    PathResult simulate(double u, const StopRule& stop, RngStream& stream) const;
    bool tilted() const noexcept { return std::holds_alternative<TiltedModel>(model_); }

private:
    std::variant<ModelSpec, TiltedModel> model_;
    std::optional<double> theta_;
};

/// Aggregate of per-path contributions. Contributions are stored relative to
/// exp(log_scale) so that very small probabilities stay representable.
struct BatchSummary {
    std::uint64_t n_paths = 0;
    std::uint64_t ruin_count = 0;
    std::uint64_t total_claims = 0;
    double sum = 0.0;
    double sum_sq = 0.0;
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
    double log_scale = 0.0;

    double scaled_mean() const noexcept;
    /// Sample standard deviation of the scaled contributions (n - 1).
    double scaled_stddev() const noexcept;
    double mean() const noexcept;
    double std_error() const noexcept;

    friend bool operator==(const BatchSummary&, const BatchSummary&) = default;
};

/// Maps a path to the log of its contribution (-inf for zero).
using LogContribution = std::function<double(const PathResult&)>;

/// Ruined paths contribute their log weight when present, else 0 (an
/// indicator); non-ruined paths contribute nothing.
double default_log_contribution(const PathResult& path);

struct BatchOptions {
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    bool keep_paths = false;
    double log_scale = 0.0;
};

struct BatchResult {
    BatchSummary summary;
    std::vector<PathResult> paths;
};

/// Simulates paths 0..n-1, path i on RngStream(seed, i). Paths are grouped
/// in fixed-size chunks and chunk summaries are combined by a pairwise
/// reduction in index order, so the result is bit-identical for any worker
/// count.
BatchResult simulate_batch(const PathSource& source, double u, const StopRule& stop, const BatchOptions& options,
                           const LogContribution& contribution = default_log_contribution);

/// Header theta,ruined,tau,reserve_at_tau,n_claims,weight; floats at 17
/// significant digits, empty cells for missing values.
void write_paths_csv(std::ostream& os, const std::vector<PathResult>& paths);

/// Runs the claims process of `law` up to time t, ignoring ruin.
PathState advance_to(const PathLaw& law, double t, RngStream& stream);

/// (r_T - u) / T over one long path, ignoring ruin.
double slln_drift(const PathLaw& law, double horizon, RngStream& stream);
/// Same under Q_theta^r (r = 0 is the base measure).
double slln_drift(const ModelSpec& model, double theta, double r, double horizon, RngStream& stream);

}  // namespace ruinlab
