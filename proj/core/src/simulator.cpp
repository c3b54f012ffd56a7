#include "ruinlab/simulator.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>
#include <mutex>
#include <thread>

#include "ruinlab/error.hpp"

namespace ruinlab {

namespace {

constexpr std::uint64_t kChunk = 256;
constexpr double kMaxLogWeight = 700.0;

BatchSummary merge(const BatchSummary& a, const BatchSummary& b)
{
    BatchSummary out;
    out.log_scale = a.log_scale;
    out.n_paths = a.n_paths + b.n_paths;
    out.ruin_count = a.ruin_count + b.ruin_count;
    out.total_claims = a.total_claims + b.total_claims;
    out.sum = a.sum + b.sum;
    out.sum_sq = a.sum_sq + b.sum_sq;
    out.min = std::min(a.min, b.min);
    out.max = std::max(a.max, b.max);
    return out;
}

BatchSummary reduce(const std::vector<BatchSummary>& parts, std::size_t lo, std::size_t hi)
{
    if (hi - lo == 1) return parts[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    return merge(reduce(parts, lo, mid), reduce(parts, mid, hi));
}

}  // namespace

StopRule StopRule::ruin_or_horizon(double T)
{
    if (!(T > 0.0)) fail(ErrorCode::InvalidArgument, "horizon must be positive");
    return StopRule{Kind::horizon, T, 0};
}

StopRule StopRule::ruin_or_claim_cap(std::uint64_t n_max)
{
    if (n_max < 1) fail(ErrorCode::InvalidArgument, "claim cap must be at least 1");
    return StopRule{Kind::claim_cap, std::numeric_limits<double>::infinity(), n_max};
}

PathResult simulate_path(const PathLaw& law, double u, const StopRule& stop, RngStream& stream)
{
    if (!(u >= 0.0)) fail(ErrorCode::InvalidArgument, "initial reserve must be non-negative");
    PathResult out;
    out.theta = law.theta;

    double t = 0.0;
    double reserve = u;
    std::uint64_t n = 0;
    for (;;) {
        const double w = sample(law.interarrival, stream);
        if (stop.kind == StopRule::Kind::horizon && t + w > stop.horizon) {
            reserve += law.premium * (stop.horizon - t);
            t = stop.horizon;
            break;
        }
        t += w;
        reserve += law.premium * w;
        reserve -= sample(law.claim, stream);
        ++n;
        if (reserve < 0.0) {
            out.ruined = true;
            out.tau = t;
            break;
        }
        if (stop.kind == StopRule::Kind::claim_cap && n >= stop.claim_cap) break;
    }
    out.reserve_at_tau = reserve;
    out.n_claims = n;
    out.total_time = t;
    return out;
}

PathResult simulate_path(const ModelSpec& model, std::optional<double> theta, double u, const StopRule& stop,
                         RngStream& stream)
{
    const double th = theta ? *theta : sample(model.mixing, stream);
    return simulate_path(base_law(model, th), u, stop, stream);
}

PathResult simulate_path(const TiltedModel& tilted, std::optional<double> theta, double u, const StopRule& stop,
                         RngStream& stream)
{
    const double th = theta ? *theta : sample(tilted.mixing(), stream);
    PathResult out = simulate_path(tilted.conditional_law(th), u, stop, stream);
    if (out.ruined) {
        const double lw = log_path_weight(tilted, th, out.tau, out.reserve_at_tau, u);
        if (lw > kMaxLogWeight) {
            fail(ErrorCode::WeightOverflow, "log weight " + std::to_string(lw) + " at theta=" + std::to_string(th));
        }
        out.log_weight = lw;
        out.weight = std::exp(lw);
    }
    return out;
}

PathSource::PathSource(ModelSpec model, std::optional<double> theta) : model_(std::move(model)), theta_(theta)
{
    if (theta_) std::get<ModelSpec>(model_).require_theta(*theta_);
}

PathSource::PathSource(TiltedModel tilted, std::optional<double> theta) : model_(std::move(tilted)), theta_(theta)
{
    if (theta_) std::get<TiltedModel>(model_).base().require_theta(*theta_);
}

PathResult PathSource::simulate(double u, const StopRule& stop, RngStream& stream) const
{
    return std::visit([&](const auto& m) { return simulate_path(m, theta_, u, stop, stream); }, model_);
}

double BatchSummary::scaled_mean() const noexcept
{
    return n_paths == 0 ? 0.0 : sum / static_cast<double>(n_paths);
}

double BatchSummary::scaled_stddev() const noexcept
{
    if (n_paths < 2) return 0.0;
    const double n = static_cast<double>(n_paths);
    const double m = sum / n;
    const double var = (sum_sq - n * m * m) / (n - 1.0);
    return var > 0.0 ? std::sqrt(var) : 0.0;
}

double BatchSummary::mean() const noexcept { return std::exp(log_scale) * scaled_mean(); }

double BatchSummary::std_error() const noexcept
{
    return n_paths == 0 ? 0.0 : std::exp(log_scale) * scaled_stddev() / std::sqrt(static_cast<double>(n_paths));
}

double default_log_contribution(const PathResult& path)
{
    if (!path.ruined) return -std::numeric_limits<double>::infinity();
    return path.log_weight ? *path.log_weight : 0.0;
}

BatchResult simulate_batch(const PathSource& source, double u, const StopRule& stop, const BatchOptions& options,
                           const LogContribution& contribution)
{
    if (options.n < 1) fail(ErrorCode::InvalidArgument, "batch size must be at least 1");
    const std::uint64_t n_chunks = (options.n + kChunk - 1) / kChunk;

    BatchResult result;
    if (options.keep_paths) result.paths.resize(options.n);
    std::vector<BatchSummary> parts(n_chunks);

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    const auto work = [&] {
        try {
            for (std::uint64_t c = next++; c < n_chunks; c = next++) {
                BatchSummary s;
                s.log_scale = options.log_scale;
                const std::uint64_t end = std::min(options.n, (c + 1) * kChunk);
                for (std::uint64_t i = c * kChunk; i < end; ++i) {
                    RngStream stream(options.seed, i);
                    PathResult path = source.simulate(u, stop, stream);
                    ++s.n_paths;
                    s.total_claims += path.n_claims;
                    if (path.ruined) ++s.ruin_count;
                    const double lc = contribution(path);
                    const double v = std::exp(lc - options.log_scale);
                    s.sum += v;
                    s.sum_sq += v * v;
                    if (path.ruined) {
                        s.min = std::min(s.min, v);
                        s.max = std::max(s.max, v);
                    }
                    if (options.keep_paths) result.paths[i] = std::move(path);
                }
                parts[c] = s;
            }
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = n_chunks;
        }
    };

    const unsigned workers = std::max(1U, std::min<unsigned>(options.workers, static_cast<unsigned>(n_chunks)));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (error) std::rethrow_exception(error);

    result.summary = reduce(parts, 0, parts.size());
    return result;
}

void write_paths_csv(std::ostream& os, const std::vector<PathResult>& paths)
{
    const auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    os << "theta,ruined,tau,reserve_at_tau,n_claims,weight\n";
    for (const auto& p : paths) {
        os << num(p.theta) << ',' << (p.ruined ? 1 : 0) << ',' << (p.ruined ? num(p.tau) : "") << ','
           << num(p.reserve_at_tau) << ',' << p.n_claims << ',' << (p.weight ? num(*p.weight) : "") << '\n';
    }
}

PathState advance_to(const PathLaw& law, double t, RngStream& stream)
{
    if (!(t >= 0.0)) fail(ErrorCode::InvalidArgument, "time must be non-negative");
    PathState state;
    state.t = t;
    double clock = 0.0;
    for (;;) {
        const double w = sample(law.interarrival, stream);
        if (clock + w > t) break;
        clock += w;
        state.claims += sample(law.claim, stream);
        ++state.count;
        state.last_arrival = clock;
    }
    return state;
}

double slln_drift(const PathLaw& law, double horizon, RngStream& stream)
{
    if (!(horizon > 0.0)) fail(ErrorCode::InvalidArgument, "horizon must be positive");
    const PathState s = advance_to(law, horizon, stream);
    return (law.premium * horizon - s.claims) / horizon;
}

double slln_drift(const ModelSpec& model, double theta, double r, double horizon, RngStream& stream)
{
    const PathLaw law = r == 0.0 ? base_law(model, theta) : TiltedModel(model, r, XiMode::identity).conditional_law(theta);
    return slln_drift(law, horizon, stream);
}

}  // namespace ruinlab
