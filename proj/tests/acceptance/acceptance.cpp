// One line per acceptance criterion; exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "ruinlab/error.hpp"
#include "ruinlab/estimators.hpp"
#include "ruinlab/lundberg.hpp"
#include "ruinlab/presets.hpp"

using namespace ruinlab;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass;
    std::string detail;
};

char buf[512];

template <class... A>
std::string fmt(const char* f, A... a)
{
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

RunOptions opts(std::uint64_t n, std::uint64_t seed, unsigned workers = 1)
{
    RunOptions o;
    o.n = n;
    o.seed = seed;
    o.workers = workers;
    return o;
}

// 1
Outcome kappa_closed_form()
{
    const auto t0 = Clock::now();
    const ModelSpec m = preset_bound1();
    double worst = 0.0;
    for (int i = 1; i <= 9; ++i) {
        const double theta = 1.0 + i / 10.0;
        for (int j = 1; j <= 19; ++j) {
            const double r = j / 10.0;
            worst = std::max(worst, std::abs(kappa(m, theta, r) - r * (r * theta + r - theta - 2.0) / (2.0 - r)));
        }
    }
    const double s = seconds_since(t0);
    return {worst < 1e-10 && s < 1.0, fmt("max |err| = %.3g over 9x19 grid, %.3f s", worst, s)};
}

// 2
Outcome adjustment_coefficients()
{
    const auto t0 = Clock::now();
    const ModelSpec b1 = preset_bound1();
    double worst = 0.0;
    for (int i = 1; i <= 9; ++i) {
        const double theta = 1.0 + i / 10.0;
        worst = std::max(worst, std::abs(adjustment_coefficient(b1, theta) - (theta + 2.0) / (theta + 1.0)));
    }
    const double e1 = std::abs(r_star(b1) - 1.5);
    const double e2 = std::abs(r_star(preset_bound2()) - 1.0);
    double ec = 0.0;
    for (double eta : {1.0, 2.0}) ec = std::max(ec, std::abs(r_star(preset_cmpp(eta)) - eta / 2.0));
    const double s = seconds_since(t0);
    const bool ok = worst < 1e-9 && e1 < 1e-8 && e2 < 1e-8 && ec < 1e-8 && s < 1.0;
    return {ok, fmt("R(theta) err %.2g, R* err bound1 %.2g bound2 %.2g cmpp %.2g, %.3f s", worst, e1, e2, ec, s)};
}

// 3
Outcome derivative_identity()
{
    RngStream rng(2024, 0);
    double worst = 0.0;
    int points = 0;
    for (const ModelSpec& m : {preset_bound1(), preset_bound2()}) {
        const double lo = m.domain.lo;
        const double hi = m.domain.bounded() ? m.domain.hi : 10.0;
        for (int i = 0; i < 50; ++i) {
            const double theta = lo + (hi - lo) * rng.uniform();
            const double r = 1.98 * rng.uniform() + 0.01;
            const auto routes = kappa_prime_routes(m, theta, r);
            worst = std::max(worst, std::abs(routes.finite_difference - routes.tilted_moments) /
                                        std::max(1.0, std::abs(routes.tilted_moments)));
            ++points;
        }
    }
    return {worst < 1e-5, fmt("max relative gap %.3g over %d (theta, r) points", worst, points)};
}

// 4
Outcome martingale()
{
    const auto t0 = Clock::now();
    const ModelSpec m = preset_bound1();
    double exact0 = 0.0;
    for (double theta : {1.2, 1.8})
        for (double r : {1.0, 1.5}) exact0 = std::max(exact0, std::abs(martingale_value(m, theta, r, PathState{}) - 1.0));

    int cells = 0, failed = 0;
    std::string worst;
    double worst_z = 0.0;
    for (double theta : {1.2, 1.8}) {
        for (double r : {1.0, 1.5}) {
            for (double t : {0.5, 1.0, 2.0, 5.0}) {
                DiagnosticParams p;
                p.theta = theta;
                p.r = r;
                p.t = t;
                p.n = 100'000;
                p.seed = 4;
                const auto rep = run_diagnostic(DiagnosticKind::martingale, m, p);
                ++cells;
                if (!rep.pass) ++failed;
                const double z = std::abs(rep.observed - 1.0) / (rep.tolerance / 3.0);
                if (z > worst_z) {
                    worst_z = z;
                    worst = fmt("theta=%.1f r=%.1f t=%.1f mean=%.4g", theta, r, t, rep.observed);
                }
            }
        }
    }
    const double s = seconds_since(t0);
    const bool ok = exact0 <= 1e-12 && failed == 0 && s < 30.0;
    return {ok, fmt("M0 err %.2g; %d/%d cells within 3 SE; worst %.1f SE at %s; %.1f s", exact0, cells - failed, cells,
                    worst_z, worst.c_str(), s)};
}

// 5
Outcome oracle_equivalence()
{
    const auto t0 = Clock::now();
    const ModelSpec m = preset_cl_oracle(1.0, 1.0, 2.0);
    bool ok = true;
    double worst_z = 0.0, worst_rse = 0.0;
    for (double u : {0.0, 1.0, 2.0, 5.0, 10.0}) {
        const Estimate e = estimate_ruin_conditional(m, 1.0, u, RChoice::adjustment(), opts(100'000, 5));
        const double exact = cramer_lundberg_closed_form(1.0, 1.0, 2.0, u);
        const double z = std::abs(e.value - exact) / e.std_error;
        worst_z = std::max(worst_z, z);
        worst_rse = std::max(worst_rse, e.relative_se());
        ok = ok && z <= 3.0 && e.relative_se() < 0.01;
    }
    const double s = seconds_since(t0);
    return {ok && s < 20.0, fmt("worst %.2f SE, worst relative SE %.3g%%, %.2f s", worst_z, 100.0 * worst_rse, s)};
}

// 6
Outcome ruin_certainty()
{
    DiagnosticParams p;
    p.theta = 1.5;
    p.r = r_star(preset_bound1());
    p.u = 10.0;
    p.n = 10'000;
    p.seed = 6;
    p.claim_cap = 10'000'000;
    const auto rep = run_diagnostic(DiagnosticKind::ruin_certainty, preset_bound1(), p);
    return {rep.observed >= 0.999, fmt("ruined fraction %.5f of %llu paths", rep.observed, 10'000ULL)};
}

// 7
Outcome lundberg_bound()
{
    const ModelSpec m = preset_bound2();
    bool ok = true;
    std::string d;
    for (double u : {1.0, 2.0, 5.0}) {
        const Estimate e = estimate_ruin_is(m, u, RChoice::r_star(), XiMode::identity, opts(100'000, 7));
        const double bound = std::exp(-u) * (1.0 + 3.0 * e.relative_se());
        ok = ok && e.value <= bound;
        d += fmt("u=%g %.4g<=%.4g ", u, e.value, bound);
    }
    return {ok, d};
}

// 8
Outcome sandwich()
{
    bool ok = true;
    std::string d;
    for (double u : {1.0, 3.0}) {
        const BoundsResult b = estimate_bounds(preset_bound1(), u, opts(100'000, 8));
        if (!b.upper) return {false, "upper bound unavailable: " + b.upper_unavailable};
        const double se_lo = std::hypot(b.lower.std_error, b.point.std_error);
        const double se_hi = std::hypot(b.point.std_error, b.upper->std_error);
        ok = ok && b.lower.value <= b.point.value + 3.0 * se_lo && b.point.value <= b.upper->value + 3.0 * se_hi;
        d += fmt("u=%g %.4g<=%.4g<=%.4g ", u, b.lower.value, b.point.value, b.upper->value);
    }
    return {ok, d};
}

// 9
// The horizon doubles until an estimate of the mass still to be ruined after T,
// the mean of exp(-R(theta) R_T) over survivors, is under 0.1 SE.
Outcome cross_estimator()
{
    bool ok = true;
    std::string d;
    for (const auto& [name, m] : {std::pair{"bound1", preset_bound1()}, std::pair{"cl_oracle", preset_cl_oracle(1.0, 1.0, 2.0)}}) {
        const std::uint64_t n = 100'000;
        double horizon = 25.0;
        Estimate crude;
        double residual = 0.0;
        for (;;) {
            BatchOptions bo;
            bo.n = n;
            bo.seed = 9;
            bo.keep_paths = true;
            const auto batch = simulate_batch(PathSource(m), 1.0, StopRule::ruin_or_horizon(horizon), bo);
            double tail = 0.0;
            for (const auto& p : batch.paths) {
                if (!p.ruined) tail += std::exp(-adjustment_coefficient(m, p.theta) * p.reserve_at_tau);
            }
            residual = tail / static_cast<double>(n);
            crude = crude_monte_carlo(m, 1.0, horizon, opts(n, 9));
            if (residual < 0.1 * crude.std_error || horizon > 1e4) break;
            horizon *= 2.0;
        }
        const Estimate is = estimate_ruin_is(m, 1.0, RChoice::r_star(), XiMode::identity, opts(n, 10));
        const double z = std::abs(crude.value - is.value) / std::hypot(crude.std_error, is.std_error);
        ok = ok && residual < 0.1 * crude.std_error && z <= 3.0;
        d += fmt("%s T=%g crude %.4g IS %.4g (%.2f SE) ", name, horizon, crude.value, is.value, z);
    }
    return {ok, d};
}

// 10
Outcome slln()
{
    DiagnosticParams p;
    p.theta = 1.5;
    p.r = 1.5;
    p.seed = 10;
    p.slln_claims = 1e5;
    const auto rep = run_diagnostic(DiagnosticKind::slln, preset_bound1(), p);
    const double rel = std::abs(rep.observed - rep.expected) / std::abs(rep.expected);
    return {rel < 0.05 && std::abs(rep.expected + 9.5) < 1e-9,
            fmt("observed %.4f, expected %.4f, relative gap %.3g", rep.observed, rep.expected, rel)};
}

// 11
bool same(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool identical(const Estimate& a, const Estimate& b)
{
    return a.summary == b.summary && same(a.value, b.value) && same(a.log_value, b.log_value) &&
           same(a.std_error, b.std_error) && same(a.ci95.first, b.ci95.first) && same(a.ci95.second, b.ci95.second) &&
           a.n_paths == b.n_paths && same(a.truncation_fraction, b.truncation_fraction) &&
           same(a.max_weight_ratio, b.max_weight_ratio) && same(a.r, b.r) && a.flagged == b.flagged;
}

Outcome determinism()
{
    const ModelSpec m = preset_bound1();
    const Estimate base = estimate_ruin_is(m, 3.0, RChoice::r_star(), XiMode::identity, opts(20'000, 11, 1));
    const BoundsResult bb = estimate_bounds(m, 2.0, opts(5'000, 12, 1));
    bool ok = true;
    for (unsigned w : {4U, 8U}) {
        ok = ok && identical(base, estimate_ruin_is(m, 3.0, RChoice::r_star(), XiMode::identity, opts(20'000, 11, w)));
        const BoundsResult b = estimate_bounds(m, 2.0, opts(5'000, 12, w));
        ok = ok && identical(bb.lower, b.lower) && identical(bb.point, b.point) && identical(*bb.upper, *b.upper);
    }
    return {ok, fmt("workers 1/4/8, value %.17g", base.value)};
}

}  // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"kappa closed form on bound1 grid", kappa_closed_form},
        {"adjustment coefficients and R*", adjustment_coefficients},
        {"kappa' finite difference vs tilted moments", derivative_identity},
        {"martingale mean one", martingale},
        {"conditional IS vs classical closed form", oracle_equivalence},
        {"ruin certainty under the R* tilt", ruin_certainty},
        {"bound2 estimate below exp(-u)", lundberg_bound},
        {"lower <= IS <= upper on bound1", sandwich},
        {"crude MC vs IS", cross_estimator},
        {"SLLN drift under the tilt", slln},
        {"determinism across worker counts", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures;
}
