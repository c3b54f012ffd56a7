#include "ruinlab/lundberg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ruinlab/error.hpp"

namespace ruinlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBoundaryEps = 1e-9;

std::string at(double theta, double r)
{
    return "(theta=" + std::to_string(theta) + ", r=" + std::to_string(r) + ")";
}

/// Closed form without argument checks; accepts r < 0 so central
/// differences work at r = 0.
double kappa_closed_form(const ModelSpec& model, double theta, double r)
{
    const double log_mx = log_mgf(model.claim, r);
    if (log_mx == kInf) fail(ErrorCode::ClaimMgfInfinite, "claim MGF is infinite at " + at(theta, r));
    return theta * std::expm1(log_mx / model.interarrival.shape) - model.premium_at(theta) * r;
}

double golden_section_max(const auto& f, double a, double b, double tol)
{
    constexpr double inv_phi = 0.6180339887498949;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? c : d;
}

bool admissible(const ModelSpec& model, double theta)
{
    return theta > 0.0 && model.premium_at(theta) > 0.0 && net_profit(model, theta);
}

}  // namespace

double kappa(const ModelSpec& model, double theta, double r)
{
    model.require_theta(theta);
    if (!(r >= 0.0)) fail(ErrorCode::InvalidArgument, "tilt r must be non-negative " + at(theta, r));
    if (r == 0.0) return 0.0;
    return kappa_closed_form(model, theta, r);
}

double kappa_by_bisection(const Distribution& claim, const Distribution& interarrival, double premium, double r,
                          double tol)
{
    if (r == 0.0) return 0.0;
    const double log_mx = log_mgf(claim, r);
    if (log_mx == kInf) fail(ErrorCode::ClaimMgfInfinite, "claim MGF is infinite at r=" + std::to_string(r));

    // g is decreasing in kappa; at kappa = -c r the interarrival MGF is 1.
    const auto g = [&](double k) { return log_mx + log_mgf(interarrival, -k - premium * r); };
    double lo = -premium * r;
    for (double step = 1.0; !(g(lo) > 0.0); step *= 2.0) {
        // Only reachable for r < 0.
        lo -= step;
        if (step > 1e300) fail(ErrorCode::SolverFailure, "kappa bracket search diverged");
    }
    double step = std::max(1.0, std::abs(lo));
    double hi = lo + step;
    while (g(hi) > 0.0) {
        step *= 2.0;
        hi = lo + step;
        if (step > 1e300) fail(ErrorCode::SolverFailure, "kappa bracket search diverged");
    }
    for (int i = 0; i < 400; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= tol * std::max(1.0, std::abs(mid)) || mid == lo || mid == hi) break;
        if (g(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

KappaPrimeRoutes kappa_prime_routes(const ModelSpec& model, double theta, double r)
{
    model.require_theta(theta);
    if (!(r >= 0.0)) fail(ErrorCode::InvalidArgument, "tilt r must be non-negative " + at(theta, r));

    const double h = 1e-6 * std::max(1.0, r);
    const double fd = (kappa_closed_form(model, theta, r + h) - kappa_closed_form(model, theta, r - h)) / (2.0 * h);

    const double k = r == 0.0 ? 0.0 : kappa_closed_form(model, theta, r);
    const double c = model.premium_at(theta);
    const double mean_claim = mean(tilt(model.claim, r));
    const double mean_wait = mean(tilt(model.interarrival_at(theta), -(k + c * r)));
    return KappaPrimeRoutes{fd, mean_claim / mean_wait - c};
}

double kappa_prime(const ModelSpec& model, double theta, double r)
{
    const auto routes = kappa_prime_routes(model, theta, r);
    if (std::abs(routes.finite_difference - routes.tilted_moments) > 1e-5 * std::max(1.0, std::abs(routes.tilted_moments))) {
        fail(ErrorCode::DerivativeMismatch, "finite difference " + std::to_string(routes.finite_difference) +
                                                " vs tilted moments " + std::to_string(routes.tilted_moments) + " at " +
                                                at(theta, r));
    }
    return routes.tilted_moments;
}

bool net_profit(const ModelSpec& model, double theta)
{
    return model.premium_at(theta) > mean(model.claim) / mean(model.interarrival_at(theta));
}

double adjustment_coefficient(const ModelSpec& model, double theta, double rel_tol)
{
    model.require_theta(theta);
    if (!net_profit(model, theta)) {
        fail(ErrorCode::NetProfitViolated, "net profit condition fails at theta=" + std::to_string(theta));
    }
    const auto k = [&](double r) { return kappa_closed_form(model, theta, r); };

    const double sup = mgf_domain_sup(model.claim);
    double hi;
    if (std::isfinite(sup)) {
        hi = sup - kBoundaryEps * std::max(1.0, sup);
        if (!(k(hi) > 0.0)) {
            fail(ErrorCode::NoPositiveRoot,
                 "kappa stays non-positive up to the claim MGF boundary at theta=" + std::to_string(theta));
        }
    } else {
        hi = 1.0;
        while (!(k(hi) > 0.0)) {
            hi *= 2.0;
            if (hi > 1e12) fail(ErrorCode::NoPositiveRoot, "no positive root of kappa at theta=" + std::to_string(theta));
        }
    }

    // kappa < 0 on (0, R), > 0 beyond (convexity with kappa'(0) < 0).
    double lo = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi || hi - lo <= rel_tol * std::max(1.0, hi)) break;
        if (k(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (lo == 0.0) return hi;
    return std::abs(k(lo)) < std::abs(k(hi)) ? lo : hi;
}

std::vector<double> theta_grid(const ModelSpec& model, int points)
{
    const Domain& d = model.domain;
    if (d.is_point()) return {d.lo};
    if (points < 2) fail(ErrorCode::InvalidArgument, "theta grid needs at least two points");

    double lo = d.lo;
    double hi = d.bounded() ? d.hi : std::max(quantile(model.mixing, 1.0 - 1e-6), d.lo + 1e-6);
    const double nudge = kBoundaryEps * std::max(1.0, hi - lo);
    if (!admissible(model, lo)) lo += nudge;
    if (!admissible(model, hi)) hi -= nudge;

    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
    grid.back() = hi;
    return grid;
}

RStarResult solve_r_star(const ModelSpec& model)
{
    RStarResult out;
    out.grid = theta_grid(model);
    out.adjustment.reserve(out.grid.size());
    for (double theta : out.grid) {
        if (!net_profit(model, theta)) {
            fail(ErrorCode::NetProfitViolated, "net profit condition fails at theta=" + std::to_string(theta));
        }
        out.adjustment.push_back(adjustment_coefficient(model, theta));
    }

    const auto best = std::max_element(out.adjustment.begin(), out.adjustment.end());
    const auto i = static_cast<std::size_t>(best - out.adjustment.begin());
    out.r_star = *best;
    out.argmax_theta = out.grid[i];

    if (out.grid.size() > 1) {
        const double a = out.grid[i == 0 ? 0 : i - 1];
        const double b = out.grid[std::min(i + 1, out.grid.size() - 1)];
        const auto R = [&](double theta) { return adjustment_coefficient(model, theta); };
        const double theta = golden_section_max(R, a, b, 1e-8);
        const double refined = R(theta);
        if (refined > out.r_star) {
            out.r_star = refined;
            out.argmax_theta = theta;
        }
    }

    if (!(out.r_star < mgf_domain_sup(model.claim))) {
        fail(ErrorCode::MgfInfiniteAtRStar, "E[exp(R* X)] is infinite at R*=" + std::to_string(out.r_star));
    }
    for (double theta : out.grid) {
        if (kappa_closed_form(model, theta, out.r_star) < -1e-10) {
            fail(ErrorCode::SolverFailure, "kappa(R*) < 0 at theta=" + std::to_string(theta));
        }
    }
    return out;
}

double r_star(const ModelSpec& model) { return solve_r_star(model).r_star; }

LundbergSolution solve_at(const ModelSpec& model, double theta, double r)
{
    LundbergSolution s{};
    s.theta = theta;
    s.r = r;
    s.kappa = kappa(model, theta, r);
    s.kappa_prime = kappa_prime(model, theta, r);
    s.net_profit_ok = net_profit(model, theta);
    if (s.net_profit_ok) s.adjustment = adjustment_coefficient(model, theta);
    return s;
}

}  // namespace ruinlab
