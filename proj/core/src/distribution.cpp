#include "ruinlab/distribution.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "ruinlab/error.hpp"

namespace ruinlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

Gamma as_gamma(const Exponential& e) { return Gamma{1.0, e.rate}; }

// ---------------------------------------------------------------------------
// Gamma

double gamma_log_mgf(const Gamma& g, double s)
{
    if (s >= g.rate) return kInf;
    // k * log(b / (b - s)) = -k * log1p(-s / b)
    return -g.shape * std::log1p(-s / g.rate);
}

double gamma_sample(const Gamma& g, RngStream& rng)
{
    if (g.shape == 1.0) return -std::log(rng.uniform()) / g.rate;
    if (g.shape < 1.0) {
        // Gamma(k) = Gamma(k + 1) * U^(1/k)
        const double y = gamma_sample(Gamma{g.shape + 1.0, 1.0}, rng);
        return y * std::exp(std::log(rng.uniform()) / g.shape) / g.rate;
    }
    // Marsaglia & Tsang (2000) squeeze/rejection.
    const double d = g.shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v / g.rate;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v / g.rate;
    }
}

// ---------------------------------------------------------------------------
// Uniform and its tilt

double uniform_log_mgf(const Uniform& u, double s)
{
    const double width = u.hi - u.lo;
    const double x = s * width;
    if (x == 0.0) return 0.0;
    if (x > 0.0) {
        // s*hi + log((1 - e^{-x}) / x)
        return s * u.hi + std::log(-std::expm1(-x) / x);
    }
    return s * u.lo + std::log(std::expm1(x) / x);
}

double tilted_uniform_cdf(const Uniform& u, double s, double x)
{
    if (x <= u.lo) return 0.0;
    if (x >= u.hi) return 1.0;
    const double width = u.hi - u.lo;
    if (s * width == 0.0) return (x - u.lo) / width;
    if (s > 0.0) return std::exp(-s * (u.hi - x)) * std::expm1(-s * (x - u.lo)) / std::expm1(-s * width);
    return std::expm1(s * (x - u.lo)) / std::expm1(s * width);
}

double tilted_uniform_quantile(const Uniform& u, double s, double p)
{
    const double width = u.hi - u.lo;
    if (s * width == 0.0) return u.lo + p * width;
    double x;
    if (s > 0.0) {
        x = u.hi + std::log(p + (1.0 - p) * std::exp(-s * width)) / s;
    } else {
        x = u.lo + std::log1p(p * std::expm1(s * width)) / s;
    }
    return std::min(std::max(x, u.lo), u.hi);
}

double tilted_uniform_mean(const Uniform& u, double s)
{
    const double width = u.hi - u.lo;
    const double x = s * width;
    if (std::abs(x) < 1e-5) return 0.5 * (u.lo + u.hi) + s * width * width / 12.0;
    if (s > 0.0) {
        const double e = std::exp(-x);
        return (u.hi - u.lo * e) / (1.0 - e) - 1.0 / s;
    }
    const double e = std::exp(x);
    return (u.lo - u.hi * e) / (1.0 - e) - 1.0 / s;
}

// ---------------------------------------------------------------------------
// Beta and its tilt.
//
// For s >= 0 the tilted law is a mixture of Beta(a + n, b) with weights
// proportional to t_n = s^n / n! * B(a + n, b) / B(a, b) (Kummer series).
// Negative tilts use the reflection X -> 1 - X, which swaps (a, b) and
// flips the sign of s, so the series never alternates.

template <class F>
double kummer_series(double a, double b, double s, F&& term_fn, double* log_sum = nullptr)
{
    double t = 1.0;
    double sum_t = 1.0;
    double acc = term_fn(0, 1.0);
    for (int n = 1; n < 100000; ++n) {
        t *= s / n * (a + n - 1) / (a + b + n - 1);
        sum_t += t;
        acc += term_fn(n, t);
        if (t < 1e-17 * sum_t && n > s) break;
    }
    if (log_sum != nullptr) *log_sum = std::log(sum_t);
    return acc / sum_t;
}

double beta_log_mgf(const Beta& b, double s)
{
    if (s == 0.0) return 0.0;
    if (s < 0.0) return s + beta_log_mgf(Beta{b.beta, b.alpha}, -s);
    double log_sum = 0.0;
    kummer_series(b.alpha, b.beta, s, [](int, double t) { return t; }, &log_sum);
    return log_sum;
}

double tilted_beta_cdf(const Beta& b, double s, double x)
{
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    if (s == 0.0) return boost::math::ibeta(b.alpha, b.beta, x);
    if (s < 0.0) return 1.0 - tilted_beta_cdf(Beta{b.beta, b.alpha}, -s, 1.0 - x);
    return kummer_series(b.alpha, b.beta, s,
                         [&](int n, double t) { return t * boost::math::ibeta(b.alpha + n, b.beta, x); });
}

double tilted_beta_mean(const Beta& b, double s)
{
    if (s < 0.0) return 1.0 - tilted_beta_mean(Beta{b.beta, b.alpha}, -s);
    return kummer_series(b.alpha, b.beta, s,
                         [&](int n, double t) { return t * (b.alpha + n) / (b.alpha + b.beta + n); });
}

double beta_log_density(const Beta& b, double x)
{
    if (x <= 0.0 || x >= 1.0) return -kInf;
    return (b.alpha - 1.0) * std::log(x) + (b.beta - 1.0) * std::log1p(-x) - std::lgamma(b.alpha) -
           std::lgamma(b.beta) + std::lgamma(b.alpha + b.beta);
}

double base_log_mgf(const std::variant<Uniform, Beta>& base, double s)
{
    return std::visit(overloaded{[&](const Uniform& u) { return uniform_log_mgf(u, s); },
                                 [&](const Beta& b) { return beta_log_mgf(b, s); }},
                      base);
}

double tilted_cdf(const TiltedBounded& t, double x)
{
    return std::visit(overloaded{[&](const Uniform& u) { return tilted_uniform_cdf(u, t.s, x); },
                                 [&](const Beta& b) { return tilted_beta_cdf(b, t.s, x); }},
                      t.base);
}

Support base_support(const std::variant<Uniform, Beta>& base)
{
    return std::visit(overloaded{[](const Uniform& u) { return Support{u.lo, u.hi}; },
                                 [](const Beta&) { return Support{0.0, 1.0}; }},
                      base);
}

/// Bracketed inverse of a continuous CDF by bisection.
template <class Cdf>
double invert_cdf(Cdf&& F, double lo, double hi, double p, double tol)
{
    const double width = hi - lo;
    for (int i = 0; i < 200 && hi - lo > tol * width; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (F(mid) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

void validate(const Distribution::Variant& v)
{
    std::visit(overloaded{
                   [](const Gamma& g) {
                       if (!positive_finite(g.shape) || !positive_finite(g.rate))
                           fail(ErrorCode::InvalidArgument, "gamma shape and rate must be positive");
                   },
                   [](const Exponential& e) {
                       if (!positive_finite(e.rate)) fail(ErrorCode::InvalidArgument, "exponential rate must be positive");
                   },
                   [](const Uniform& u) {
                       if (!std::isfinite(u.lo) || !std::isfinite(u.hi) || !(u.lo < u.hi))
                           fail(ErrorCode::InvalidArgument, "uniform requires finite lo < hi");
                   },
                   [](const Beta& b) {
                       if (!positive_finite(b.alpha) || !positive_finite(b.beta))
                           fail(ErrorCode::InvalidArgument, "beta parameters must be positive");
                   },
                   [](const Degenerate& d) {
                       if (!std::isfinite(d.at)) fail(ErrorCode::InvalidArgument, "degenerate point must be finite");
                   },
                   [](const TiltedBounded& t) {
                       std::visit([](const auto& b) { validate(Distribution::Variant{b}); }, t.base);
                       if (!std::isfinite(t.s) || !std::isfinite(t.log_normalizer))
                           fail(ErrorCode::InvalidArgument, "tilt exponent must be finite");
                   },
               },
               v);
}

}  // namespace

Distribution::Distribution(Gamma d) : v_(d) { validate(v_); }
Distribution::Distribution(Exponential d) : v_(d) { validate(v_); }
Distribution::Distribution(Uniform d) : v_(d) { validate(v_); }
Distribution::Distribution(Beta d) : v_(d) { validate(v_); }
Distribution::Distribution(Degenerate d) : v_(d) { validate(v_); }
Distribution::Distribution(TiltedBounded d) : v_(d) { validate(v_); }

std::string Distribution::describe() const
{
    std::ostringstream os;
    os.precision(17);
    std::visit(overloaded{
                   [&](const Gamma& g) { os << "Gamma{shape=" << g.shape << ", rate=" << g.rate << "}"; },
                   [&](const Exponential& e) { os << "Exponential{rate=" << e.rate << "}"; },
                   [&](const Uniform& u) { os << "Uniform{" << u.lo << ", " << u.hi << "}"; },
                   [&](const Beta& b) { os << "Beta{" << b.alpha << ", " << b.beta << "}"; },
                   [&](const Degenerate& d) { os << "Degenerate{" << d.at << "}"; },
                   [&](const TiltedBounded& t) {
                       os << "Tilted{";
                       std::visit([&](const auto& b) { os << Distribution(b).describe(); }, t.base);
                       os << ", s=" << t.s << "}";
                   },
               },
               v_);
    return os.str();
}

double log_mgf(const Distribution& d, double s)
{
    return std::visit(overloaded{
                          [&](const Gamma& g) { return gamma_log_mgf(g, s); },
                          [&](const Exponential& e) { return gamma_log_mgf(as_gamma(e), s); },
                          [&](const Uniform& u) { return uniform_log_mgf(u, s); },
                          [&](const Beta& b) { return beta_log_mgf(b, s); },
                          [&](const Degenerate& p) { return s * p.at; },
                          [&](const TiltedBounded& t) { return base_log_mgf(t.base, t.s + s) - t.log_normalizer; },
                      },
                      d.variant());
}

double mgf_domain_sup(const Distribution& d)
{
    return std::visit(overloaded{
                          [](const Gamma& g) { return g.rate; },
                          [](const Exponential& e) { return e.rate; },
                          [](const auto&) { return kInf; },
                      },
                      d.variant());
}

MgfValue mgf(const Distribution& d, double s)
{
    const double lm = log_mgf(d, s);
    return MgfValue{lm == kInf ? kInf : std::exp(lm), mgf_domain_sup(d)};
}

Distribution tilt(const Distribution& d, double s)
{
    if (s == 0.0) return d;
    if (!(s < mgf_domain_sup(d)))
        fail(ErrorCode::TiltOutOfDomain, "cannot tilt " + d.describe() + " by s=" + std::to_string(s));
    return std::visit(overloaded{
                          [&](const Gamma& g) { return Distribution(Gamma{g.shape, g.rate - s}); },
                          [&](const Exponential& e) { return Distribution(Exponential{e.rate - s}); },
                          [&](const Uniform& u) { return Distribution(TiltedBounded{u, s, uniform_log_mgf(u, s)}); },
                          [&](const Beta& b) { return Distribution(TiltedBounded{b, s, beta_log_mgf(b, s)}); },
                          [&](const Degenerate& p) { return Distribution(p); },
                          [&](const TiltedBounded& t) {
                              const double total = t.s + s;
                              if (total == 0.0) {
                                  return std::visit([](const auto& b) { return Distribution(b); }, t.base);
                              }
                              return Distribution(TiltedBounded{t.base, total, base_log_mgf(t.base, total)});
                          },
                      },
                      d.variant());
}

namespace {

double beta_sample(const Beta& b, RngStream& rng)
{
    const double x = gamma_sample(Gamma{b.alpha, 1.0}, rng);
    const double y = gamma_sample(Gamma{b.beta, 1.0}, rng);
    return x / (x + y);
}

}  // namespace

double sample(const Distribution& d, RngStream& rng)
{
    return std::visit(overloaded{
                          [&](const Gamma& g) { return gamma_sample(g, rng); },
                          [&](const Exponential& e) { return gamma_sample(as_gamma(e), rng); },
                          [&](const Uniform& u) { return u.lo + (u.hi - u.lo) * rng.uniform(); },
                          [&](const Beta& b) { return beta_sample(b, rng); },
                          [&](const Degenerate& p) { return p.at; },
                          [&](const TiltedBounded& t) {
                              // Rejection from the base Beta when it accepts often enough,
                              // inverse CDF (bisection) otherwise.
                              const Beta* b = std::get_if<Beta>(&t.base);
                              const double top = std::max(t.s, 0.0);
                              if (b && t.log_normalizer - top > std::log(0.05)) {
                                  for (;;) {
                                      const double x = beta_sample(*b, rng);
                                      if (std::log(rng.uniform()) < t.s * x - top) return x;
                                  }
                              }
                              return quantile(d, rng.uniform());
                          },
                      },
                      d.variant());
}

double mean(const Distribution& d)
{
    return std::visit(overloaded{
                          [](const Gamma& g) { return g.shape / g.rate; },
                          [](const Exponential& e) { return 1.0 / e.rate; },
                          [](const Uniform& u) { return 0.5 * (u.lo + u.hi); },
                          [](const Beta& b) { return b.alpha / (b.alpha + b.beta); },
                          [](const Degenerate& p) { return p.at; },
                          [](const TiltedBounded& t) {
                              return std::visit(overloaded{[&](const Uniform& u) { return tilted_uniform_mean(u, t.s); },
                                                           [&](const Beta& b) { return tilted_beta_mean(b, t.s); }},
                                                t.base);
                          },
                      },
                      d.variant());
}

double cdf(const Distribution& d, double x)
{
    return std::visit(overloaded{
                          [&](const Gamma& g) { return x <= 0.0 ? 0.0 : boost::math::gamma_p(g.shape, g.rate * x); },
                          [&](const Exponential& e) { return x <= 0.0 ? 0.0 : -std::expm1(-e.rate * x); },
                          [&](const Uniform& u) {
                              if (x <= u.lo) return 0.0;
                              if (x >= u.hi) return 1.0;
                              return (x - u.lo) / (u.hi - u.lo);
                          },
                          [&](const Beta& b) {
                              if (x <= 0.0) return 0.0;
                              if (x >= 1.0) return 1.0;
                              return boost::math::ibeta(b.alpha, b.beta, x);
                          },
                          [&](const Degenerate& p) { return x >= p.at ? 1.0 : 0.0; },
                          [&](const TiltedBounded& t) { return tilted_cdf(t, x); },
                      },
                      d.variant());
}

double log_density(const Distribution& d, double x)
{
    return std::visit(overloaded{
                          [&](const Gamma& g) {
                              if (x <= 0.0) return -kInf;
                              return (g.shape - 1.0) * std::log(x) + g.shape * std::log(g.rate) - g.rate * x -
                                     std::lgamma(g.shape);
                          },
                          [&](const Exponential& e) { return x < 0.0 ? -kInf : std::log(e.rate) - e.rate * x; },
                          [&](const Uniform& u) { return (x < u.lo || x > u.hi) ? -kInf : -std::log(u.hi - u.lo); },
                          [&](const Beta& b) { return beta_log_density(b, x); },
                          [&](const Degenerate&) -> double { fail(ErrorCode::NoDensity, "degenerate law has no density"); },
                          [&](const TiltedBounded& t) {
                              const double base = std::visit([&](const auto& b) { return log_density(Distribution(b), x); },
                                                             t.base);
                              return base + t.s * x - t.log_normalizer;
                          },
                      },
                      d.variant());
}

double quantile(const Distribution& d, double p)
{
    if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::InvalidArgument, "quantile level must lie in [0, 1]");
    return std::visit(overloaded{
                          [&](const Gamma& g) { return boost::math::gamma_p_inv(g.shape, p) / g.rate; },
                          [&](const Exponential& e) { return -std::log1p(-p) / e.rate; },
                          [&](const Uniform& u) { return u.lo + p * (u.hi - u.lo); },
                          [&](const Beta& b) { return boost::math::ibeta_inv(b.alpha, b.beta, p); },
                          [&](const Degenerate& q) { return q.at; },
                          [&](const TiltedBounded& t) {
                              if (const auto* u = std::get_if<Uniform>(&t.base)) return tilted_uniform_quantile(*u, t.s, p);
                              const Support s = base_support(t.base);
                              return invert_cdf([&](double x) { return tilted_cdf(t, x); }, s.lo, s.hi, p, 1e-12);
                          },
                      },
                      d.variant());
}

Support support(const Distribution& d)
{
    return std::visit(overloaded{
                          [](const Gamma&) { return Support{0.0, kInf}; },
                          [](const Exponential&) { return Support{0.0, kInf}; },
                          [](const Uniform& u) { return Support{u.lo, u.hi}; },
                          [](const Beta&) { return Support{0.0, 1.0}; },
                          [](const Degenerate& p) { return Support{p.at, p.at}; },
                          [](const TiltedBounded& t) { return base_support(t.base); },
                      },
                      d.variant());
}

}  // namespace ruinlab
