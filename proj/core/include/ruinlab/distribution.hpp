#pragma once

#include <limits>
#include <string>
#include <variant>

#include "ruinlab/rng.hpp"

namespace ruinlab {

/// Gamma law with density b^k x^(k-1) e^(-b x) / Gamma(k).
/// Note the ordering: shape first, rate second; Ga(b, a) in rate-first
/// notation is Gamma{a, b} here.
struct Gamma {
    double shape;
    double rate;
    friend bool operator==(const Gamma&, const Gamma&) = default;
};

/// Exponential{b} behaves exactly like Gamma{1, b} under every operation.
struct Exponential {
    double rate;
    friend bool operator==(const Exponential&, const Exponential&) = default;
};

struct Uniform {
    double lo;
    double hi;
    friend bool operator==(const Uniform&, const Uniform&) = default;
};

struct Beta {
    double alpha;
    double beta;
    friend bool operator==(const Beta&, const Beta&) = default;
};

struct Degenerate {
    double at;
    friend bool operator==(const Degenerate&, const Degenerate&) = default;
};

/// Exponential tilt of a bounded law that has no closed tilted family.
/// Density relative to the base is exp(s x - log_normalizer) where
/// log_normalizer = log E[exp(s X)] under the base.
struct TiltedBounded {
    std::variant<Uniform, Beta> base;
    double s;
    double log_normalizer;
    friend bool operator==(const TiltedBounded&, const TiltedBounded&) = default;
};

enum class Family { gamma, exponential, uniform, beta, degenerate, tilted };

/// Parametric distribution value. Parameters are validated on construction
/// and immutable afterwards.
class Distribution {
public:
    using Variant = std::variant<Gamma, Exponential, Uniform, Beta, Degenerate, TiltedBounded>;

    Distribution(Gamma d);
    Distribution(Exponential d);
    Distribution(Uniform d);
    Distribution(Beta d);
    Distribution(Degenerate d);
    Distribution(TiltedBounded d);

    const Variant& variant() const noexcept { return v_; }
    Family family() const noexcept { return static_cast<Family>(v_.index()); }

    template <class T>
    const T* get_if() const noexcept { return std::get_if<T>(&v_); }

    std::string describe() const;

    friend bool operator==(const Distribution&, const Distribution&) = default;

private:
    Variant v_;
};

struct MgfValue {
    /// E[exp(sX)], +inf outside the finite domain.
    double value;
    /// Supremum of the s for which the MGF is finite.
    double finite_domain_sup;

    bool finite() const noexcept { return value < std::numeric_limits<double>::infinity(); }
};

struct Support {
    double lo;
    double hi;
};

MgfValue mgf(const Distribution& d, double s);
/// log E[exp(sX)]; +inf outside the finite domain.
double log_mgf(const Distribution& d, double s);
double mgf_domain_sup(const Distribution& d);

/// Law with density exp(s x) / M(s) relative to d. Gamma and Exponential
/// stay in-family, Degenerate is fixed, Uniform and Beta become
/// TiltedBounded. Throws TiltOutOfDomain when M(s) is infinite.
Distribution tilt(const Distribution& d, double s);

double sample(const Distribution& d, RngStream& stream);

double mean(const Distribution& d);
double cdf(const Distribution& d, double x);
/// Throws NoDensity for Degenerate.
double log_density(const Distribution& d, double x);
double quantile(const Distribution& d, double p);
Support support(const Distribution& d);

}  // namespace ruinlab
