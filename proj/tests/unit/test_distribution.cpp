#include <catch_amalgamated.hpp>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "ruinlab/distribution.hpp"
#include "ruinlab/error.hpp"
#include "stats.hpp"

using namespace ruinlab;
using Catch::Matchers::WithinRel;
using Catch::Matchers::WithinAbs;

namespace {

double integrate(const std::function<double(double)>& f, double a, double b)
{
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

// Endpoint singularities (beta shape < 1).
double integrate_singular(const std::function<double(double)>& f, double a, double b)
{
    static boost::math::quadrature::tanh_sinh<double> ts;
    const auto g = [&f](double x) { return f(x); };
    return ts.integrate(g, a, b, 1e-14);
}

double beta_pdf(double a, double b, double x)
{
    return std::pow(x, a - 1.0) * std::pow(1.0 - x, b - 1.0) / boost::math::beta(a, b);
}

std::vector<double> draw(const Distribution& d, std::size_t n, std::uint64_t seed)
{
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) {
        RngStream s(seed, i);
        xs[i] = sample(d, s);
    }
    return xs;
}

}  // namespace

TEST_CASE("gamma MGF matches the closed form and diverges at the rate")
{
    const Distribution g = Gamma{2.0, 2.0};
    CHECK_THAT(mgf(g, 1.5).value, WithinRel(16.0, 1e-14));
    CHECK_THAT(mgf(g, 1.0).value, WithinRel(4.0, 1e-14));
    CHECK_THAT(mgf(g, -1.0).value, WithinRel(4.0 / 9.0, 1e-14));
    CHECK(mgf(g, 0.0).value == 1.0);
    CHECK(!mgf(g, 2.0).finite());
    CHECK(mgf(g, 2.0).finite_domain_sup == 2.0);
    CHECK(std::isinf(log_mgf(g, 3.0)));
}

TEST_CASE("exponential equals gamma with shape one")
{
    const Distribution e = Exponential{3.0};
    const Distribution g = Gamma{1.0, 3.0};
    for (double s : {-2.0, 0.5, 2.9}) CHECK(mgf(e, s).value == mgf(g, s).value);
    CHECK(mgf_domain_sup(e) == 3.0);
    CHECK(draw(e, 64, 5) == draw(g, 64, 5));
}

TEST_CASE("bounded MGFs agree with quadrature")
{
    for (double s : {-7.0, -1.0, 0.3, 2.0, 12.0}) {
        const double uni = integrate([s](double x) { return std::exp(s * x); }, 1.0, 2.0);
        CHECK_THAT(mgf(Distribution(Uniform{1.0, 2.0}), s).value, WithinRel(uni, 1e-12));
        for (auto [a, b] : {std::pair{2.0, 2.0}, {0.7, 3.0}, {5.0, 1.5}}) {
            const double q =
                integrate_singular([=](double x) { return std::exp(s * x) * beta_pdf(a, b, x); }, 0.0, 1.0);
            CHECK_THAT(mgf(Distribution(Beta{a, b}), s).value, WithinRel(q, 1e-10));
        }
    }
    CHECK(std::isinf(mgf_domain_sup(Distribution(Beta{2, 2}))));
}

TEST_CASE("degenerate law")
{
    const Distribution d = Degenerate{1.5};
    CHECK_THAT(mgf(d, 2.0).value, WithinRel(std::exp(3.0), 1e-15));
    CHECK(mean(d) == 1.5);
    CHECK(cdf(d, 1.4) == 0.0);
    CHECK(cdf(d, 1.5) == 1.0);
    RngStream s(1, 0);
    CHECK(sample(d, s) == 1.5);
    CHECK_THROWS_MATCHES(log_density(d, 1.5), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == ErrorCode::NoDensity; }));
    CHECK(tilt(d, 3.0) == d);
}

TEST_CASE("invalid parameters are rejected")
{
    CHECK_THROWS_AS(Distribution(Gamma{0.0, 1.0}), Error);
    CHECK_THROWS_AS(Distribution(Gamma{1.0, -1.0}), Error);
    CHECK_THROWS_AS(Distribution(Uniform{2.0, 1.0}), Error);
    CHECK_THROWS_AS(Distribution(Beta{1.0, 0.0}), Error);
    CHECK_THROWS_AS(Distribution(Exponential{std::nan("")}), Error);
}

TEST_CASE("tilting")
{
    SECTION("zero tilt is the identity")
    {
        for (const Distribution& d : {Distribution(Gamma{2, 3}), Distribution(Uniform{0, 1}), Distribution(Beta{2, 5})})
            CHECK(tilt(d, 0.0) == d);
    }
    SECTION("gamma stays in family with shifted rate")
    {
        const auto t = tilt(Distribution(Gamma{2.0, 2.0}), 1.5);
        REQUIRE(t.get_if<Gamma>() != nullptr);
        CHECK_THAT(t.get_if<Gamma>()->rate, WithinAbs(0.5, 1e-15));
        CHECK_THROWS_AS(tilt(Distribution(Gamma{2.0, 2.0}), 2.0), Error);
    }
    SECTION("tilted bounded laws compose and renormalize")
    {
        const Distribution b = Beta{2.0, 3.0};
        const auto once = tilt(tilt(b, 1.7), -0.4);
        const auto direct = tilt(b, 1.3);
        CHECK_THAT(mean(once), WithinRel(mean(direct), 1e-12));
        // M_{tilt(d,s)}(v) = M_d(s+v) / M_d(s)
        CHECK_THAT(mgf(tilt(b, 1.7), 0.8).value, WithinRel(mgf(b, 2.5).value / mgf(b, 1.7).value, 1e-11));
    }
    SECTION("tilted means agree with quadrature")
    {
        for (double s : {-4.0, 0.5, 6.0}) {
            const double m_u = integrate([s](double x) { return x * std::exp(s * x); }, 1.0, 2.0) /
                               integrate([s](double x) { return std::exp(s * x); }, 1.0, 2.0);
            CHECK_THAT(mean(tilt(Distribution(Uniform{1.0, 2.0}), s)), WithinRel(m_u, 1e-11));
            const double m_b = integrate([s](double x) { return x * std::exp(s * x) * beta_pdf(2, 2, x); }, 0, 1) /
                               integrate([s](double x) { return std::exp(s * x) * beta_pdf(2, 2, x); }, 0, 1);
            CHECK_THAT(mean(tilt(Distribution(Beta{2.0, 2.0}), s)), WithinRel(m_b, 1e-10));
        }
    }
    SECTION("tilted CDF agrees with quadrature")
    {
        const auto t = tilt(Distribution(Beta{2.0, 2.0}), 3.0);
        const double z = integrate([](double x) { return std::exp(3.0 * x) * beta_pdf(2, 2, x); }, 0, 1);
        for (double x : {0.1, 0.4, 0.8}) {
            const double f = integrate([](double y) { return std::exp(3.0 * y) * beta_pdf(2, 2, y); }, 0, x) / z;
            CHECK_THAT(cdf(t, x), WithinRel(f, 1e-9));
        }
    }
}

TEST_CASE("log density integrates to one")
{
    for (const Distribution& d : {Distribution(Gamma{2.5, 1.5}), Distribution(Beta{2.0, 3.0}),
                                  Distribution(Uniform{1.0, 2.0}), tilt(Distribution(Beta{2.0, 2.0}), -2.0),
                                  tilt(Distribution(Uniform{1.0, 2.0}), 4.0)}) {
        const auto sp = support(d);
        const double hi = std::isfinite(sp.hi) ? sp.hi : 60.0;
        CHECK_THAT(integrate([&](double x) { return std::exp(log_density(d, x)); }, sp.lo, hi), WithinAbs(1.0, 1e-9));
    }
}

TEST_CASE("quantile inverts cdf")
{
    for (const Distribution& d : {Distribution(Gamma{0.5, 2.0}), Distribution(Beta{2.0, 5.0}),
                                  tilt(Distribution(Uniform{1.0, 2.0}), -3.0), tilt(Distribution(Beta{3.0, 2.0}), 5.0)}) {
        for (double p : {0.001, 0.3, 0.5, 0.97}) CHECK_THAT(cdf(d, quantile(d, p)), WithinAbs(p, 1e-9));
    }
}

TEST_CASE("samplers pass a KS test against the CDF")
{
    const std::size_t n = 20000;
    SECTION("gamma against boost")
    {
        for (auto [k, b] : {std::pair{0.4, 1.0}, {1.0, 2.0}, {2.0, 2.0}, {7.5, 0.3}}) {
            const boost::math::gamma_distribution<> ref(k, 1.0 / b);
            const auto xs = draw(Gamma{k, b}, n, 17);
            CHECK(testing::ks_statistic(xs, [&](double x) { return boost::math::cdf(ref, x); }) <
                  testing::ks_critical(n));
        }
    }
    SECTION("beta against boost")
    {
        for (auto [a, b] : {std::pair{2.0, 2.0}, {0.5, 0.5}, {4.0, 1.2}}) {
            const boost::math::beta_distribution<> ref(a, b);
            const auto xs = draw(Beta{a, b}, n, 18);
            CHECK(testing::ks_statistic(xs, [&](double x) { return boost::math::cdf(ref, x); }) <
                  testing::ks_critical(n));
        }
    }
    SECTION("tilted bounded laws")
    {
        for (const Distribution& d : {tilt(Distribution(Uniform{1.0, 2.0}), 1.5), tilt(Distribution(Uniform{0.0, 3.0}), -2.0),
                                      tilt(Distribution(Beta{2.0, 2.0}), 1.0), tilt(Distribution(Beta{2.0, 3.0}), -5.0)}) {
            const auto xs = draw(d, n, 19);
            CHECK(testing::ks_statistic(xs, [&](double x) { return cdf(d, x); }) < testing::ks_critical(n));
        }
    }
    SECTION("strongly tilted beta goes through the inverse CDF")
    {
        const Distribution d = tilt(Distribution(Beta{2.0, 2.0}), 30.0);
        const std::size_t m = 2000;
        const auto xs = draw(d, m, 21);
        CHECK(testing::ks_statistic(xs, [&](double x) { return cdf(d, x); }) < testing::ks_critical(m));
    }
    SECTION("uniform")
    {
        const Distribution u = Uniform{1.0, 2.0};
        const auto xs = draw(u, n, 20);
        CHECK(testing::ks_statistic(xs, [](double x) { return x - 1.0; }) < testing::ks_critical(n));
    }
}

TEST_CASE("sample mean matches mean for every family")
{
    for (const Distribution& d : {Distribution(Gamma{2.0, 0.5}), Distribution(Exponential{2.0}), Distribution(Uniform{1.0, 2.0}),
                                  Distribution(Beta{2.0, 2.0}), tilt(Distribution(Beta{2.0, 2.0}), 2.0)}) {
        const auto m = testing::moments(draw(d, 40000, 23));
        CHECK(std::abs(m.mean - mean(d)) < 4.0 * m.se);
    }
}
