#include "ruinlab/serialization.hpp"

#include <cmath>
#include <initializer_list>
#include <string>

#include "ruinlab/error.hpp"

namespace ruinlab {

using nlohmann::json;

namespace {

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void expect_keys(const json& j, std::initializer_list<const char*> allowed, const char* what)
{
    if (!j.is_object()) fail(ErrorCode::InvalidConfig, std::string(what) + " must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) fail(ErrorCode::InvalidConfig, "unknown key '" + key + "' in " + what);
    }
}

double get_number(const json& j, const char* key, const char* what)
{
    if (!j.contains(key) || !j.at(key).is_number())
        fail(ErrorCode::InvalidConfig, std::string(what) + " requires numeric '" + key + "'");
    return j.at(key).get<double>();
}

/// Single-key tagged object {"tag": {...}}.
std::pair<std::string, const json*> tagged(const json& j, const char* what)
{
    if (!j.is_object() || j.size() != 1)
        fail(ErrorCode::InvalidConfig, std::string(what) + " must be an object with exactly one family key");
    const auto it = j.begin();
    return {it.key(), &it.value()};
}

}  // namespace

json to_json(const Distribution& d)
{
    if (const auto* g = d.get_if<Gamma>()) return {{"gamma", {{"shape", g->shape}, {"rate", g->rate}}}};
    if (const auto* e = d.get_if<Exponential>()) return {{"exponential", {{"rate", e->rate}}}};
    if (const auto* u = d.get_if<Uniform>()) return {{"uniform", {{"lo", u->lo}, {"hi", u->hi}}}};
    if (const auto* b = d.get_if<Beta>()) return {{"beta", {{"alpha", b->alpha}, {"beta", b->beta}}}};
    if (const auto* p = d.get_if<Degenerate>()) return {{"degenerate", {{"at", p->at}}}};
    const auto& t = *d.get_if<TiltedBounded>();
    const json base = std::visit([](const auto& b) { return to_json(Distribution(b)); }, t.base);
    return {{"tilted", {{"base", base}, {"s", t.s}}}};
}

Distribution distribution_from_json(const json& j)
{
    const auto [tag, body] = tagged(j, "distribution");
    const json& b = *body;
    if (tag == "gamma") {
        expect_keys(b, {"shape", "rate"}, "gamma");
        return Gamma{get_number(b, "shape", "gamma"), get_number(b, "rate", "gamma")};
    }
    if (tag == "exponential") {
        expect_keys(b, {"rate"}, "exponential");
        return Exponential{get_number(b, "rate", "exponential")};
    }
    if (tag == "uniform") {
        expect_keys(b, {"lo", "hi"}, "uniform");
        return Uniform{get_number(b, "lo", "uniform"), get_number(b, "hi", "uniform")};
    }
    if (tag == "beta") {
        expect_keys(b, {"alpha", "beta"}, "beta");
        return Beta{get_number(b, "alpha", "beta"), get_number(b, "beta", "beta")};
    }
    if (tag == "degenerate") {
        expect_keys(b, {"at"}, "degenerate");
        return Degenerate{get_number(b, "at", "degenerate")};
    }
    if (tag == "tilted") {
        expect_keys(b, {"base", "s"}, "tilted");
        if (!b.contains("base")) fail(ErrorCode::InvalidConfig, "tilted requires 'base'");
        return tilt(distribution_from_json(b.at("base")), get_number(b, "s", "tilted"));
    }
    fail(ErrorCode::InvalidConfig, "unknown distribution family '" + tag + "'");
}

json to_json(const ModelSpec& m)
{
    json premium;
    if (const auto* a = std::get_if<AffinePremium>(&m.premium.variant())) {
        premium = {{"affine", {{"slope", a->slope}, {"intercept", a->intercept}}}};
    } else {
        premium = {{"cmpp_ratio", {{"eta", std::get<CmppRatioPremium>(m.premium.variant()).eta}}}};
    }
    return {
        {"mixing", to_json(m.mixing)},
        {"domain", {{"lo", m.domain.lo}, {"hi", number(m.domain.hi)}}},
        {"interarrival", {{"gamma_rate_theta", {{"shape", m.interarrival.shape}}}}},
        {"claim", to_json(m.claim)},
        {"premium", premium},
    };
}

ModelSpec model_from_json(const json& j)
{
    expect_keys(j, {"mixing", "domain", "interarrival", "claim", "premium"}, "model");
    for (const char* key : {"mixing", "domain", "interarrival", "claim", "premium"}) {
        if (!j.contains(key)) fail(ErrorCode::InvalidConfig, std::string("model requires '") + key + "'");
    }

    const json& dj = j.at("domain");
    expect_keys(dj, {"lo", "hi"}, "domain");
    Domain domain{get_number(dj, "lo", "domain")};
    if (dj.contains("hi") && !dj.at("hi").is_null()) domain.hi = get_number(dj, "hi", "domain");

    const auto [itag, ibody] = tagged(j.at("interarrival"), "interarrival");
    if (itag != "gamma_rate_theta") fail(ErrorCode::InvalidConfig, "unsupported interarrival rule '" + itag + "'");
    expect_keys(*ibody, {"shape"}, "gamma_rate_theta");
    const GammaRateTheta interarrival{get_number(*ibody, "shape", "gamma_rate_theta")};

    const auto [ptag, pbody] = tagged(j.at("premium"), "premium");
    std::optional<PremiumSpec> premium;
    if (ptag == "affine") {
        expect_keys(*pbody, {"slope", "intercept"}, "affine");
        premium.emplace(AffinePremium{get_number(*pbody, "slope", "affine"), get_number(*pbody, "intercept", "affine")});
    } else if (ptag == "cmpp_ratio") {
        expect_keys(*pbody, {"eta"}, "cmpp_ratio");
        premium.emplace(CmppRatioPremium{get_number(*pbody, "eta", "cmpp_ratio")});
    } else {
        fail(ErrorCode::InvalidConfig, "unknown premium rule '" + ptag + "'");
    }

    ModelSpec m{distribution_from_json(j.at("mixing")), domain, interarrival, distribution_from_json(j.at("claim")),
                *premium};
    m.validate();
    return m;
}

json to_json(const LundbergSolution& s)
{
    json j{{"theta", s.theta},
           {"r", s.r},
           {"kappa", number(s.kappa)},
           {"kappa_prime", number(s.kappa_prime)},
           {"adjustment", s.adjustment ? json(*s.adjustment) : json(nullptr)},
           {"net_profit_ok", s.net_profit_ok}};
    if (s.r_star) j["r_star"] = *s.r_star;
    return j;
}

json to_json(const Estimate& e)
{
    json j{{"mode", std::string(to_string(e.mode))},
           {"u", e.u},
           {"r", number(e.r)},
           {"value", e.value},
           {"log_value", number(e.log_value)},
           {"std_error", e.std_error},
           {"ci95", {e.ci95.first, e.ci95.second}},
           {"n_paths", e.n_paths},
           {"ruin_count", e.summary.ruin_count},
           {"truncation_fraction", e.truncation_fraction},
           {"flagged", e.flagged},
           {"max_weight_ratio", e.max_weight_ratio},
           {"seed", e.seed},
           {"runtime_ms", e.runtime_ms}};
    if (e.theta) j["theta"] = *e.theta;
    return j;
}

json to_json(const DiagnosticReport& r)
{
    return {{"kind", std::string(to_string(r.kind))},
            {"observed", number(r.observed)},
            {"expected", number(r.expected)},
            {"tolerance", number(r.tolerance)},
            {"pass", r.pass}};
}

}  // namespace ruinlab
