#include <catch_amalgamated.hpp>

#include "ruinlab/error.hpp"
#include "ruinlab/presets.hpp"
#include "ruinlab/serialization.hpp"

using namespace ruinlab;
using nlohmann::json;

namespace {

bool invalid_config(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code() == ErrorCode::InvalidConfig;
    }
    return false;
}

}  // namespace

TEST_CASE("distribution json round trip")
{
    for (const Distribution& d : {Distribution(Gamma{2.0, 0.5}), Distribution(Exponential{3.0}), Distribution(Uniform{1.0, 2.0}),
                                  Distribution(Beta{0.5, 4.0}), Distribution(Degenerate{1.25}),
                                  tilt(Distribution(Beta{2.0, 2.0}), 1.5), tilt(Distribution(Uniform{0.0, 1.0}), -2.0)}) {
        CHECK(distribution_from_json(to_json(d)) == d);
    }
    CHECK(to_json(Distribution(Gamma{2.0, 0.5})) == json::parse(R"({"gamma":{"shape":2.0,"rate":0.5}})"));
    CHECK(distribution_from_json(json::parse(R"({"exponential":{"rate":2}})")) == Distribution(Exponential{2.0}));
}

TEST_CASE("distribution json is strict")
{
    CHECK(invalid_config([] { distribution_from_json(json::parse(R"({"gamma":{"shape":2,"rate":1,"loc":0}})")); }));
    CHECK(invalid_config([] { distribution_from_json(json::parse(R"({"pareto":{"alpha":2}})")); }));
    CHECK(invalid_config([] { distribution_from_json(json::parse(R"({"gamma":{"shape":2}})")); }));
    CHECK(invalid_config([] { distribution_from_json(json::parse(R"({"gamma":{"shape":"2","rate":1}})")); }));
    CHECK(invalid_config([] { distribution_from_json(json::parse(R"({"gamma":{},"beta":{}})")); }));
    CHECK_THROWS_AS(distribution_from_json(json::parse(R"({"gamma":{"shape":-2,"rate":1}})")), Error);
}

TEST_CASE("model json round trip")
{
    for (const std::string& name : preset_names()) {
        const ModelSpec m = make_preset(name);
        const json j = to_json(m);
        const ModelSpec back = model_from_json(j);
        CHECK(to_json(back) == j);
    }
    // unbounded domain serializes its upper end as null
    CHECK(to_json(preset_bound2())["domain"]["hi"].is_null());
}

TEST_CASE("model json is strict")
{
    json j = to_json(preset_bound1());
    j["extra"] = 1;
    CHECK(invalid_config([&] { model_from_json(j); }));

    json k = to_json(preset_bound1());
    k["premium"] = json::parse(R"({"quadratic":{"a":1}})");
    CHECK(invalid_config([&] { model_from_json(k); }));

    json d = to_json(preset_bound1());
    d["domain"]["lo"] = 3.0;
    CHECK_THROWS_AS(model_from_json(d), Error);
}

TEST_CASE("records serialize non-finite numbers as null")
{
    Estimate e;
    e.mode = EstimateMode::crude;
    e.value = 0.0;
    e.n_paths = 100;
    const json j = to_json(e);
    CHECK(j["mode"] == "crude");
    CHECK(j["r"].is_null());
    CHECK(j["log_value"].is_null());
    CHECK_FALSE(j.contains("theta"));

    const json r = to_json(DiagnosticReport{DiagnosticKind::lemma4, 1.0, 1.0, 1e-5, true});
    CHECK(r["kind"] == "lemma4");
    CHECK(r["pass"] == true);
}
