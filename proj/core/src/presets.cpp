#include "ruinlab/presets.hpp"

#include "ruinlab/error.hpp"

namespace ruinlab {

ModelSpec preset_bound1()
{
    return ModelSpec{Uniform{1.0, 2.0}, Domain{1.0, 2.0}, GammaRateTheta{2.0}, Gamma{2.0, 2.0}, AffinePremium{1.0, 1.0}};
}

ModelSpec preset_bound2(double mixing_shape, double mixing_rate)
{
    return ModelSpec{Gamma{mixing_shape, mixing_rate}, Domain{0.0}, GammaRateTheta{2.0}, Gamma{2.0, 2.0},
                     AffinePremium{1.0, 0.0}};
}

ModelSpec preset_cmpp(double eta, double mixing_alpha, double mixing_beta)
{
    return ModelSpec{Beta{mixing_alpha, mixing_beta}, Domain{0.0, 1.0}, GammaRateTheta{1.0}, Exponential{eta},
                     CmppRatioPremium{eta}};
}

ModelSpec preset_cl_oracle(double lambda, double eta, double c)
{
    return ModelSpec{Degenerate{lambda}, Domain{lambda, lambda}, GammaRateTheta{1.0}, Exponential{eta},
                     AffinePremium{0.0, c}};
}

const std::vector<std::string>& preset_names()
{
    static const std::vector<std::string> names{"bound1", "bound2", "cmpp", "cl_oracle"};
    return names;
}

ModelSpec make_preset(std::string_view name, const PresetParams& p)
{
    const auto reject = [&](bool present, const char* flag) {
        if (present) fail(ErrorCode::InvalidConfig, std::string("preset ") + std::string(name) + " does not take " + flag);
    };
    if (name == "bound1") {
        reject(p.lambda || p.eta || p.c || p.a || p.b, "parameters");
        return preset_bound1();
    }
    if (name == "bound2") {
        reject(p.lambda || p.eta || p.c, "lambda/eta/c");
        return preset_bound2(p.a.value_or(2.0), p.b.value_or(3.0));
    }
    if (name == "cmpp") {
        reject(p.lambda || p.c, "lambda/c");
        return preset_cmpp(p.eta.value_or(2.0), p.a.value_or(2.0), p.b.value_or(2.0));
    }
    if (name == "cl_oracle") {
        reject(p.a || p.b, "a/b");
        return preset_cl_oracle(p.lambda.value_or(1.0), p.eta.value_or(1.0), p.c.value_or(2.0));
    }
    fail(ErrorCode::InvalidConfig, "unknown preset '" + std::string(name) + "'");
}

}  // namespace ruinlab
