#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ruinlab/model.hpp"

namespace ruinlab {

/// Uniform{1,2} mixing on D = (1,2), K(theta) = Gamma{2, theta},
/// claims Gamma{2,2}, c(theta) = theta + 1. R(theta) = (theta+2)/(theta+1), R* = 3/2.
ModelSpec preset_bound1();

/// Gamma{a, b} mixing on D = (0, inf), K(theta) = Gamma{2, theta},
/// claims Gamma{2,2}, c(theta) = theta. R(theta) = 1 for every theta.
ModelSpec preset_bound2(double mixing_shape = 2.0, double mixing_rate = 3.0);

/// Mixed Poisson: Beta{a, b} mixing on D = (0,1), K(theta) = Exp(theta),
/// claims Exp(eta), c(theta) = 2 theta / (eta (1 + theta)). R* = eta / 2.
ModelSpec preset_cmpp(double eta = 2.0, double mixing_alpha = 2.0, double mixing_beta = 2.0);

/// Classical Cramer-Lundberg model: Poisson(lambda) arrivals, Exp(eta)
/// claims, constant premium c. Theta is the point mass at lambda.
ModelSpec preset_cl_oracle(double lambda = 1.0, double eta = 1.0, double c = 2.0);

struct PresetParams {
    std::optional<double> lambda;
    std::optional<double> eta;
    std::optional<double> c;
    std::optional<double> a;
    std::optional<double> b;
};

/// Throws InvalidConfig for unknown names or parameters the preset does not take.
ModelSpec make_preset(std::string_view name, const PresetParams& params = {});

const std::vector<std::string>& preset_names();

}  // namespace ruinlab
