#pragma once

#include <optional>
#include <vector>

#include "ruinlab/model.hpp"

namespace ruinlab {

/// Solution record of the Lundberg-type equation at one (theta, r).
struct LundbergSolution {
    double theta;
    double r;
    double kappa;
    double kappa_prime;
    std::optional<double> adjustment;
    std::optional<double> r_star;
    bool net_profit_ok;
};

/// kappa_theta(r): the root of M_X(r) * M_W(-kappa - c(theta) r) = 1 on the
/// branch where the tilted interarrival law is a probability law. For
/// K(theta) = Gamma{k, theta} this is theta (M_X(r)^(1/k) - 1) - c(theta) r.
double kappa(const ModelSpec& model, double theta, double r);

/// Same root found by bisection on the log of the equation for an arbitrary
/// interarrival law. Used for non-Gamma interarrivals and as a cross-check
/// of the closed form.
double kappa_by_bisection(const Distribution& claim, const Distribution& interarrival, double premium, double r,
                          double tol = 1e-12);

struct KappaPrimeRoutes {
    double finite_difference;
    /// E_Q[X] / E_Q[W] - c(theta) with the tilted means taken analytically.
    double tilted_moments;
};

KappaPrimeRoutes kappa_prime_routes(const ModelSpec& model, double theta, double r);

/// Returns the tilted-moment value; throws DerivativeMismatch when the two
/// routes disagree by more than 1e-5 relative.
double kappa_prime(const ModelSpec& model, double theta, double r);

/// c(theta) > E[X] / E[W] under P_theta.
bool net_profit(const ModelSpec& model, double theta);

/// Positive root R(theta) of kappa_theta. rel_tol = 0 bisects to machine
/// resolution.
double adjustment_coefficient(const ModelSpec& model, double theta, double rel_tol = 0.0);

/// Evaluation grid over the closure of D. Unbounded D is truncated at the
/// 1 - 1e-6 mixing quantile; closure endpoints where the conditional model
/// is undefined or the net profit condition fails are moved inward by
/// 1e-9 (relative to the grid width).
std::vector<double> theta_grid(const ModelSpec& model, int points = 1024);

struct RStarResult {
    double r_star;
    double argmax_theta;
    std::vector<double> grid;
    std::vector<double> adjustment;
};

RStarResult solve_r_star(const ModelSpec& model);
double r_star(const ModelSpec& model);

LundbergSolution solve_at(const ModelSpec& model, double theta, double r);

}  // namespace ruinlab
