#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ruinlab/model.hpp"
#include "ruinlab/presets.hpp"

namespace ruinlab::cli {

/// Stable process exit codes.
enum ExitCode : int {
    kOk = 0,
    kValidation = 2,
    kSolver = 3,
    kTruncation = 4,
    kCheckFailed = 5,
};

inline constexpr const char* kSchema = "ruinlab.run/1";

/// Everything a subcommand needs. Serializes to the versioned JSON config
/// accepted by --config and produced by --dump-config.
struct RunConfig {
    std::string command;
    std::optional<std::string> preset;
    PresetParams preset_params;
    std::optional<ModelSpec> model;

    std::vector<double> u{1.0};
    std::uint64_t n = 100'000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::string r_choice = "rstar";
    std::string xi = "identity";
    std::uint64_t claim_cap = 10'000'000;
    bool bounds = false;
    bool with_checks = false;
    std::optional<double> crude_horizon;

    std::vector<double> theta;
    std::vector<double> r;
    int theta_points = 9;
    int r_points = 19;

    std::vector<std::string> kinds;
    std::optional<double> t;
    std::optional<double> check_u;

    std::string example;

    std::string format = "json";
    std::optional<std::string> out;
    std::optional<std::string> paths_out;
};

nlohmann::json to_json(const RunConfig& c);
/// Strict: unknown keys and a missing or wrong schema tag are errors.
RunConfig config_from_json(const nlohmann::json& j);

/// Inline model if present, else the named preset. Validates the result.
ModelSpec resolve_model(const RunConfig& c);

/// Entry point shared by the executable and the tests. Machine records go
/// to `out`, human-readable messages to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Dispatches an already-assembled config.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace ruinlab::cli
