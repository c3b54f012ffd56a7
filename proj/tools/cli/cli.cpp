#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ruinlab/error.hpp"
#include "ruinlab/estimators.hpp"
#include "ruinlab/lundberg.hpp"
#include "ruinlab/serialization.hpp"

namespace ruinlab::cli {

namespace {

using nlohmann::json;

std::string num(double v)
{
    if (std::isnan(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json opt_num(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

int exit_code_for(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidConfig:
    case ErrorCode::ThetaOutOfDomain:
    case ErrorCode::NetProfitViolated:
    case ErrorCode::MgfInfiniteAtRStar:
    case ErrorCode::MixingMgfInfinite:
    case ErrorCode::NoDensity: return kValidation;
    case ErrorCode::TruncationExcessive: return kTruncation;
    default: return kSolver;
    }
}

RChoice parse_r_choice(const std::string& s)
{
    if (s == "rstar") return RChoice::r_star();
    if (s == "adjustment") return RChoice::adjustment();
    if (s.rfind("fixed:", 0) == 0) {
        std::size_t pos = 0;
        const std::string v = s.substr(6);
        double r = 0.0;
        try {
            r = std::stod(v, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != v.size()) fail(ErrorCode::InvalidConfig, "bad r-choice value '" + s + "'");
        return RChoice::fixed(r);
    }
    fail(ErrorCode::InvalidConfig, "r-choice must be rstar, adjustment or fixed:VALUE, got '" + s + "'");
}

XiMode parse_xi(const std::string& s)
{
    if (s == "identity") return XiMode::identity;
    if (s == "exp-tilt") return XiMode::exp_tilt;
    fail(ErrorCode::InvalidConfig, "xi must be identity or exp-tilt, got '" + s + "'");
}

DiagnosticKind parse_kind(const std::string& s)
{
    if (s == "martingale") return DiagnosticKind::martingale;
    if (s == "lemma4") return DiagnosticKind::lemma4;
    if (s == "slln") return DiagnosticKind::slln;
    if (s == "ruin_certainty") return DiagnosticKind::ruin_certainty;
    fail(ErrorCode::InvalidConfig, "unknown check kind '" + s + "'");
}

void validate(const RunConfig& c)
{
    static const std::vector<std::string> commands{"solve", "estimate", "check", "reproduce"};
    if (std::find(commands.begin(), commands.end(), c.command) == commands.end())
        fail(ErrorCode::InvalidConfig, "unknown command '" + c.command + "'");
    if (c.format != "json" && c.format != "csv") fail(ErrorCode::InvalidConfig, "format must be json or csv");
    for (double u : c.u)
        if (!(u >= 0.0) || !std::isfinite(u)) fail(ErrorCode::InvalidConfig, "u must be finite and >= 0");
    if (c.n < 100) fail(ErrorCode::InvalidConfig, "n must be at least 100");
    if (c.workers < 1) fail(ErrorCode::InvalidConfig, "workers must be at least 1");
    if (c.preset) {
        const auto& names = preset_names();
        if (std::find(names.begin(), names.end(), *c.preset) == names.end())
            fail(ErrorCode::InvalidConfig, "unknown preset '" + *c.preset + "'");
    }
    parse_r_choice(c.r_choice);
    parse_xi(c.xi);
    for (const auto& k : c.kinds) parse_kind(k);
}

// ---- output ----------------------------------------------------------------

struct Sink {
    std::ostream& out;
    std::unique_ptr<std::ofstream> file;

    static Sink open(const RunConfig& c, std::ostream& fallback)
    {
        if (!c.out) return Sink{fallback, nullptr};
        auto f = std::make_unique<std::ofstream>(*c.out);
        if (!*f) fail(ErrorCode::InvalidConfig, "cannot open output file " + *c.out);
        std::ostream& s = *f;
        return Sink{s, std::move(f)};
    }
};

const char* kEstimateColumns =
    "mode,u,r,theta,value,log_value,std_error,ci95_lo,ci95_hi,n_paths,ruin_count,truncation_fraction,flagged,"
    "max_weight_ratio,seed,runtime_ms";

std::string estimate_row(const Estimate& e)
{
    std::ostringstream s;
    s << to_string(e.mode) << ',' << num(e.u) << ',' << num(e.r) << ',' << (e.theta ? num(*e.theta) : "") << ','
      << num(e.value) << ',' << num(e.log_value) << ',' << num(e.std_error) << ',' << num(e.ci95.first) << ','
      << num(e.ci95.second) << ',' << e.n_paths << ',' << e.summary.ruin_count << ',' << num(e.truncation_fraction)
      << ',' << (e.flagged ? "true" : "false") << ',' << num(e.max_weight_ratio) << ',' << e.seed << ','
      << num(e.runtime_ms);
    return s.str();
}

// ---- commands --------------------------------------------------------------

int cmd_solve(const RunConfig& c, const ModelSpec& model, std::ostream& out)
{
    const RStarResult rs = solve_r_star(model);
    const std::vector<double> thetas = c.theta.empty() ? theta_grid(model, c.theta_points) : c.theta;

    std::vector<double> rs_grid = c.r;
    if (rs_grid.empty()) {
        if (c.r_points < 1) fail(ErrorCode::InvalidConfig, "r-points must be positive");
        const double sup = mgf_domain_sup(model.claim);
        const double r_max = std::isfinite(sup) ? sup : 2.0 * rs.r_star;
        for (int j = 1; j <= c.r_points; ++j) rs_grid.push_back(r_max * j / (c.r_points + 1));
    }

    std::vector<LundbergSolution> rows;
    for (double theta : thetas)
        for (double r : rs_grid) rows.push_back(solve_at(model, theta, r));

    if (c.format == "csv") {
        out << "theta,r,kappa,kappa_prime,adjustment,net_profit_ok,r_star\n";
        for (const auto& s : rows) {
            out << num(s.theta) << ',' << num(s.r) << ',' << num(s.kappa) << ',' << num(s.kappa_prime) << ','
                << (s.adjustment ? num(*s.adjustment) : "") << ',' << (s.net_profit_ok ? "true" : "false") << ',' << num(rs.r_star) << '\n';
        }
        return kOk;
    }
    json j;
    j["command"] = "solve";
    j["model"] = to_json(model);
    j["r_star"] = rs.r_star;
    j["argmax_theta"] = rs.argmax_theta;
    json curve = json::array();
    for (std::size_t i = 0; i < rs.grid.size(); ++i)
        curve.push_back({{"theta", rs.grid[i]}, {"adjustment", rs.adjustment[i]}});
    j["adjustment_curve"] = curve;
    json table = json::array();
    for (const auto& s : rows) table.push_back(to_json(s));
    j["rows"] = table;
    out << j.dump(2) << '\n';
    return kOk;
}

std::vector<DiagnosticReport> diagnostics(const RunConfig& c, const ModelSpec& model, std::optional<double> theta,
                                          std::optional<double> r)
{
    DiagnosticParams p;
    if (theta) {
        p.theta = *theta;
    } else {
        const auto grid = theta_grid(model, 9);
        p.theta = grid[grid.size() / 2];
    }
    p.r = r ? *r : r_star(model);
    if (c.t) p.t = *c.t;
    if (c.check_u) p.u = *c.check_u;
    p.seed = c.seed;
    p.workers = c.workers;
    p.claim_cap = c.claim_cap;
    // Diagnostic sample size defaults to 10^4 independently of the estimator n.
    if (c.command == "check" && c.n != RunConfig{}.n) p.n = c.n;

    std::vector<DiagnosticKind> kinds;
    if (c.kinds.empty()) {
        kinds = {DiagnosticKind::martingale, DiagnosticKind::lemma4, DiagnosticKind::slln,
                 DiagnosticKind::ruin_certainty};
    } else {
        for (const auto& k : c.kinds) kinds.push_back(parse_kind(k));
    }
    std::vector<DiagnosticReport> reports;
    for (auto k : kinds) reports.push_back(run_diagnostic(k, model, p));
    return reports;
}

int cmd_estimate(const RunConfig& c, const ModelSpec& model, std::ostream& out, std::ostream& err)
{
    RunOptions o;
    o.n = c.n;
    o.seed = c.seed;
    o.workers = c.workers;
    o.claim_cap = c.claim_cap;
    const RChoice rc = parse_r_choice(c.r_choice);
    const XiMode xi = parse_xi(c.xi);
    if (c.theta.size() > 1) fail(ErrorCode::InvalidConfig, "estimate takes at most one theta");
    const std::optional<double> theta = c.theta.empty() ? std::nullopt : std::optional(c.theta.front());

    std::vector<Estimate> records;
    std::vector<std::string> notes;
    for (double u : c.u) {
        if (c.bounds) {
            const BoundsResult b = estimate_bounds(model, u, o);
            records.push_back(b.lower);
            records.push_back(b.point);
            if (b.upper) {
                records.push_back(*b.upper);
            } else {
                notes.push_back("u=" + num(u) + ": upper bound unavailable: " + b.upper_unavailable);
            }
        } else if (theta) {
            records.push_back(estimate_ruin_conditional(model, *theta, u, rc, o));
        } else {
            records.push_back(estimate_ruin_is(model, u, rc, xi, o));
        }
        if (c.crude_horizon) records.push_back(crude_monte_carlo(model, u, *c.crude_horizon, o));
    }
    for (const auto& e : records) {
        if (e.flagged) notes.push_back("u=" + num(e.u) + ": truncation fraction " + num(e.truncation_fraction));
    }

    if (c.paths_out) {
        if (c.bounds || theta) fail(ErrorCode::InvalidConfig, "paths-out is only supported for the mixed estimator");
        std::ofstream f(*c.paths_out);
        if (!f) fail(ErrorCode::InvalidConfig, "cannot open " + *c.paths_out);
        BatchOptions bo;
        bo.n = c.n;
        bo.seed = c.seed;
        bo.workers = c.workers;
        bo.keep_paths = true;
        const double r = records.front().r;
        const PathSource source(TiltedModel(model, r, xi));
        const auto batch = simulate_batch(source, c.u.front(), StopRule::ruin_or_claim_cap(c.claim_cap), bo);
        write_paths_csv(f, batch.paths);
    }

    std::vector<DiagnosticReport> checks;
    if (c.with_checks) {
        const double r = records.front().r;
        checks = diagnostics(c, model, theta, std::isnan(r) ? std::nullopt : std::optional(r));
    }

    for (const auto& n : notes) err << "warning: " << n << '\n';
    for (const auto& e : records) {
        if (e.max_weight_ratio > 1e3)
            err << "warning: u=" << num(e.u) << " " << to_string(e.mode) << " max/mean weight " << num(e.max_weight_ratio)
                << '\n';
    }

    if (c.format == "csv") {
        out << kEstimateColumns << '\n';
        for (const auto& e : records) out << estimate_row(e) << '\n';
        for (const auto& d : checks)
            err << "check " << to_string(d.kind) << ": " << (d.pass ? "pass" : "FAIL") << " observed=" << num(d.observed)
                << " expected=" << num(d.expected) << '\n';
        return kOk;
    }
    json j;
    j["command"] = "estimate";
    j["model"] = to_json(model);
    json recs = json::array();
    for (const auto& e : records) recs.push_back(to_json(e));
    j["records"] = recs;
    if (c.with_checks) {
        json d = json::array();
        for (const auto& r : checks) d.push_back(to_json(r));
        j["diagnostics"] = d;
    }
    out << j.dump(2) << '\n';
    return kOk;
}

int cmd_check(const RunConfig& c, const ModelSpec& model, std::ostream& out, std::ostream& err)
{
    if (c.theta.size() > 1 || c.r.size() > 1) fail(ErrorCode::InvalidConfig, "check takes one theta and one r");
    const auto reports = diagnostics(c, model, c.theta.empty() ? std::nullopt : std::optional(c.theta.front()),
                                     c.r.empty() ? std::nullopt : std::optional(c.r.front()));
    bool ok = true;
    for (const auto& r : reports) {
        ok = ok && r.pass;
        if (!r.pass) err << "check " << to_string(r.kind) << " failed\n";
    }
    if (c.format == "csv") {
        out << "kind,observed,expected,tolerance,pass\n";
        for (const auto& r : reports)
            out << to_string(r.kind) << ',' << num(r.observed) << ',' << num(r.expected) << ',' << num(r.tolerance) << ','
                << (r.pass ? "true" : "false") << '\n';
    } else {
        json a = json::array();
        for (const auto& r : reports) a.push_back(to_json(r));
        out << json{{"command", "check"}, {"reports", a}}.dump(2) << '\n';
    }
    return ok ? kOk : kCheckFailed;
}

// ---- reproduce ---------------------------------------------------------------

struct Row {
    std::string quantity;
    double expected;
    double computed;
    double tolerance;
    std::string note;
    bool pass() const { return std::abs(computed - expected) <= tolerance; }
};

/// For inequality rows the comparison is computed <= expected.
struct BoundRow {
    std::string quantity;
    double bound;
    double computed;
    double slack;
    bool pass() const { return computed <= bound + slack; }
};

std::string label(const char* what, double theta)
{
    return std::string(what) + "(theta=" + num(theta) + ")";
}

std::string label(const char* what, double theta, double r)
{
    return std::string(what) + "(theta=" + num(theta) + ",r=" + num(r) + ")";
}

constexpr const char* kMgfNote =
    "claims are Gamma{2,2}, so E[exp(rX)] = (2/(2-r))^2; the single-shape value 2/(2-r) is what a "
    "shape-1 claim would give";

int cmd_reproduce(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    const std::string& ex = c.example;
    std::vector<Row> rows;
    std::vector<BoundRow> bounds;

    if (ex == "bound1") {
        const ModelSpec m = preset_bound1();
        for (double th : {1.2, 1.5, 1.8})
            for (double r : {0.5, 1.0, 1.5, 1.8})
                rows.push_back({label("kappa", th, r), r * (r * th + r - th - 2.0) / (2.0 - r), kappa(m, th, r), 1e-10, ""});
        for (double th : {1.2, 1.5, 1.8})
            rows.push_back({label("R", th), (th + 2.0) / (th + 1.0), adjustment_coefficient(m, th), 1e-9, ""});
        const double rs = r_star(m);
        rows.push_back({"R*", 1.5, rs, 1e-8, "supremum of R over D, attained as theta -> 1"});
        for (double th : {1.2, 1.5, 1.8})
            rows.push_back({label("kappa_at_R*", th), 1.5 * (th - 1.0), kappa(m, th, 1.5), 1e-10, ""});
        rows.push_back({"E[exp(R* X)]", 16.0, mgf(m.claim, 1.5).value, 1e-10, std::string(kMgfNote) + "; printed 4"});
    } else if (ex == "bound2") {
        const PresetParams& pp = c.preset_params;
        const ModelSpec m = preset_bound2(pp.a.value_or(2.0), pp.b.value_or(3.0));
        for (double th : {0.5, 2.0, 5.0})
            for (double r : {0.5, 1.0, 1.5})
                rows.push_back({label("kappa", th, r), r * th * (r - 1.0) / (2.0 - r), kappa(m, th, r), 1e-10, ""});
        for (double th : {0.5, 2.0, 5.0}) rows.push_back({label("R", th), 1.0, adjustment_coefficient(m, th), 1e-9, ""});
        rows.push_back({"R*", 1.0, r_star(m), 1e-8, ""});
        rows.push_back({"E[exp(R* X)]", 4.0, mgf(m.claim, 1.0).value, 1e-10, std::string(kMgfNote) + "; printed 2"});
        RunOptions o;
        o.n = c.n == RunConfig{}.n ? 10'000 : c.n;
        o.seed = c.seed;
        o.workers = c.workers;
        for (double u : {1.0, 2.0, 5.0}) {
            const Estimate e = estimate_ruin_is(m, u, RChoice::r_star(), XiMode::identity, o);
            bounds.push_back({"psi(" + num(u) + ") <= exp(-u)", std::exp(-u), e.value, 3.0 * e.std_error});
        }
    } else if (ex == "cmpp") {
        const PresetParams& pp = c.preset_params;
        const double eta = pp.eta.value_or(2.0);
        const ModelSpec m = preset_cmpp(eta, pp.a.value_or(2.0), pp.b.value_or(2.0));
        for (double th : {0.25, 0.5, 0.75})
            rows.push_back({label("R", th), eta * (1.0 - th) / 2.0, adjustment_coefficient(m, th), 1e-9, ""});
        rows.push_back({"R*", eta / 2.0, r_star(m), 1e-8, "supremum of R over D, attained as theta -> 0"});
        rows.push_back({"E[exp(R* X)]", 2.0, mgf(m.claim, eta / 2.0).value, 1e-10, ""});
    } else {
        fail(ErrorCode::InvalidConfig, "reproduce takes bound1, bound2 or cmpp, got '" + ex + "'");
    }

    bool ok = true;
    for (const auto& r : rows) ok = ok && r.pass();
    for (const auto& b : bounds) ok = ok && b.pass();

    if (c.format == "csv") {
        out << "example,quantity,expected,computed,tolerance,pass\n";
        for (const auto& r : rows)
            out << ex << ',' << r.quantity << ',' << num(r.expected) << ',' << num(r.computed) << ',' << num(r.tolerance)
                << ',' << (r.pass() ? "true" : "false") << '\n';
        for (const auto& b : bounds)
            out << ex << ',' << b.quantity << ',' << num(b.bound) << ',' << num(b.computed) << ',' << num(b.slack) << ','
                << (b.pass() ? "true" : "false") << '\n';
    } else {
        json a = json::array();
        for (const auto& r : rows) {
            json o{{"quantity", r.quantity}, {"expected", r.expected}, {"computed", r.computed},
                   {"tolerance", r.tolerance}, {"pass", r.pass()}};
            if (!r.note.empty()) o["note"] = r.note;
            a.push_back(o);
        }
        for (const auto& b : bounds)
            a.push_back({{"quantity", b.quantity}, {"bound", b.bound}, {"computed", b.computed}, {"slack", b.slack},
                         {"pass", b.pass()}});
        out << json{{"command", "reproduce"}, {"example", ex}, {"rows", a}, {"pass", ok}}.dump(2) << '\n';
    }
    for (const auto& r : rows)
        if (!r.note.empty()) err << "note: " << r.quantity << ": " << r.note << '\n';
    if (!ok) err << "reproduce " << ex << ": mismatch\n";
    return ok ? kOk : kCheckFailed;
}

// ---- config json -------------------------------------------------------------

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where)
{
    if (!j.is_object()) fail(ErrorCode::InvalidConfig, where + " must be an object");
    for (const auto& [k, v] : j.items()) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }) == allowed.end())
            fail(ErrorCode::InvalidConfig, "unknown key '" + k + "' in " + where);
    }
}

template <class T>
void read(const json& j, const char* key, T& dst)
{
    if (!j.contains(key)) return;
    try {
        dst = j.at(key).get<T>();
    } catch (const json::exception& e) {
        fail(ErrorCode::InvalidConfig, std::string("bad value for '") + key + "': " + e.what());
    }
}

template <class T>
void read(const json& j, const char* key, std::optional<T>& dst)
{
    if (!j.contains(key) || j.at(key).is_null()) return;
    T v{};
    read(j, key, v);
    dst = v;
}

}  // namespace

json to_json(const RunConfig& c)
{
    json j;
    j["schema"] = kSchema;
    j["command"] = c.command;
    if (c.model) {
        j["model"] = ruinlab::to_json(*c.model);
    } else if (c.preset) {
        json p{{"name", *c.preset}};
        const auto put = [&](const char* k, const std::optional<double>& v) {
            if (v) p[k] = *v;
        };
        put("lambda", c.preset_params.lambda);
        put("eta", c.preset_params.eta);
        put("c", c.preset_params.c);
        put("a", c.preset_params.a);
        put("b", c.preset_params.b);
        j["preset"] = p;
    }
    j["params"] = {
        {"u", c.u},
        {"n", c.n},
        {"seed", c.seed},
        {"workers", c.workers},
        {"r_choice", c.r_choice},
        {"xi", c.xi},
        {"claim_cap", c.claim_cap},
        {"bounds", c.bounds},
        {"with_checks", c.with_checks},
        {"crude_horizon", opt_num(c.crude_horizon)},
        {"theta", c.theta},
        {"r", c.r},
        {"theta_points", c.theta_points},
        {"r_points", c.r_points},
        {"kinds", c.kinds},
        {"t", opt_num(c.t)},
        {"check_u", opt_num(c.check_u)},
        {"example", c.example},
    };
    j["output"] = {{"format", c.format},
                   {"path", c.out ? json(*c.out) : json(nullptr)},
                   {"paths", c.paths_out ? json(*c.paths_out) : json(nullptr)}};
    return j;
}

RunConfig config_from_json(const json& j)
{
    check_keys(j, {"schema", "command", "model", "preset", "params", "output"}, "config");
    if (!j.contains("schema") || j.at("schema") != kSchema)
        fail(ErrorCode::InvalidConfig, std::string("config schema must be \"") + kSchema + "\"");
    RunConfig c;
    read(j, "command", c.command);
    if (j.contains("model") && j.contains("preset")) fail(ErrorCode::InvalidConfig, "give either model or preset, not both");
    if (j.contains("model")) c.model = model_from_json(j.at("model"));
    if (j.contains("preset")) {
        const json& p = j.at("preset");
        check_keys(p, {"name", "lambda", "eta", "c", "a", "b"}, "preset");
        std::string name;
        read(p, "name", name);
        c.preset = name;
        read(p, "lambda", c.preset_params.lambda);
        read(p, "eta", c.preset_params.eta);
        read(p, "c", c.preset_params.c);
        read(p, "a", c.preset_params.a);
        read(p, "b", c.preset_params.b);
    }
    if (j.contains("params")) {
        const json& p = j.at("params");
        check_keys(p,
                   {"u", "n", "seed", "workers", "r_choice", "xi", "claim_cap", "bounds", "with_checks", "crude_horizon",
                    "theta", "r", "theta_points", "r_points", "kinds", "t", "check_u", "example"},
                   "params");
        read(p, "u", c.u);
        read(p, "n", c.n);
        read(p, "seed", c.seed);
        read(p, "workers", c.workers);
        read(p, "r_choice", c.r_choice);
        read(p, "xi", c.xi);
        read(p, "claim_cap", c.claim_cap);
        read(p, "bounds", c.bounds);
        read(p, "with_checks", c.with_checks);
        read(p, "crude_horizon", c.crude_horizon);
        read(p, "theta", c.theta);
        read(p, "r", c.r);
        read(p, "theta_points", c.theta_points);
        read(p, "r_points", c.r_points);
        read(p, "kinds", c.kinds);
        read(p, "t", c.t);
        read(p, "check_u", c.check_u);
        read(p, "example", c.example);
    }
    if (j.contains("output")) {
        const json& o = j.at("output");
        check_keys(o, {"format", "path", "paths"}, "output");
        read(o, "format", c.format);
        read(o, "path", c.out);
        read(o, "paths", c.paths_out);
    }
    validate(c);
    return c;
}

ModelSpec resolve_model(const RunConfig& c)
{
    if (!c.model && !c.preset) fail(ErrorCode::InvalidConfig, "no model: pass --preset or a config with a model");
    ModelSpec m = c.model ? *c.model : make_preset(*c.preset, c.preset_params);
    m.validate();
    return m;
}

int execute(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    try {
        validate(config);
        Sink sink = Sink::open(config, out);
        if (config.command == "reproduce") return cmd_reproduce(config, sink.out, err);
        const ModelSpec model = resolve_model(config);
        if (config.command == "solve") return cmd_solve(config, model, sink.out);
        if (config.command == "estimate") return cmd_estimate(config, model, sink.out, err);
        return cmd_check(config, model, sink.out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Ruin probabilities for compound mixed renewal risk models"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "ruinlab 0.1.0");

    RunConfig c;
    std::optional<std::string> config_file;
    std::optional<std::string> preset;
    bool dump = false;
    std::optional<double> lambda, eta, cc, a, b;
    std::vector<double> u, theta, r;
    std::optional<std::uint64_t> n, seed, claim_cap;
    std::optional<unsigned> workers;
    std::optional<std::string> r_choice, xi, format, out_file, paths_out;
    std::optional<double> t, crude_horizon, check_u;
    std::vector<std::string> kinds;
    std::optional<int> theta_points, r_points;
    std::string example;

    const auto common = [&](CLI::App* s, bool with_model) {
        s->add_option("--config", config_file, "JSON run config (schema " + std::string(kSchema) + ")");
        if (with_model) s->add_option("--preset", preset, "bound1 | bound2 | cmpp | cl_oracle");
        s->add_option("--lambda", lambda, "preset parameter");
        s->add_option("--eta", eta, "preset parameter");
        s->add_option("--c", cc, "preset parameter");
        s->add_option("--a", a, "preset mixing parameter");
        s->add_option("--b", b, "preset mixing parameter");
        s->add_option("--seed", seed, "base seed")->envname("RUINLAB_SEED");
        s->add_option("--workers", workers, "worker threads");
        s->add_option("--n", n, "paths per estimate");
        s->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
        s->add_option("--out", out_file, "write records to FILE instead of stdout");
        s->add_flag("--dump-config", dump, "print the resolved config and exit");
    };

    CLI::App* solve = app.add_subcommand("solve", "kappa grid, adjustment curve and R*");
    common(solve, true);
    solve->add_option("--theta", theta, "theta values (default: grid over D)");
    solve->add_option("--r", r, "r values (default: grid below the claim MGF boundary)");
    solve->add_option("--theta-points", theta_points);
    solve->add_option("--r-points", r_points);

    CLI::App* estimate = app.add_subcommand("estimate", "importance-sampling ruin probability estimates");
    common(estimate, true);
    estimate->add_option("--u", u, "initial reserve (repeatable)");
    estimate->add_option("--r-choice", r_choice, "rstar | adjustment | fixed:VALUE");
    estimate->add_option("--xi", xi, "identity | exp-tilt");
    estimate->add_option("--theta", theta, "condition on a fixed theta");
    estimate->add_flag("--bounds", c.bounds, "also report lower and upper bounds");
    estimate->add_flag("--with-checks", c.with_checks, "run diagnostics alongside");
    estimate->add_option("--crude-horizon", crude_horizon, "also run crude Monte Carlo up to this time");
    estimate->add_option("--claim-cap", claim_cap);
    estimate->add_option("--paths-out", paths_out, "per-path CSV dump of the mixed estimator (first u)");

    CLI::App* check = app.add_subcommand("check", "martingale, lemma4, slln and ruin-certainty diagnostics");
    common(check, true);
    check->add_option("--theta", theta);
    check->add_option("--r", r);
    check->add_option("--t", t, "martingale time");
    check->add_option("--u", check_u, "reserve for ruin_certainty");
    check->add_option("--kind", kinds, "martingale | lemma4 | slln | ruin_certainty (repeatable)");
    check->add_option("--claim-cap", claim_cap);

    CLI::App* reproduce = app.add_subcommand("reproduce", "worked-example constants against computed values");
    common(reproduce, false);
    reproduce->add_option("example", example, "bound1 | bound2 | cmpp")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kValidation;
    }

    try {
        std::string command;
        for (auto* s : {solve, estimate, check, reproduce})
            if (s->parsed()) command = s->get_name();

        if (config_file) {
            std::ifstream f(*config_file);
            if (!f) fail(ErrorCode::InvalidConfig, "cannot read config " + *config_file);
            json j;
            try {
                j = json::parse(f);
            } catch (const json::exception& e) {
                fail(ErrorCode::InvalidConfig, std::string("config is not valid JSON: ") + e.what());
            }
            const bool bounds = c.bounds, checks = c.with_checks;
            c = config_from_json(j);
            if (c.command != command) fail(ErrorCode::InvalidConfig, "config is for '" + c.command + "', not '" + command + "'");
            c.bounds = c.bounds || bounds;
            c.with_checks = c.with_checks || checks;
        }
        c.command = command;

        // Explicit flags override the config file.
        if (preset) {
            c.preset = preset;
            c.model.reset();
        }
        if (command == "reproduce") {
            c.example = example;
            c.preset.reset();
            c.model.reset();
        }
        const auto set = [](auto& dst, const auto& src) {
            if (src) dst = *src;
        };
        set(c.preset_params.lambda, lambda);
        set(c.preset_params.eta, eta);
        set(c.preset_params.c, cc);
        set(c.preset_params.a, a);
        set(c.preset_params.b, b);
        if (c.model && (lambda || eta || cc || a || b))
            fail(ErrorCode::InvalidConfig, "preset parameters given with an inline model");
        if (!u.empty()) c.u = u;
        if (!theta.empty()) c.theta = theta;
        if (!r.empty()) c.r = r;
        if (!kinds.empty()) c.kinds = kinds;
        set(c.n, n);
        set(c.seed, seed);
        set(c.workers, workers);
        set(c.claim_cap, claim_cap);
        set(c.r_choice, r_choice);
        set(c.xi, xi);
        set(c.format, format);
        set(c.theta_points, theta_points);
        set(c.r_points, r_points);
        if (out_file) c.out = out_file;
        if (paths_out) c.paths_out = paths_out;
        if (t) c.t = t;
        if (check_u) c.check_u = check_u;
        if (crude_horizon) c.crude_horizon = crude_horizon;

        if (dump) {
            validate(c);
            // Inline the model so the dump is self-contained.
            if (command != "reproduce") {
                c.model = resolve_model(c);
                c.preset.reset();
                c.preset_params = {};
            }
            out << to_json(c).dump(2) << '\n';
            return kOk;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    }
    return execute(c, out, err);
}

}  // namespace ruinlab::cli
