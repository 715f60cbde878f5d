#pragma once
//
// Scenario configuration, explicit time stepping and run verdicts.
//

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <optional>
#include <vector>

#include "json.hpp"
#include "mcflab/errors.hpp"
#include "mcflab/flowsim/common.hpp"
#include "mcflab/flowsim/equivariant.hpp"
#include "mcflab/flowsim/torus.hpp"
#include "mcflab/io.hpp"

namespace mcflab::flowsim {

struct FlowConfig {
    std::string name = "flow";
    std::string backend = "torus";  ///< torus | equivariant
    int resolution = 64;
    int target_dim = 2;             ///< torus only
    std::string initial = "sine";
    double amplitude = 0.5;
    std::vector<double> winding;    ///< torus only, m x 2 row-major
    double cfl = 0.2;
    std::string scheme = "euler";   ///< euler | rk4
    double t_max = 10.0;
    double lambda_stop = 1e-3;
    double monitor_interval = 0.05;
    double monotonicity_c = 10.0;
    double steady_tolerance = -1.0; ///< negative: h^2
    int refine = 0;                 ///< optional second resolution for the refinement comparison
    double refine_factor = 4.0;     ///< allowed refinement gap in units of the coarse tolerance

    static FlowConfig from_kv(const KeyValueConfig& kv)
    {
        FlowConfig c;
        c.name = kv.get("name", c.name);
        c.backend = kv.get("backend");
        c.resolution = int(kv.integer("resolution"));
        c.target_dim = int(kv.integer("target_dim", c.target_dim));
        c.initial = kv.get("initial");
        c.amplitude = kv.real("amplitude", c.amplitude);
        if (kv.has("winding")) {
            std::istringstream in(kv.get("winding"));
            std::string tok;
            while (in >> tok) c.winding.push_back(parse_real(tok, "winding"));
        }
        c.cfl = kv.real("cfl", c.cfl);
        c.scheme = kv.get("scheme", c.scheme);
        c.t_max = kv.real("t_max");
        c.lambda_stop = kv.real("lambda_stop", c.lambda_stop);
        c.monitor_interval = kv.real("monitor_interval", c.monitor_interval);
        c.monotonicity_c = kv.real("monotonicity_c", c.monotonicity_c);
        c.steady_tolerance = kv.real("steady_tolerance", c.steady_tolerance);
        c.refine = int(kv.integer("refine", 0));
        c.refine_factor = kv.real("refine_factor", c.refine_factor);
        const auto extra = kv.unused();
        if (!extra.empty()) throw ConfigError("unknown scenario key '" + extra.front() + "'");
        c.validate();
        return c;
    }

    void validate() const
    {
        if (backend != "torus" && backend != "equivariant") throw ConfigError("backend must be torus or equivariant");
        if (!(cfl > 0.0 && cfl <= 0.25)) throw ConfigError("cfl must be in (0, 0.25]");
        if (scheme != "euler" && scheme != "rk4") throw ConfigError("scheme must be euler or rk4");
        if (!(t_max > 0.0)) throw ConfigError("t_max must be positive");
        if (!(monitor_interval > 0.0)) throw ConfigError("monitor_interval must be positive");
        if (!(lambda_stop > 0.0)) throw ConfigError("lambda_stop must be positive");
        if (!(monotonicity_c >= 0.0)) throw ConfigError("monotonicity_c must be non-negative");
        if (refine != 0 && refine <= resolution) throw ConfigError("refine must exceed resolution");
    }

    nlohmann::json to_json() const
    {
        return {{"name", name},       {"backend", backend},   {"resolution", resolution},
                {"target_dim", target_dim}, {"initial", initial}, {"amplitude", amplitude},
                {"winding", winding}, {"cfl", cfl},           {"scheme", scheme},
                {"t_max", t_max},     {"lambda_stop", lambda_stop}, {"monitor_interval", monitor_interval},
                {"monotonicity_c", monotonicity_c}, {"steady_tolerance", steady_tolerance},
                {"refine", refine},   {"refine_factor", refine_factor}};
    }
};

struct RunResult {
    std::vector<MonitorRecord> records;
    double h = 0.0;
    double dt = 0.0;
    long steps = 0;
    double tolerance = 0.0;  ///< C (h^2 + dt)
    double steady_tolerance = 0.0;
    long monotonicity_violations = 0;
    double worst_monotonicity_drop = 0.0;  ///< largest min-Phi decrease over one step
    std::string outcome;                   ///< converged | steady | t_max | error
    std::string error;
    double tail_rate = kNaN;               ///< fitted decay rate of -min Phi over the tail half
    long flagged_records = 0;
    double initial_max_two_dilation = 0.0;
    double max_mu_ratio = kNaN;

    bool initially_area_decreasing() const { return initial_max_two_dilation < 1.0; }
    /// Vacuous when the initial data is not area-decreasing.
    bool area_decreasing_preserved() const { return !initially_area_decreasing() || flagged_records == 0; }
};

/// Least-squares slope of log(-min Phi) against t over the second half of the records.
inline double fit_tail_rate(const std::vector<MonitorRecord>& recs)
{
    if (recs.size() < 4) return kNaN;
    const double t_half = 0.5 * (recs.front().t + recs.back().t);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    for (const auto& r : recs) {
        if (r.t < t_half || !(r.min_phi < 0.0)) continue;
        const double y = std::log(-r.min_phi);
        sx += r.t;
        sy += y;
        sxx += r.t * r.t;
        sxy += r.t * y;
        ++k;
    }
    if (k < 2) return kNaN;
    const double den = k * sxx - sx * sx;
    if (den == 0.0) return kNaN;
    return -(k * sxy - sx * sy) / den;
}

template <class Backend>
RunResult run_backend(Backend& b, const FlowConfig& cfg)
{
    RunResult res;
    res.h = b.h();
    const double dt_max = b.stable_dt(cfg.cfl);
    const long per_interval = std::max(1L, long(std::ceil(cfg.monitor_interval / dt_max - 1e-9)));
    res.dt = cfg.monitor_interval / per_interval;
    res.tolerance = cfg.monotonicity_c * (res.h * res.h + res.dt);
    res.steady_tolerance = cfg.steady_tolerance >= 0.0 ? cfg.steady_tolerance : res.h * res.h;
    const long intervals = long(std::ceil(cfg.t_max / cfg.monitor_interval - 1e-9));

    std::vector<double>& u = b.values();
    std::vector<double> vel, k1, k2, k3, k4, tmp;
    b.velocity(u, vel);
    MonitorRecord rec = b.monitor(u, vel, 0.0);
    res.records.push_back(rec);
    res.initial_max_two_dilation = rec.max_two_dilation;
    double prev_min_phi = rec.min_phi;
    MonitorRecord last = rec;

    auto finish = [&](const std::string& outcome) {
        res.outcome = outcome;
        for (const auto& r : res.records) {
            if (r.flagged) ++res.flagged_records;
            if (!std::isnan(r.max_mu_ratio)) res.max_mu_ratio = std::isnan(res.max_mu_ratio) ? r.max_mu_ratio : std::max(res.max_mu_ratio, r.max_mu_ratio);
        }
        res.tail_rate = fit_tail_rate(res.records);
        return res;
    };

    auto check_state = [&](const std::vector<double>& v) {
        if (!b.is_graphical(v)) throw FlowError("non-finite values or graphical breakdown", last);
    };

    if (rec.max_lambda < cfg.lambda_stop) return finish("converged");

    try {
        for (long iv = 0; iv < intervals; ++iv) {
            for (long s = 0; s < per_interval; ++s) {
                const double dt = res.dt;
                if (cfg.scheme == "euler") {
                    for (std::size_t i = 0; i < u.size(); ++i) u[i] += dt * vel[i];
                } else {
                    k1 = vel;
                    tmp.resize(u.size());
                    for (std::size_t i = 0; i < u.size(); ++i) tmp[i] = u[i] + 0.5 * dt * k1[i];
                    b.velocity(tmp, k2);
                    for (std::size_t i = 0; i < u.size(); ++i) tmp[i] = u[i] + 0.5 * dt * k2[i];
                    b.velocity(tmp, k3);
                    for (std::size_t i = 0; i < u.size(); ++i) tmp[i] = u[i] + dt * k3[i];
                    b.velocity(tmp, k4);
                    for (std::size_t i = 0; i < u.size(); ++i) u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                }
                ++res.steps;
                check_state(u);
                const double step_phi = b.velocity(u, vel);
                // Per-step monitor of min Phi for the discrete maximum-principle check.
                const bool record_now = s + 1 == per_interval;
                double cur_phi;
                if (record_now) {
                    last = b.monitor(u, vel, (iv + 1) * cfg.monitor_interval);
                    res.records.push_back(last);
                    cur_phi = last.min_phi;
                } else {
                    cur_phi = step_phi;
                }
                if (!std::isnan(prev_min_phi) && !std::isnan(cur_phi)) {
                    const double drop = prev_min_phi - cur_phi;
                    res.worst_monotonicity_drop = std::max(res.worst_monotonicity_drop, drop);
                    if (drop > res.tolerance) ++res.monotonicity_violations;
                }
                prev_min_phi = cur_phi;
            }
            if (res.records.back().max_lambda < cfg.lambda_stop) return finish("converged");
        }
    } catch (const FlowError& e) {
        res.error = e.what();
        return finish("error");
    }
    // Steady: no record ever moved beyond the steady tolerance.
    bool steady = true;
    for (const auto& r : res.records) steady = steady && r.max_velocity <= res.steady_tolerance;
    return finish(steady ? "steady" : "t_max");
}

/// Runs the configured scenario at an explicit resolution.
inline RunResult run_flow(const FlowConfig& cfg, int resolution)
{
    cfg.validate();
    if (cfg.backend == "torus") {
        TorusGrid g = make_torus(resolution, cfg.target_dim, cfg.initial, cfg.amplitude, cfg.winding);
        return run_backend(g, cfg);
    }
    EquivariantProfile p = make_equivariant(resolution, cfg.initial, cfg.amplitude);
    return run_backend(p, cfg);
}

struct RefinementComparison {
    bool performed = false;
    double max_difference = 0.0;   ///< max |min Phi_coarse - min Phi_fine| over common record times
    double allowed = 0.0;          ///< factor x coarse tolerance
    int compared = 0;
    bool ok = true;
};

inline RefinementComparison compare_refinement(const RunResult& coarse, const RunResult& fine, double factor)
{
    RefinementComparison c;
    c.performed = true;
    c.allowed = factor * coarse.tolerance;
    const std::size_t n = std::min(coarse.records.size(), fine.records.size());
    for (std::size_t i = 0; i < n; ++i) {
        const double a = coarse.records[i].min_phi, b = fine.records[i].min_phi;
        if (std::isnan(a) || std::isnan(b)) continue;
        c.max_difference = std::max(c.max_difference, std::abs(a - b));
        ++c.compared;
    }
    c.ok = c.max_difference <= c.allowed;
    return c;
}

struct FlowVerdict {
    RunResult run;
    RefinementComparison refinement;
    std::optional<RunResult> fine;
    bool passed = false;

    nlohmann::json to_json(const FlowConfig& cfg) const;
};

inline FlowVerdict run_scenario(const FlowConfig& cfg)
{
    FlowVerdict v;
    v.run = run_flow(cfg, cfg.resolution);
    if (cfg.refine > 0) {
        v.fine = run_flow(cfg, cfg.refine);
        v.refinement = compare_refinement(v.run, *v.fine, cfg.refine_factor);
    }
    auto run_ok = [&](const RunResult& r) {
        return (r.outcome == "converged" || r.outcome == "steady") && r.monotonicity_violations == 0 && r.area_decreasing_preserved() &&
               (std::isnan(r.max_mu_ratio) || r.max_mu_ratio <= 1.0);
    };
    v.passed = run_ok(v.run) && (!v.fine || run_ok(*v.fine)) && v.refinement.ok;
    return v;
}

inline nlohmann::json run_json(const RunResult& r)
{
    auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
    const MonitorRecord& last = r.records.back();
    nlohmann::json j{{"outcome", r.outcome},
                     {"h", r.h},
                     {"dt", r.dt},
                     {"steps", r.steps},
                     {"t_final", last.t},
                     {"monotonicity_tolerance", r.tolerance},
                     {"monotonicity_violations", r.monotonicity_violations},
                     {"worst_monotonicity_drop", r.worst_monotonicity_drop},
                     {"tail_rate", num(r.tail_rate)},
                     {"initial_max_two_dilation", r.initial_max_two_dilation},
                     {"flagged_records", r.flagged_records},
                     {"initially_area_decreasing", r.initially_area_decreasing()},
                     {"area_decreasing_preserved", r.area_decreasing_preserved()},
                     {"final_max_lambda", last.max_lambda},
                     {"final_min_phi", num(last.min_phi)},
                     {"final_max_velocity", last.max_velocity},
                     {"steady_tolerance", r.steady_tolerance},
                     {"max_mu_ratio", num(r.max_mu_ratio)}};
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

inline nlohmann::json FlowVerdict::to_json(const FlowConfig& cfg) const
{
    nlohmann::json j;
    j["scenario"] = cfg.name;
    j["backend"] = cfg.backend;
    j["resolution"] = cfg.resolution;
    j["scheme"] = cfg.scheme;
    j["run"] = run_json(run);
    if (fine) {
        j["refined_resolution"] = cfg.refine;
        j["refined_run"] = run_json(*fine);
        j["refinement"] = {{"max_difference", refinement.max_difference},
                           {"allowed", refinement.allowed},
                           {"compared_records", refinement.compared},
                           {"ok", refinement.ok}};
    }
    j["passed"] = passed;
    return j;
}

}  // namespace mcflab::flowsim
