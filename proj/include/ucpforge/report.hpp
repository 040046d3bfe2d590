/**
 * @file report.hpp
 * @brief Verification report: named metrics, banded verdicts, config echo.
 *        Needs nlohmann/json.
 */
#pragma once

#include <cfloat>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ucpforge.hpp"

namespace ucpforge {

struct VerifyConfig {
    int n_order = 121;
    double rho = 1.0;
    double epsilon = 0.5;
    int resolution = 1024;
    int radial_panels = 256;
    int angular_points = 4096;
    std::vector<int> n_list{121, 144, 169, 196, 225, 256, 400};

    nlohmann::json to_json() const {
        return {{"n_order", n_order},           {"rho", rho},
                {"epsilon", epsilon},           {"resolution", resolution},
                {"radial_panels", radial_panels}, {"angular_points", angular_points},
                {"n_list", n_list}};
    }
};

/// metric must lie in [lo, hi].
struct Verdict {
    std::string metric;
    double lo = -DBL_MAX;
    double hi = DBL_MAX;
    bool pass = false;
};

struct VerificationReport {
    std::map<std::string, double> metrics;
    std::map<std::string, Verdict> verdicts;
    nlohmann::json config;
    std::string tool_version;
    std::string timestamp;

    void set(const std::string& name, double value) { metrics[name] = value; }

    void judge(const std::string& name, const std::string& metric, double lo, double hi) {
        const double v = metrics.at(metric);
        verdicts[name] = {metric, lo, hi, std::isfinite(v) && v >= lo && v <= hi};
    }

    bool all_pass() const {
        for (const auto& [name, v] : verdicts)
            if (!v.pass) return false;
        return true;
    }

    nlohmann::json to_json() const {
        nlohmann::json out;
        out["tool_version"] = tool_version;
        out["timestamp"] = timestamp;
        out["config"] = config;
        out["metrics"] = nlohmann::json::object();
        for (const auto& [name, v] : metrics) out["metrics"][name] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json();
        out["verdicts"] = nlohmann::json::object();
        for (const auto& [name, v] : verdicts)
            out["verdicts"][name] = {{"metric", v.metric}, {"tolerance", {v.lo, v.hi}}, {"pass", v.pass}};
        return out;
    }
};

/// UTC time from SOURCE_DATE_EPOCH (0 when unset), ISO 8601.
inline std::string report_timestamp() {
    std::time_t t = 0;
    if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) t = static_cast<std::time_t>(std::strtoll(env, nullptr, 10));
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Centers of the three-balls probe: the cap, the collar, the layers (twice) and the far tail.
inline std::vector<std::pair<double, double>> three_balls_centers(const Assembly& a) {
    const double rho = a.config.rho;
    const double mid = 0.5 * (a.layers_begin() + a.layers_end());
    return {{0.0, 0.0}, {2.0 * rho, 0.0}, {mid, 0.0}, {0.0, mid}, {rho + 9.0, 0.0}};
}

inline QuadratureSpec carleman_spec(const VerifyConfig& cfg) { return {16 * cfg.radial_panels, 64, 2}; }

struct CarlemanSetup {
    std::vector<TestFunction> bumps = default_bumps();
    std::vector<int> modes{0, 5, 25};
    std::vector<double> taus = geometric_grid(20.0, 160.0, 8);
    double delta = 0.015;
};

inline VerificationReport run_verification(const VerifyConfig& cfg, const std::string& version) {
    VerificationReport rep;
    rep.config = cfg.to_json();
    rep.tool_version = version;
    rep.timestamp = report_timestamp();

    const Assembly a = build_assembly({cfg.n_order, cfg.rho, 10});
    const QuadratureSpec spec{cfg.radial_panels, cfg.angular_points, 2};
    spec.validate();
    const CarlemanWeight w{cfg.epsilon};
    w.validate();

    const ResidualStudy residual = residual_convergence(a, 1000, 1e-2 * a.delta, 1e-4 * a.delta);
    rep.set("residual_order", residual.median_ratio);
    rep.set("potential_agreement", residual.max_potential_error);
    rep.set("seam_max_jump", interface_continuity(a).max_jump);
    rep.set("support_max_absW", support_check(a).max_abs_w);
    const PositivityCheck pos = positivity_check(a);
    rep.set("positivity_min_log", pos.all_finite ? pos.min_normalized : NAN);
    rep.set("tail_slope_error", std::abs(tail_slope(a) + cfg.n_order));

    const SupReport sup = sup_potential(a, cfg.resolution);
    rep.set("supW", sup.plane.value);
    rep.set("supWbar", sup.sphere.value);
    rep.set("supW_layers", sup.layers);

    ScalingOptions opt;
    opt.rho = cfg.rho;
    opt.resolution = cfg.resolution;
    const ScalingTable table = scaling_study(cfg.n_list, opt);
    rep.set("supW_slope", table.sup_w_slope);
    rep.set("supW_layers_slope", table.sup_w_layers_slope);
    rep.set("ucp_constant_C", table.ucp_constant_C);
    rep.set("ucp_variation", table.ucp_variation);
    rep.set("doubling_fit_residual", table.doubling_fit_residual);

    rep.set("pole_order", pole_vanishing_order(a, Pole::north, opt.pole_radii));
    rep.set("pole_order_south", pole_vanishing_order(a, Pole::south, opt.pole_radii));
    rep.set("doubling_max", cap_doubling_max(a, opt.doubling_caps, opt.cap_spec));

    const CarlemanSetup cs;
    const CarlemanSweep sweep = carleman_sweep(cs.bumps, cs.modes, cs.taus, w, cs.delta, carleman_spec(cfg));
    rep.set("carleman_maxratio", sweep.max_ratio);
    double exponent_error = 0.0;
    for (int t = 0; t < 3; ++t) exponent_error = std::max(exponent_error, std::abs(sweep.tau_exponent[t] - (3.0 - t)));
    rep.set("carleman_tau_exponent_error", exponent_error);

    double three_balls = -DBL_MAX;
    for (const auto& [cx, cy] : three_balls_centers(a))
        three_balls = std::max(three_balls, three_balls_check(a, cx, cy, 1.0, w, spec).implied_C);
    rep.set("three_balls_C", three_balls);

    rep.judge("residual_order", "residual_order", 3.5, 4.5);
    rep.judge("potential_agreement", "potential_agreement", 0.0, 1e-4);
    rep.judge("seam_continuity", "seam_max_jump", 0.0, 1e-10);
    rep.judge("harmonic_zones", "support_max_absW", 0.0, 0.0);
    rep.judge("positivity", "positivity_min_log", -DBL_MAX, DBL_MAX);
    return rep;
}

}  // namespace ucpforge
