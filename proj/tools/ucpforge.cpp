// ucpforge command line: build, verify, carleman, scaling, sphere.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "ucpforge/report.hpp"
#include "ucpforge/ucpforge.hpp"

#ifndef UCPFORGE_VERSION
#define UCPFORGE_VERSION "0.0.0"
#endif

namespace {

using namespace ucpforge;
using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct CliConfig {
    std::string subcommand;
    VerifyConfig verify;
    std::string output = "-";
    std::string format = "csv";
    bool strict = true;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename... Ts>
std::string csv_row(const Ts&... values) {
    std::string line;
    auto put = [&](const auto& v) {
        if (!line.empty()) line += ',';
        if constexpr (std::is_arithmetic_v<std::decay_t<decltype(v)>>)
            line += fmt(static_cast<double>(v));
        else
            line += v;
    };
    (put(values), ...);
    return line + '\n';
}

class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path == "-") return;
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*file_) throw UsageError("cannot open output file: " + path);
    }
    std::ostream& out() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

void apply_json_config(const std::string& path, CliConfig& cfg, const CLI::App& app) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError(std::string("bad config file: ") + e.what());
    }
    auto take = [&](const char* key, const char* flag, auto& target) {
        if (!j.contains(key) || app.count(flag) > 0) return;
        try {
            j.at(key).get_to(target);
        } catch (const json::exception&) {
            throw UsageError(std::string("bad type for config key: ") + key);
        }
    };
    VerifyConfig& v = cfg.verify;
    take("n_order", "--n-order", v.n_order);
    take("rho", "--rho", v.rho);
    take("epsilon", "--epsilon", v.epsilon);
    take("resolution", "--resolution", v.resolution);
    take("radial_panels", "--radial-panels", v.radial_panels);
    take("angular_points", "--angular-points", v.angular_points);
    take("n_list", "--n-list", v.n_list);
    take("output", "--output", cfg.output);
    take("format", "--format", cfg.format);
    take("strict", "--strict", cfg.strict);
}

void validate(const CliConfig& cfg) {
    const VerifyConfig& v = cfg.verify;
    if (cfg.format != "csv" && cfg.format != "json") throw UsageError("--format must be csv or json");
    if (v.resolution < 64) throw UsageError("--resolution must be >= 64");
    if (!(v.epsilon > 0.0 && v.epsilon < 1.0)) throw UsageError("--epsilon must lie in (0, 1)");
    QuadratureSpec{v.radial_panels, v.angular_points, 2}.validate();
}

int cmd_build(const CliConfig& cfg) {
    const Assembly a = build_assembly({cfg.verify.n_order, cfg.verify.rho, 10});
    const int angular = 32;
    std::vector<double> radii{0.0};
    for (double r : aligned_grid(0.0, a.layers_end() + 2.0, a.seams(), cfg.verify.resolution))
        if (r > 0.0) radii.push_back(r);

    Sink sink(cfg.output);
    std::ostream& os = sink.out();
    json rows = json::array();
    if (cfg.format == "csv") os << "r,phi,log_abs_u,phase_u,re_W,im_W,region\n";
    for (double r : radii) {
        for (int k = 0; k < angular; ++k) {
            const double phi = 2.0 * std::numbers::pi * k / angular;
            const FieldJet f = eval_plane(a, r, phi);
            const complex w = f.potential();
            const std::string tag(region_tag(locate(a, r)));
            if (cfg.format == "csv")
                os << csv_row(r, phi, f.u.log_abs, f.u.phase, w.real(), w.imag(), tag);
            else
                rows.push_back({{"r", r}, {"phi", phi}, {"log_abs_u", f.u.log_abs}, {"phase_u", f.u.phase},
                                {"re_W", w.real()}, {"im_W", w.imag()}, {"region", tag}});
        }
    }
    if (cfg.format == "json") os << json{{"n_order", a.config.n_order}, {"rows", rows}}.dump(1) << '\n';
    return kExitPass;
}

int cmd_verify(const CliConfig& cfg) {
    const VerificationReport rep = run_verification(cfg.verify, UCPFORGE_VERSION);
    Sink sink(cfg.output);
    std::ostream& os = sink.out();
    if (cfg.format == "json") {
        os << rep.to_json().dump(2) << '\n';
    } else {
        os << "metric,value\n";
        for (const auto& [name, v] : rep.metrics) os << csv_row(name, v);
    }
    for (const auto& [name, v] : rep.verdicts)
        std::cerr << (v.pass ? "PASS " : "FAIL ") << name << " (" << v.metric << " = " << fmt(rep.metrics.at(v.metric))
                  << ")\n";
    return rep.all_pass() || !cfg.strict ? kExitPass : kExitFail;
}

int cmd_carleman(const CliConfig& cfg) {
    const CarlemanSetup cs;
    const CarlemanSweep sweep = carleman_sweep(cs.bumps, cs.modes, cs.taus, CarlemanWeight{cfg.verify.epsilon},
                                               cs.delta, carleman_spec(cfg.verify));
    Sink sink(cfg.output);
    std::ostream& os = sink.out();
    bool finite = true;
    json rows = json::array();
    if (cfg.format == "csv") os << "tau,log_lhs,log_rhs_tau3,log_rhs_tau2delta,log_rhs_tau1,ratio\n";
    for (const auto& row : sweep.rows) {
        const CarlemanSides& s = row.sides;
        const double ratio = std::exp(s.log_ratio());
        finite = finite && std::isfinite(ratio);
        if (cfg.format == "csv")
            os << csv_row(s.tau, s.log_lhs, s.log_rhs_tau3, s.log_rhs_tau2delta, s.log_rhs_tau1, ratio);
        else
            rows.push_back({{"bump", row.bump}, {"mode", row.mode}, {"tau", s.tau}, {"log_lhs", s.log_lhs},
                            {"log_rhs_tau3", s.log_rhs_tau3}, {"log_rhs_tau2delta", s.log_rhs_tau2delta},
                            {"log_rhs_tau1", s.log_rhs_tau1}, {"ratio", ratio}});
    }
    if (cfg.format == "json")
        os << json{{"epsilon", cfg.verify.epsilon},
                   {"tau_exponent", sweep.tau_exponent},
                   {"max_ratio", sweep.max_ratio},
                   {"rows", rows}}
                  .dump(1)
           << '\n';
    bool exponents_ok = true;
    for (int t = 0; t < 3; ++t) exponents_ok = exponents_ok && std::abs(sweep.tau_exponent[t] - (3.0 - t)) <= 1e-9;
    std::cerr << "max_ratio " << fmt(sweep.max_ratio) << " tau_exponents " << fmt(sweep.tau_exponent[0]) << ' '
              << fmt(sweep.tau_exponent[1]) << ' ' << fmt(sweep.tau_exponent[2]) << '\n';
    return (finite && exponents_ok) || !cfg.strict ? kExitPass : kExitFail;
}

int cmd_scaling(const CliConfig& cfg) {
    if (cfg.verify.n_list.size() < 3) throw UsageError("--n-list needs at least 3 values for a fit");
    for (int n : cfg.verify.n_list)
        if (exact_sqrt(n) < 11) throw UsageError("--n-list entries must be perfect squares >= 121");
    ScalingOptions opt;
    opt.rho = cfg.verify.rho;
    opt.resolution = cfg.verify.resolution;
    const ScalingTable t = scaling_study(cfg.verify.n_list, opt);

    const bool slope_ok = t.sup_w_slope >= 1.35 && t.sup_w_slope <= 1.65;
    const bool ucp_ok = t.ucp_variation < 0.25;
    Sink sink(cfg.output);
    std::ostream& os = sink.out();
    if (cfg.format == "csv") {
        os << "n_order,supW,supW_layers,supWbar,pole_order,pole_order_south,doubling_max,ucp_ratio\n";
        for (const auto& r : t.rows)
            os << csv_row(r.n_order, r.sup_w, r.sup_w_layers, r.sup_wbar, r.pole_order_north, r.pole_order_south,
                          r.doubling_max, r.ucp_ratio);
    } else {
        json rows = json::array();
        for (const auto& r : t.rows)
            rows.push_back({{"n_order", r.n_order}, {"supW", r.sup_w}, {"supW_layers", r.sup_w_layers},
                            {"supWbar", r.sup_wbar}, {"pole_order", r.pole_order_north},
                            {"pole_order_south", r.pole_order_south}, {"doubling_max", r.doubling_max},
                            {"ucp_ratio", r.ucp_ratio}});
        os << json{{"rows", rows},
                   {"supW_slope", t.sup_w_slope},
                   {"supW_layers_slope", t.sup_w_layers_slope},
                   {"supWbar_slope", t.sup_wbar_slope},
                   {"ucp_constant_C", t.ucp_constant_C},
                   {"ucp_variation", t.ucp_variation},
                   {"doubling_fit_residual", t.doubling_fit_residual}}
                  .dump(1)
           << '\n';
    }
    std::cerr << (slope_ok ? "PASS" : "FAIL") << " supW_slope = " << fmt(t.sup_w_slope) << " in [1.35, 1.65]\n"
              << (ucp_ok ? "PASS" : "FAIL") << " ucp_variation = " << fmt(t.ucp_variation) << " < 0.25\n";
    return (slope_ok && ucp_ok) || !cfg.strict ? kExitPass : kExitFail;
}

int cmd_sphere(const CliConfig& cfg) {
    const Assembly a = build_assembly({cfg.verify.n_order, cfg.verify.rho, 10});
    const int angular = 32;
    const int polar = cfg.verify.resolution;
    Sink sink(cfg.output);
    std::ostream& os = sink.out();
    json rows = json::array();
    if (cfg.format == "csv") os << "x,y,X,Y,Z,log_abs_u,re_Wbar,im_Wbar\n";
    for (int i = 1; i < polar; ++i) {
        const double r = chart_radius(Pole::south, std::numbers::pi * i / polar);
        for (int k = 0; k < angular; ++k) {
            const double phi = 2.0 * std::numbers::pi * k / angular;
            const double x = r * std::cos(phi);
            const double y = r * std::sin(phi);
            const SpherePoint p = stereo_to_sphere(x, y);
            const double log_abs = eval_plane(a, r, phi).u.log_abs;
            const complex wbar = sphere_potential(a, x, y);
            if (cfg.format == "csv")
                os << csv_row(x, y, p.X, p.Y, p.Z, log_abs, wbar.real(), wbar.imag());
            else
                rows.push_back({{"x", x}, {"y", y}, {"X", p.X}, {"Y", p.Y}, {"Z", p.Z}, {"log_abs_u", log_abs},
                                {"re_Wbar", wbar.real()}, {"im_Wbar", wbar.imag()}});
        }
    }
    if (cfg.format == "json") os << json{{"n_order", a.config.n_order}, {"rows", rows}}.dump(1) << '\n';
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Landis-type counterexample builder and verification harness"};
    app.set_version_flag("--version", std::string(UCPFORGE_VERSION));
    app.require_subcommand(1);

    CliConfig cfg;
    std::string config_path;
    VerifyConfig& v = cfg.verify;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--n-order", v.n_order, "vanishing order N (a perfect square >= 121)");
        sub->add_option("--rho", v.rho, "inner radius rho >= 1");
        sub->add_option("--epsilon", v.epsilon, "Carleman weight exponent in (0, 1)");
        sub->add_option("--resolution", v.resolution, "sampling resolution");
        sub->add_option("--radial-panels", v.radial_panels, "Simpson sub-intervals");
        sub->add_option("--angular-points", v.angular_points, "trapezoid nodes");
        sub->add_option("--output", cfg.output, "output path, - for stdout");
        sub->add_option("--format", cfg.format, "csv or json");
        sub->add_option("--n-list", v.n_list, "N values for the scaling sweep")->delimiter(',');
        sub->add_option("--strict", cfg.strict, "nonzero: failing verdicts give exit code 1");
        sub->add_option("--config", config_path, "JSON file with the same keys; flags win");
    };
    const std::vector<std::pair<const char*, const char*>> subs{
        {"build", "evaluate the field on a polar grid"},
        {"verify", "run the verification suite and write a report"},
        {"carleman", "tau sweep of both sides of the Carleman estimate"},
        {"scaling", "sup|W| and vanishing order across N"},
        {"sphere", "the field transferred to the sphere"}};
    for (const auto& [name, help] : subs) add_common(app.add_subcommand(name, help));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        const CLI::App* sub = app.get_subcommands().front();
        cfg.subcommand = sub->get_name();
        if (!config_path.empty()) apply_json_config(config_path, cfg, *sub);
        validate(cfg);
        if (cfg.subcommand == "build") return cmd_build(cfg);
        if (cfg.subcommand == "verify") return cmd_verify(cfg);
        if (cfg.subcommand == "carleman") return cmd_carleman(cfg);
        if (cfg.subcommand == "scaling") return cmd_scaling(cfg);
        return cmd_sphere(cfg);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFail;
    }
}
