/**
 * @file carleman.hpp
 * @brief The weight phi(r) = -ln r + r^eps, quadrature of both sides of the
 *        weighted Carleman inequality for radial test functions, and
 *        three-balls / doubling probes.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "assembly.hpp"
#include "fit.hpp"
#include "log_complex.hpp"
#include "quadrature.hpp"
#include "smoothkit.hpp"

namespace ucpforge {

/// f(t) = t - e^{eps t}; phi(r) = -f(ln r) = -ln r + r^eps.
struct CarlemanWeight {
    double epsilon = 0.5;

    void validate() const {
        if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("CarlemanWeight: epsilon must lie in (0,1)");
    }
    double f(double t) const noexcept { return t - std::exp(epsilon * t); }
    double df(double t) const noexcept { return 1.0 - epsilon * std::exp(epsilon * t); }
    double d2f(double t) const noexcept { return -epsilon * epsilon * std::exp(epsilon * t); }
    double phi(double r) const noexcept { return -std::log(r) + std::pow(r, epsilon); }
};

struct WeightValue {
    double phi = 0.0;
    double dphi_dr = 0.0;
};

inline WeightValue weight_value(const CarlemanWeight& w, double r) {
    w.validate();
    if (!(r > 0.0)) throw std::invalid_argument("weight_value: r must be > 0");
    return {w.phi(r), -1.0 / r + w.epsilon * std::pow(r, w.epsilon - 1.0)};
}

/// u(r, phi) = B(r) e^{i mode phi}, B a C^2 bump supported in [inner, outer].
struct TestFunction {
    double inner = 0.03;
    double outer = 0.3;
    double ramp = 0.05;
    int mode = 0;

    void validate() const {
        if (!(inner > 0.0 && ramp > 0.0 && inner + 2.0 * ramp <= outer))
            throw std::invalid_argument("TestFunction: need 0 < inner, ramp > 0, inner + 2 ramp <= outer");
    }

    Jet2 radial(double r) const {
        const Jet2 a = cutoff_jet(r, inner, inner + ramp, Direction::rising);
        const Jet2 b = cutoff_jet(r, outer - ramp, outer, Direction::falling);
        return {a.value * b.value, a.d1 * b.value + a.value * b.d1,
                a.d2 * b.value + 2.0 * a.d1 * b.d1 + a.value * b.d2};
    }

    std::array<double, 4> breakpoints() const { return {inner, inner + ramp, outer - ramp, outer}; }
};

/// Logs of both sides; rhs terms are prefactor times a tau-dependent integral.
struct CarlemanSides {
    double tau = 0.0;
    double log_lhs = 0.0;           ///< ||r^2 e^{tau phi}(Lap u + W u)||^2
    double log_int_u_eps = 0.0;     ///< ||r^{eps/2} e^{tau phi} u||^2
    double log_int_u_inv = 0.0;     ///< ||r^{-1/2} e^{tau phi} u||^2
    double log_int_grad = 0.0;      ///< ||r^{1+eps/2} e^{tau phi} grad u||^2
    double log_rhs_tau3 = 0.0;
    double log_rhs_tau2delta = 0.0;
    double log_rhs_tau1 = 0.0;

    double log_rhs_total() const {
        const std::array<double, 3> t{log_rhs_tau3, log_rhs_tau2delta, log_rhs_tau1};
        return log_sum_exp(t);
    }
    double log_ratio() const { return log_rhs_total() - log_lhs; }
};

/**
 * Both sides of
 *   C ||r^2 e^{tau phi}(Lap u + W u)||^2 >= tau^3 ||r^{eps/2} e^{tau phi} u||^2
 *     + tau^2 delta ||r^{-1/2} e^{tau phi} u||^2 + tau ||r^{1+eps/2} e^{tau phi} grad u||^2
 * by quadrature, for u = B(r) e^{i m phi}. potential(r, phi) returns W.
 */
template <typename Potential>
CarlemanSides carleman_sides(const TestFunction& tf, Potential&& potential, double tau, const CarlemanWeight& w,
                             double delta, const QuadratureSpec& spec) {
    tf.validate();
    w.validate();
    if (!(tau >= 1.0)) throw std::invalid_argument("carleman_sides: tau must be >= 1");
    if (!(delta > 0.0) || tf.inner < delta || tf.outer >= 1.0)
        throw std::invalid_argument("carleman_sides: test function must be supported in [delta, R0] with R0 < 1");

    const double eps = w.epsilon;
    const double m2 = static_cast<double>(tf.mode) * tf.mode;
    const auto bp = tf.breakpoints();
    const auto integrate = [&](auto&& log_f) { return log_integral_polar(tf.inner, tf.outer, bp, spec, log_f); };
    const auto safe_log = [](double x) {
        return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
    };

    CarlemanSides out;
    out.tau = tau;
    out.log_lhs = integrate([&](double r, double phi) {
        const Jet2 b = tf.radial(r);
        const complex op = complex{b.d2 + b.d1 / r - m2 * b.value / (r * r), 0.0} + potential(r, phi) * b.value;
        return 5.0 * std::log(r) + 2.0 * tau * w.phi(r) + 2.0 * safe_log(std::abs(op));
    });
    out.log_int_u_eps = integrate([&](double r, double) {
        const Jet2 b = tf.radial(r);
        return (eps + 1.0) * std::log(r) + 2.0 * tau * w.phi(r) + 2.0 * safe_log(std::abs(b.value));
    });
    out.log_int_u_inv = integrate([&](double r, double) {
        const Jet2 b = tf.radial(r);
        return 2.0 * tau * w.phi(r) + 2.0 * safe_log(std::abs(b.value));
    });
    out.log_int_grad = integrate([&](double r, double) {
        const Jet2 b = tf.radial(r);
        const double grad2 = b.d1 * b.d1 + m2 * b.value * b.value / (r * r);
        return (3.0 + eps) * std::log(r) + 2.0 * tau * w.phi(r) + safe_log(grad2);
    });
    out.log_rhs_tau3 = 3.0 * std::log(tau) + out.log_int_u_eps;
    out.log_rhs_tau2delta = 2.0 * std::log(tau) + std::log(delta) + out.log_int_u_inv;
    out.log_rhs_tau1 = std::log(tau) + out.log_int_grad;
    return out;
}

inline CarlemanSides carleman_sides(const TestFunction& tf, double tau, const CarlemanWeight& w, double delta,
                                    const QuadratureSpec& spec) {
    return carleman_sides(tf, [](double, double) { return complex{}; }, tau, w, delta, spec);
}

struct CarlemanSweepRow {
    std::size_t bump = 0;
    int mode = 0;
    CarlemanSides sides;
};

struct CarlemanSweep {
    std::vector<CarlemanSweepRow> rows;
    std::array<double, 3> tau_exponent{};  ///< fitted exponents of the three rhs prefactors, worst case
    double max_ratio = 0.0;                ///< max over rows of sum(rhs) / lhs
};

/// Radial bumps supported in [R0 / 20, R0] with R0 = 0.3.
inline std::vector<TestFunction> default_bumps() {
    return {{0.015, 0.1, 0.02, 0}, {0.05, 0.2, 0.04, 0}, {0.1, 0.3, 0.05, 0}};
}

/// n points in [lo, hi] spaced evenly in log.
inline std::vector<double> geometric_grid(double lo, double hi, int n) {
    if (!(lo > 0.0 && lo < hi) || n < 2) throw std::invalid_argument("geometric_grid: need 0 < lo < hi, n >= 2");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return out;
}

/**
 * carleman_sides with W = 0 over bumps x modes x taus. Each rhs prefactor's
 * tau exponent is fitted per (bump, mode) and the value farthest from
 * (3, 2, 1) is kept.
 */
inline CarlemanSweep carleman_sweep(std::span<const TestFunction> bumps, std::span<const int> modes,
                                    std::span<const double> taus, const CarlemanWeight& w, double delta,
                                    const QuadratureSpec& spec) {
    if (taus.size() < 2) throw std::invalid_argument("carleman_sweep: need at least 2 tau values");
    CarlemanSweep sweep;
    for (std::size_t b = 0; b < bumps.size(); ++b)
        for (int m : modes)
            for (double tau : taus) {
                TestFunction tf = bumps[b];
                tf.mode = m;
                sweep.rows.push_back({b, m, carleman_sides(tf, tau, w, delta, spec)});
            }

    const std::array<double, 3> expected{3.0, 2.0, 1.0};
    sweep.tau_exponent = expected;
    for (std::size_t start = 0; start < sweep.rows.size(); start += taus.size()) {
        std::array<std::vector<double>, 3> ys;
        std::vector<double> xs;
        for (std::size_t i = start; i < start + taus.size(); ++i) {
            const CarlemanSides& s = sweep.rows[i].sides;
            xs.push_back(std::log(s.tau));
            ys[0].push_back(s.log_rhs_tau3 - s.log_int_u_eps);
            ys[1].push_back(s.log_rhs_tau2delta - s.log_int_u_inv);
            ys[2].push_back(s.log_rhs_tau1 - s.log_int_grad);
        }
        for (std::size_t t = 0; t < 3; ++t) {
            const double slope = fit_line(xs, ys[t]).slope;
            if (std::abs(slope - expected[t]) > std::abs(sweep.tau_exponent[t] - expected[t]))
                sweep.tau_exponent[t] = slope;
        }
    }
    for (const auto& row : sweep.rows) sweep.max_ratio = std::max(sweep.max_ratio, std::exp(row.sides.log_ratio()));
    return sweep;
}

struct ThreeBallsReport {
    double cx = 0.0;
    double cy = 0.0;
    double R = 0.0;
    double log_norm_half = 0.0;  ///< log ||u||_{B_{R/2}}
    double log_norm_R = 0.0;
    double log_norm_2R = 0.0;
    double A = 0.0;  ///< phi(R/4) - phi(R)
    double B = 0.0;  ///< phi(R) - phi(3R/2)
    double alpha = 0.0;
    double implied_C = 0.0;  ///< log||u||_R - alpha log||u||_{R/2} - (1-alpha) log||u||_{2R}
};

struct ThreeBallsExponent {
    double A = 0.0;
    double B = 0.0;
    double alpha = 0.0;
};

inline ThreeBallsExponent three_balls_alpha(const CarlemanWeight& w, double R) {
    w.validate();
    if (!(R > 0.0)) throw std::invalid_argument("three_balls_alpha: R must be > 0");
    ThreeBallsExponent e;
    e.A = w.phi(R / 4.0) - w.phi(R);
    e.B = w.phi(R) - w.phi(1.5 * R);
    if (!(e.A > 0.0 && e.B > 0.0)) throw std::domain_error("three_balls_alpha: weight not decreasing on [R/4, 3R/2]");
    e.alpha = e.A / (e.A + e.B);
    return e;
}

/// log_norm(cx, cy, radius) -> log ||u||_{B_radius}.
template <typename LogNorm>
ThreeBallsReport three_balls_check(LogNorm&& log_norm, double cx, double cy, double R, const CarlemanWeight& w) {
    const ThreeBallsExponent e = three_balls_alpha(w, R);
    ThreeBallsReport rep;
    rep.cx = cx;
    rep.cy = cy;
    rep.R = R;
    rep.log_norm_half = log_norm(cx, cy, 0.5 * R);
    rep.log_norm_R = log_norm(cx, cy, R);
    rep.log_norm_2R = log_norm(cx, cy, 2.0 * R);
    rep.A = e.A;
    rep.B = e.B;
    rep.alpha = e.alpha;
    rep.implied_C = rep.log_norm_R - e.alpha * rep.log_norm_half - (1.0 - e.alpha) * rep.log_norm_2R;
    if (!std::isfinite(rep.implied_C)) throw std::domain_error("three_balls_check: quadrature failure");
    return rep;
}

/// Ball norm of the constructed field; origin-centred balls snap to field seams.
inline double assembly_ball_log_norm(const Assembly& a, double cx, double cy, double radius,
                                     const QuadratureSpec& spec) {
    const auto log_abs = [&](double x, double y) { return eval_xy(a, x, y).u.log_abs; };
    if (cx == 0.0 && cy == 0.0) {
        const std::vector<double> seams = a.seams();
        return ball_norm_l2(log_abs, 0.0, 0.0, radius, spec, seams);
    }
    return ball_norm_l2(log_abs, cx, cy, radius, spec);
}

inline ThreeBallsReport three_balls_check(const Assembly& a, double cx, double cy, double R,
                                          const CarlemanWeight& w, const QuadratureSpec& spec) {
    return three_balls_check(
        [&](double x, double y, double rad) { return assembly_ball_log_norm(a, x, y, rad, spec); }, cx, cy, R, w);
}

struct DoublingRow {
    double cx = 0.0;
    double cy = 0.0;
    double r = 0.0;
    double log_norm_r = 0.0;
    double log_norm_2r = 0.0;
    double exponent = 0.0;  ///< log2(||u||_{2r} / ||u||_r)
};

struct DoublingReport {
    std::vector<DoublingRow> rows;
    double max_exponent = -std::numeric_limits<double>::infinity();
};

/// Doubling exponents for every (center, radius) pair; log_norm as in three_balls_check.
template <typename LogNorm>
DoublingReport doubling_report(LogNorm&& log_norm, std::span<const std::pair<double, double>> centers,
                               std::span<const double> radii) {
    DoublingReport rep;
    for (const auto& [cx, cy] : centers) {
        for (double r : radii) {
            DoublingRow row{cx, cy, r, log_norm(cx, cy, r), log_norm(cx, cy, 2.0 * r), 0.0};
            row.exponent = (row.log_norm_2r - row.log_norm_r) / std::log(2.0);
            rep.max_exponent = std::max(rep.max_exponent, row.exponent);
            rep.rows.push_back(row);
        }
    }
    return rep;
}

}  // namespace ucpforge
