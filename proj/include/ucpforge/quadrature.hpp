/**
 * @file quadrature.hpp
 * @brief Deterministic polar quadrature (composite Simpson in r, periodic
 *        trapezoid in phi) accumulated in log space, and seam-aligned sup
 *        sampling.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "parallel.hpp"

namespace ucpforge {

struct QuadratureSpec {
    int radial_panels = 256;    ///< Simpson sub-intervals over the whole radial range (even)
    int angular_points = 4096;  ///< uniform periodic trapezoid nodes
    int refinement_factor = 2;  ///< used by convergence studies

    void validate() const {
        if (radial_panels < 8 || radial_panels % 2 != 0)
            throw std::invalid_argument("QuadratureSpec: radial_panels must be even and >= 8");
        if (angular_points < 16) throw std::invalid_argument("QuadratureSpec: angular_points must be >= 16");
        if (refinement_factor < 2) throw std::invalid_argument("QuadratureSpec: refinement_factor must be >= 2");
    }

    QuadratureSpec refined() const {
        return {radial_panels * refinement_factor, angular_points * refinement_factor, refinement_factor};
    }
};

/// Pairwise summation with a tree fixed by index.
inline double pairwise_sum(std::span<const double> v) noexcept {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

/// log sum_i exp(logs[i]) with a max shift; -inf entries contribute zero.
inline double log_sum_exp(std::span<const double> logs) {
    double top = -std::numeric_limits<double>::infinity();
    for (double x : logs) {
        if (std::isnan(x) || (std::isinf(x) && x > 0)) throw std::domain_error("quadrature: non-finite sample");
        top = std::max(top, x);
    }
    if (std::isinf(top)) return top;
    std::vector<double> shifted(logs.size());
    for (std::size_t i = 0; i < logs.size(); ++i) shifted[i] = std::exp(logs[i] - top);
    return top + std::log(pairwise_sum(shifted));
}

struct RadialRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/**
 * Composite Simpson on [lo, hi] with panel boundaries snapped to every
 * breakpoint inside the interval. Each piece gets an even share (>= 2) of
 * the sub-interval budget in proportion to its length.
 */
inline RadialRule simpson_rule(double lo, double hi, std::span<const double> breakpoints, int panels) {
    if (!(lo < hi)) throw std::invalid_argument("simpson_rule: empty interval");
    std::vector<double> cuts{lo};
    for (double b : breakpoints)
        if (b > lo && b < hi) cuts.push_back(b);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    RadialRule rule;
    const double total = hi - lo;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const double a = cuts[c];
        const double b = cuts[c + 1];
        int m = static_cast<int>(std::lround(panels * (b - a) / total));
        m = std::max(2, m + (m % 2));
        const double step = (b - a) / m;
        for (int i = 0; i <= m; ++i) {
            const double w = (i == 0 || i == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            rule.nodes.push_back(i == m ? b : a + i * step);
            rule.weights.push_back(w * step / 3.0);
        }
    }
    return rule;
}

/**
 * log of int_lo^hi int_0^{2pi} exp(log_f(r, phi)) dphi dr.
 * The caller includes any Jacobian in log_f.
 */
template <typename LogIntegrand>
double log_integral_polar(double lo, double hi, std::span<const double> breakpoints,
                          const QuadratureSpec& spec, LogIntegrand&& log_f) {
    spec.validate();
    const RadialRule rule = simpson_rule(lo, hi, breakpoints, spec.radial_panels);
    const int m = spec.angular_points;
    const double dphi = 2.0 * std::numbers::pi / m;

    std::vector<double> ring(rule.nodes.size());
    parallel_for(rule.nodes.size(), [&](std::size_t i) {
        std::vector<double> logs(static_cast<std::size_t>(m));
        for (int k = 0; k < m; ++k) logs[static_cast<std::size_t>(k)] = log_f(rule.nodes[i], k * dphi);
        ring[i] = log_sum_exp(logs) + std::log(dphi * rule.weights[i]);
    });
    return log_sum_exp(ring);
}

/// log of the L^2 norm over the annulus lo <= |z - center| <= hi.
template <typename LogAbs>
double annulus_log_norm(LogAbs&& log_abs, double cx, double cy, double lo, double hi,
                        const QuadratureSpec& spec, std::span<const double> breakpoints = {}) {
    const double li = log_integral_polar(lo, hi, breakpoints, spec, [&](double r, double phi) {
        if (r == 0.0) return -std::numeric_limits<double>::infinity();
        return 2.0 * log_abs(cx + r * std::cos(phi), cy + r * std::sin(phi)) + std::log(r);
    });
    return 0.5 * li;
}

/// log ||f||_{L^2(B_radius(center))}; log_abs(x, y) returns log|f|.
template <typename LogAbs>
double ball_norm_l2(LogAbs&& log_abs, double cx, double cy, double radius, const QuadratureSpec& spec,
                    std::span<const double> breakpoints = {}) {
    if (!(radius > 0.0)) throw std::invalid_argument("ball_norm_l2: radius must be > 0");
    return annulus_log_norm(log_abs, cx, cy, 0.0, radius, spec, breakpoints);
}

/// Polar sampling window; phi_hi == phi_lo samples a single angle.
struct SampleRegion {
    double r_lo = 0.0;
    double r_hi = 0.0;
    std::vector<double> radial_seams;
    double phi_lo = 0.0;
    double phi_hi = 2.0 * std::numbers::pi;
    std::vector<double> angular_seams;
};

struct SupSample {
    double value = 0.0;
    double r = 0.0;
    double phi = 0.0;
};

/// Nodes on [lo, hi): every seam is a node, the rest spread by length.
inline std::vector<double> aligned_grid(double lo, double hi, std::span<const double> seams, int count) {
    std::vector<double> cuts{lo};
    for (double s : seams)
        if (s > lo && s < hi) cuts.push_back(s);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<double> out;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const int m = std::max(1, static_cast<int>(std::lround(count * (cuts[c + 1] - cuts[c]) / (hi - lo))));
        const double step = (cuts[c + 1] - cuts[c]) / m;
        for (int i = 0; i < m; ++i) out.push_back(cuts[c] + i * step);
    }
    return out;
}

/**
 * Max of component(r, phi) (expected >= 0) over a resolution x resolution
 * grid aligned to the region's seams. Ties keep the first index.
 */
template <typename Component>
SupSample sup_norm_sample(Component&& component, const SampleRegion& region, int resolution) {
    if (resolution < 64) throw std::invalid_argument("sup_norm_sample: resolution must be >= 64");
    if (!(region.r_lo < region.r_hi)) throw std::invalid_argument("sup_norm_sample: empty region");
    const std::vector<double> rs = aligned_grid(region.r_lo, region.r_hi, region.radial_seams, resolution);
    const std::vector<double> phis =
        region.phi_hi > region.phi_lo
            ? aligned_grid(region.phi_lo, region.phi_hi, region.angular_seams, resolution)
            : std::vector<double>{region.phi_lo};

    std::vector<SupSample> rows(rs.size());
    parallel_for(rs.size(), [&](std::size_t i) {
        SupSample best{-1.0, rs[i], phis.front()};
        for (double phi : phis) {
            const double v = component(rs[i], phi);
            if (!std::isfinite(v)) throw std::domain_error("sup_norm_sample: non-finite sample");
            if (v > best.value) best = {v, rs[i], phi};
        }
        rows[i] = best;
    });
    SupSample best = rows.front();
    for (const auto& row : rows)
        if (row.value > best.value) best = row;
    return best;
}

}  // namespace ucpforge
