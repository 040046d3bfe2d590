/**
 * @file verify.hpp
 * @brief Independent checks of the constructed pair (u, W): finite-difference
 *        residual of Lap u + W u = 0, seam audits, support and positivity
 *        scans, sup sampling and the N sweep.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "assembly.hpp"
#include "carleman.hpp"
#include "fit.hpp"
#include "layercore.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "sphere.hpp"

namespace ucpforge {

// ---------------------------------------------------------------------------
// Finite-difference oracle

/// True when the 5-point stencil of half-width `reach` around (r, phi) stays
/// inside one piece where u is at least C^3.
inline bool stencil_is_smooth(const Assembly& a, double r, double phi, double reach) {
    if (r <= 2.0 * reach) return false;
    const double radial_reach = reach * (1.0 + reach / r) + 1e-14 * r;
    for (double s : a.seams())
        if (std::abs(s - r) <= radial_reach) return false;

    const Region region = locate(a, r);
    if (region != Region::step1 && region != Region::step2) return true;
    const LayerParams& l = a.layers[static_cast<std::size_t>(layer_index(a, r))];
    const double T = l.period();
    const double angular_reach = std::asin(std::min(1.0, reach / r)) * 1.01;
    for (double b : h_breakpoints(l.h)) {
        const double d = std::remainder(phi - b, T);
        if (std::abs(d) <= angular_reach) return false;
    }
    return true;
}

struct FdResidual {
    double residual = 0.0;       ///< |Lap_h u~ - q| / (|Lap_h u~| + |q| + scale)
    double potential_error = 0.0;  ///< |W_fd - W| / (|W| + scale)
    complex laplacian_fd{};      ///< Lap_h of u / u(center)
    complex q{};                 ///< closed-form Lap u / u
    double scale = 0.0;          ///< |lr|^2 + |lphi / r|^2
};

/**
 * Five-point Cartesian Laplacian of the locally normalized field
 * u~ = u / u(x, y), compared with the closed-form q. The closed form enters
 * only through the comparison, never through the stencil.
 */
inline FdResidual fd_laplacian_residual(const Assembly& a, double x, double y, double h) {
    const double r = std::hypot(x, y);
    const double phi = std::atan2(y, x);
    if (!(h > 0.0)) throw std::invalid_argument("fd_laplacian_residual: h must be > 0");
    if (!stencil_is_smooth(a, r, phi, h))
        throw std::domain_error("fd_laplacian_residual: stencil crosses a seam; shrink h");

    const FieldJet c = eval_xy(a, x, y);
    const std::array<std::pair<double, double>, 4> offsets{{{h, 0.0}, {-h, 0.0}, {0.0, h}, {0.0, -h}}};
    complex sum{};
    for (const auto& [dx, dy] : offsets) sum += ratio(eval_xy(a, x + dx, y + dy).u, c.u);

    FdResidual out;
    out.laplacian_fd = (sum - 4.0) / (h * h);
    out.q = c.q;
    out.scale = std::norm(c.lr) + std::norm(c.lphi / r);
    const double diff = std::abs(out.laplacian_fd - out.q);
    out.residual = diff / (std::abs(out.laplacian_fd) + std::abs(out.q) + out.scale);
    out.potential_error = diff / (std::abs(out.q) + out.scale);
    return out;
}

/// Radial intervals where W may be non-zero: the cap transition and the layers.
inline std::vector<std::pair<double, double>> support_intervals(const Assembly& a) {
    return {{a.cap_lo(), a.cap_hi()}, {a.layers_begin(), a.layers_end()}};
}

struct ResidualStudy {
    int points = 0;
    double median_ratio = 0.0;       ///< median of residual(h) / residual(h/2)
    double max_potential_error = 0.0;  ///< at the fine step used for the agreement check
    std::vector<double> ratios;
};

/**
 * Second-order convergence study at `points` random points where W != 0.
 * Points whose stencil would cross a seam at step h are redrawn.
 */
inline ResidualStudy residual_convergence(const Assembly& a, int points, double h, double h_agreement,
                                          std::uint64_t seed = 20240521) {
    const auto intervals = support_intervals(a);
    double total = 0.0;
    for (const auto& [lo, hi] : intervals) total += hi - lo;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::pair<double, double>> samples;
    while (static_cast<int>(samples.size()) < points) {
        double pos = unit(rng) * total;
        double r = intervals.back().second;
        for (const auto& [lo, hi] : intervals) {
            if (pos < hi - lo) {
                r = lo + pos;
                break;
            }
            pos -= hi - lo;
        }
        const double phi = 2.0 * std::numbers::pi * unit(rng);
        if (!stencil_is_smooth(a, r, phi, h)) continue;
        if (eval_plane(a, r, phi).q == complex{0.0, 0.0}) continue;
        samples.emplace_back(r, phi);
    }

    ResidualStudy study;
    study.points = points;
    study.ratios.resize(samples.size());
    std::vector<double> agreement(samples.size());
    parallel_for(samples.size(), [&](std::size_t i) {
        const double x = samples[i].first * std::cos(samples[i].second);
        const double y = samples[i].first * std::sin(samples[i].second);
        const double coarse = fd_laplacian_residual(a, x, y, h).residual;
        const double fine = fd_laplacian_residual(a, x, y, 0.5 * h).residual;
        study.ratios[i] = coarse / fine;
        agreement[i] = fd_laplacian_residual(a, x, y, h_agreement).potential_error;
    });
    std::vector<double> sorted = study.ratios;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    study.median_ratio = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    study.max_potential_error = *std::max_element(agreement.begin(), agreement.end());
    return study;
}

// ---------------------------------------------------------------------------
// Seams

struct SeamJump {
    double radius = 0.0;
    double log_abs = 0.0;  ///< relative jump of log|u|
    double phase = 0.0;    ///< jump of arg u modulo 2 pi (radians)
    double lr = 0.0;       ///< relative jump of d_r u / u

    double worst() const noexcept { return std::max({log_abs, phase, lr}); }
};

struct SeamAudit {
    std::vector<SeamJump> seams;
    double max_jump = 0.0;
};

template <typename Left, typename Right>
SeamJump audit_seam(double radius, int angular, Left&& left, Right&& right) {
    SeamJump jump;
    jump.radius = radius;
    for (int k = 0; k < angular; ++k) {
        const double phi = 2.0 * std::numbers::pi * k / angular;
        const FieldJet l = left(radius, phi);
        const FieldJet r = right(radius, phi);
        const double scale_u = std::max({1.0, std::abs(l.u.log_abs), std::abs(r.u.log_abs)});
        jump.log_abs = std::max(jump.log_abs, std::abs(l.u.log_abs - r.u.log_abs) / scale_u);
        jump.phase = std::max(jump.phase, std::abs(wrap_phase(l.u.phase - r.u.phase)));
        const double scale_lr = std::max({std::abs(l.lr), std::abs(r.lr), std::numeric_limits<double>::min()});
        jump.lr = std::max(jump.lr, std::abs(l.lr - r.lr) / scale_lr);
    }
    return jump;
}

/// Two-sided evaluation at every formula seam: each side uses its own closed form.
inline SeamAudit interface_continuity(const Assembly& a, int angular = 720) {
    SeamAudit audit;
    const auto add = [&](double radius, auto&& left, auto&& right) {
        audit.seams.push_back(audit_seam(radius, angular, left, right));
        audit.max_jump = std::max(audit.max_jump, audit.seams.back().worst());
    };
    const auto cap = [&](double r, double phi) { return cap_transition_jet(a, r, phi); };
    add(a.cap_lo(), [&](double r, double phi) { return inner_monomial_jet(a, r, phi); }, cap);
    add(a.cap_hi(), cap, [&](double r, double phi) { return collar_monomial_jet(a, r, phi); });
    add(a.layers_begin(), [&](double r, double phi) { return collar_monomial_jet(a, r, phi); },
        [&](double r, double phi) { return eval_step_I(r, phi, a.layers.front()); });
    for (std::size_t i = 0; i < a.layers.size(); ++i) {
        const LayerParams& l = a.layers[i];
        add(l.at(2.0), [&](double r, double phi) { return eval_step_I(r, phi, l); },
            [&](double r, double phi) { return eval_step_II(r, phi, l); });
        add(l.at(3.0), [&](double r, double phi) { return eval_step_II(r, phi, l); },
            [&](double r, double phi) { return eval_step_III(r, phi, l); });
        add(l.at(4.0), [&](double r, double phi) { return eval_step_III(r, phi, l); },
            [&](double r, double phi) { return eval_step_IV(r, phi, l); });
        const auto left = [&](double r, double phi) { return eval_step_IV(r, phi, l); };
        if (i + 1 < a.layers.size())
            add(l.outer(), left, [&](double r, double phi) { return eval_step_I(r, phi, a.layers[i + 1]); });
        else
            add(l.outer(), left, [&](double r, double phi) { return tail_jet(a, r, phi); });
    }
    return audit;
}

// ---------------------------------------------------------------------------
// Sup sampling

/// Angular period of q on the fourth sub-annulus, where u4 / u5 carries e^{i(2n+3k)phi}.
inline double step_iv_period(const LayerParams& l) noexcept {
    return 2.0 * std::numbers::pi / static_cast<double>(2 * l.n + 3 * l.k);
}

/// Sample windows covering supp W: the cap transition (radial only) and, per
/// layer, one angular period of q on [rho_j, rho_j + 4 delta] (period T) and
/// on [rho_j + 4 delta, rho_j + 6 delta].
inline std::vector<SampleRegion> support_regions(const Assembly& a) {
    std::vector<SampleRegion> out;
    out.push_back({a.cap_lo(), a.cap_hi(), {}, 0.0, 0.0, {}});
    for (const auto& l : a.layers) {
        std::vector<double> seams;
        for (double off : kLayerSeamOffsets) seams.push_back(l.at(off));
        const auto bps = h_breakpoints(l.h);
        out.push_back({l.rho_j, l.at(4.0), seams, bps.front(), bps.front() + l.period(), {bps.begin(), bps.end()}});
        out.push_back({l.at(4.0), l.outer(), seams, 0.0, step_iv_period(l), {}});
    }
    return out;
}

struct SupReport {
    SupSample plane;   ///< sup |W|
    SupSample sphere;  ///< sup |W bar| = sup conformal_factor * |W|
    double cap = 0.0;     ///< sup |W| on the cap transition
    double layers = 0.0;  ///< sup |W| over the annulus layers
};

inline SupReport sup_potential(const Assembly& a, int resolution) {
    SupReport rep;
    const auto regions = support_regions(a);
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const SupSample p = sup_norm_sample(
            [&](double r, double phi) { return std::abs(eval_plane(a, r, phi).q); }, regions[i], resolution);
        const SupSample s = sup_norm_sample(
            [&](double r, double phi) { return conformal_factor(r) * std::abs(eval_plane(a, r, phi).q); },
            regions[i], resolution);
        if (i == 0)
            rep.cap = p.value;
        else
            rep.layers = std::max(rep.layers, p.value);
        if (p.value > rep.plane.value) rep.plane = p;
        if (s.value > rep.sphere.value) rep.sphere = s;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Support and positivity scans

struct SupportCheck {
    int samples = 0;
    double max_abs_w = 0.0;  ///< over regions declared harmonic; exactly 0 when correct
};

/**
 * |W| on r < rho/4, r > rho_J, the phase-locked bands of the first
 * sub-annulus and the plateau band of the fourth, on a dense grid.
 */
inline SupportCheck support_check(const Assembly& a, int resolution = 512) {
    SupportCheck chk;
    const auto scan = [&](double r_lo, double r_hi, double phi_lo, double phi_hi, int nr, int nphi) {
        for (int i = 0; i < nr; ++i) {
            const double r = r_lo + (r_hi - r_lo) * (i + 0.5) / nr;
            for (int k = 0; k < nphi; ++k) {
                const double phi = phi_lo + (phi_hi - phi_lo) * (k + 0.5) / nphi;
                chk.max_abs_w = std::max(chk.max_abs_w, std::abs(eval_plane(a, r, phi).q));
                ++chk.samples;
            }
        }
    };
    const int nphi = std::max(16, resolution / 8);
    scan(1e-6, a.cap_lo(), 0.0, 2.0 * std::numbers::pi, resolution, nphi);
    scan(a.layers_end(), a.layers_end() + 10.0, 0.0, 2.0 * std::numbers::pi, resolution, nphi);
    for (const auto& l : a.layers) {
        const double T = l.period();
        for (long m : {0L, 1L, static_cast<long>(l.n + l.k) - 1}) {
            const double c = l.h.phi_m(m);
            scan(l.at(1.0 / 3.0), l.at(5.0 / 3.0), c - 0.2 * T, c + 0.2 * T, resolution / 8, nphi / 4);
        }
        scan(l.at(13.0 / 3.0), l.at(17.0 / 3.0), 0.0, 2.0 * std::numbers::pi, resolution / 8, nphi);
    }
    return chk;
}

/// Decay exponent n(r) of the piece holding r, so log|u| + n ln r is O(1).
inline double local_exponent(const Assembly& a, double r) {
    switch (locate(a, r)) {
        case Region::origin:
        case Region::inner: return -a.inner_n;
        case Region::cap:
        case Region::collar: return a.inner_n;
        case Region::tail: return a.config.n_order;
        default: return a.layers[static_cast<std::size_t>(layer_index(a, r))].n;
    }
}

struct PositivityCheck {
    bool all_finite = true;
    double min_normalized = std::numeric_limits<double>::infinity();
    double max_normalized = -std::numeric_limits<double>::infinity();
};

/// log|u| + n(r) ln r over a polar grid of (0, rho_J + 1] x [0, 2 pi).
inline PositivityCheck positivity_check(const Assembly& a, int nr = 2000, int nphi = 2000) {
    const double r_max = a.layers_end() + 1.0;
    std::vector<PositivityCheck> rows(static_cast<std::size_t>(nr));
    parallel_for(rows.size(), [&](std::size_t i) {
        const double r = r_max * (static_cast<double>(i) + 1.0) / nr;
        const double n = local_exponent(a, r);
        PositivityCheck row;
        for (int k = 0; k < nphi; ++k) {
            const double v = eval_plane(a, r, 2.0 * std::numbers::pi * k / nphi).u.log_abs + n * std::log(r);
            if (!std::isfinite(v)) row.all_finite = false;
            row.min_normalized = std::min(row.min_normalized, v);
            row.max_normalized = std::max(row.max_normalized, v);
        }
        rows[i] = row;
    });
    PositivityCheck out;
    for (const auto& row : rows) {
        out.all_finite = out.all_finite && row.all_finite;
        out.min_normalized = std::min(out.min_normalized, row.min_normalized);
        out.max_normalized = std::max(out.max_normalized, row.max_normalized);
    }
    return out;
}

/// Least-squares slope of log|u| against log r on the tail, phi = 0.
inline double tail_slope(const Assembly& a, int samples = 64) {
    std::vector<double> xs, ys;
    const double lo = a.layers_end() + 1.0;
    const double hi = a.layers_end() + 6.0;
    for (int i = 0; i < samples; ++i) {
        const double r = lo + (hi - lo) * i / (samples - 1);
        xs.push_back(std::log(r));
        ys.push_back(eval_plane(a, r, 0.0).u.log_abs);
    }
    return fit_line(xs, ys).slope;
}

// ---------------------------------------------------------------------------
// N sweep

struct ScalingOptions {
    double rho = 1.0;
    int resolution = 1024;
    std::vector<double> pole_radii{0.01, 0.0177827941, 0.0316227766, 0.0562341325, 0.1};
    std::vector<double> doubling_caps{0.02, 0.05};
    QuadratureSpec cap_spec{8192, 16, 2};
};

struct ScalingRow {
    int n_order = 0;
    double sup_w = 0.0;
    double sup_w_layers = 0.0;
    double sup_wbar = 0.0;
    double pole_order_north = 0.0;
    double pole_order_south = 0.0;
    double doubling_max = 0.0;
    double ucp_ratio = 0.0;  ///< N / sup|W bar|^{2/3}
};

struct ScalingTable {
    std::vector<ScalingRow> rows;
    double sup_w_slope = 0.0;         ///< d log sup|W| / d log N
    double sup_w_layers_slope = 0.0;  ///< same, layers only
    double sup_wbar_slope = 0.0;
    double ucp_constant_C = 0.0;      ///< min over rows of N / sup|W bar|^{2/3}
    double ucp_variation = 0.0;       ///< max/min - 1 of that ratio
    double doubling_fit_residual = 0.0;  ///< max affine-fit residual / range of doubling_max
};

/// North-pole cap doubling exponents for one assembly.
inline double cap_doubling_max(const Assembly& a, std::span<const double> caps, const QuadratureSpec& spec) {
    const auto log_abs = [&](double r, double phi) { return eval_plane(a, r, phi).u.log_abs; };
    double best = -std::numeric_limits<double>::infinity();
    for (double s : caps) {
        const double e = (cap_log_norm(log_abs, Pole::north, 2.0 * s, spec) -
                          cap_log_norm(log_abs, Pole::north, s, spec)) / std::log(2.0);
        best = std::max(best, e);
    }
    return best;
}

inline ScalingRow scaling_row(int n_order, const ScalingOptions& opt) {
    const Assembly a = build_assembly({n_order, opt.rho, 10});
    const SupReport sup = sup_potential(a, opt.resolution);
    ScalingRow row;
    row.n_order = n_order;
    row.sup_w = sup.plane.value;
    row.sup_w_layers = sup.layers;
    row.sup_wbar = sup.sphere.value;
    row.pole_order_north = pole_vanishing_order(a, Pole::north, opt.pole_radii);
    row.pole_order_south = pole_vanishing_order(a, Pole::south, opt.pole_radii);
    row.doubling_max = cap_doubling_max(a, opt.doubling_caps, opt.cap_spec);
    row.ucp_ratio = n_order / std::pow(row.sup_wbar, 2.0 / 3.0);
    return row;
}

inline ScalingTable scaling_study(std::span<const int> n_list, const ScalingOptions& opt) {
    if (n_list.size() < 3) throw std::invalid_argument("scaling_study: need at least 3 values of N for a fit");
    for (int n : n_list)
        if (n < 121) throw std::invalid_argument("scaling_study: every N must be a perfect square >= 121");

    ScalingTable table;
    for (int n : n_list) table.rows.push_back(scaling_row(n, opt));

    std::vector<double> log_n, log_w, log_wl, log_wb, w23, dmax;
    double cmin = std::numeric_limits<double>::infinity(), cmax = 0.0;
    for (const auto& row : table.rows) {
        log_n.push_back(std::log(row.n_order));
        log_w.push_back(std::log(row.sup_w));
        log_wl.push_back(std::log(row.sup_w_layers));
        log_wb.push_back(std::log(row.sup_wbar));
        w23.push_back(std::pow(row.sup_wbar, 2.0 / 3.0));
        dmax.push_back(row.doubling_max);
        cmin = std::min(cmin, row.ucp_ratio);
        cmax = std::max(cmax, row.ucp_ratio);
    }
    table.sup_w_slope = fit_line(log_n, log_w).slope;
    table.sup_w_layers_slope = fit_line(log_n, log_wl).slope;
    table.sup_wbar_slope = fit_line(log_n, log_wb).slope;
    table.ucp_constant_C = cmin;
    table.ucp_variation = cmax / cmin - 1.0;
    const auto [lo, hi] = std::minmax_element(dmax.begin(), dmax.end());
    table.doubling_fit_residual = fit_line(w23, dmax).max_abs_residual / std::max(*hi - *lo, 1e-300);
    return table;
}

}  // namespace ucpforge
