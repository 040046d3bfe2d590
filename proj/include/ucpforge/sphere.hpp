/**
 * @file sphere.hpp
 * @brief Transfer of the plane field to S^2 through the stereographic chart.
 *
 * pi(x, y) = (2x, 2y, x^2 + y^2 - 1) / (x^2 + y^2 + 1) sends the origin to the
 * south pole and infinity to the north pole; in this chart the sphere
 * Laplacian is (1 + x^2 + y^2)^2 / 4 times the flat one.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "assembly.hpp"
#include "fit.hpp"
#include "log_complex.hpp"
#include "quadrature.hpp"

namespace ucpforge {

struct SpherePoint {
    double X = 0.0;
    double Y = 0.0;
    double Z = -1.0;
};

enum class Pole { north, south };

inline SpherePoint stereo_to_sphere(double x, double y) noexcept {
    const double rr = x * x + y * y;
    const double inv = 1.0 / (rr + 1.0);
    return {2.0 * x * inv, 2.0 * y * inv, (rr - 1.0) * inv};
}

/// Chart coordinates of a point other than the north pole.
inline std::pair<double, double> sphere_to_chart(const SpherePoint& p) noexcept {
    const double denom = 1.0 - p.Z;
    return {p.X / denom, p.Y / denom};
}

/// (1 + r^2)^2 / 4, the factor between the flat and the sphere Laplacian.
inline double conformal_factor(double r) noexcept {
    const double s = 1.0 + r * r;
    return 0.25 * s * s;
}

/// Chart radius of the circle at geodesic distance s from the given pole.
inline double chart_radius(Pole pole, double s) noexcept {
    return pole == Pole::north ? 1.0 / std::tan(0.5 * s) : std::tan(0.5 * s);
}

/// Sphere potential at pi(x, y): conformal factor times the plane potential.
inline complex sphere_potential(const Assembly& a, double x, double y) {
    const double r = std::hypot(x, y);
    const complex w = eval_plane(a, r, std::atan2(y, x)).potential();
    if (w == complex{0.0, 0.0}) return {0.0, 0.0};
    return conformal_factor(r) * w;
}

/**
 * Least-squares slope of log sup_{dcap(s)} |u| against log s, where the
 * sup over each geodesic circle is sampled at `angular` points.
 * log_abs(r, phi) gives log|u| in chart polar coordinates.
 */
template <typename LogAbs>
double pole_vanishing_order(LogAbs&& log_abs, Pole pole, std::span<const double> radii, int angular = 256) {
    if (radii.size() < 3) throw std::invalid_argument("pole_vanishing_order: need at least 3 radii");
    std::vector<double> xs, ys;
    for (double s : radii) {
        if (!(s > 0.0 && s < std::numbers::pi))
            throw std::invalid_argument("pole_vanishing_order: cap radius must lie in (0, pi)");
        const double rc = chart_radius(pole, s);
        double best = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < angular; ++k) best = std::max(best, log_abs(rc, 2.0 * std::numbers::pi * k / angular));
        xs.push_back(std::log(s));
        ys.push_back(best);
    }
    return fit_line(xs, ys).slope;
}

inline double pole_vanishing_order(const Assembly& a, Pole pole, std::span<const double> radii,
                                   int angular = 256) {
    return pole_vanishing_order([&](double r, double phi) { return eval_plane(a, r, phi).u.log_abs; }, pole,
                                radii, angular);
}

/**
 * log of the L^2 norm of u over the geodesic cap of radius s about a pole,
 * integrated in geodesic polar coordinates (area element sin(sigma)).
 */
template <typename LogAbs>
double cap_log_norm(LogAbs&& log_abs, Pole pole, double s, const QuadratureSpec& spec) {
    if (!(s > 0.0 && s < std::numbers::pi)) throw std::invalid_argument("cap_log_norm: bad cap radius");
    const double li = log_integral_polar(0.0, s, {}, spec, [&](double sigma, double phi) {
        if (sigma == 0.0) return -std::numeric_limits<double>::infinity();
        return 2.0 * log_abs(chart_radius(pole, sigma), phi) + std::log(std::sin(sigma));
    });
    return 0.5 * li;
}

}  // namespace ucpforge
