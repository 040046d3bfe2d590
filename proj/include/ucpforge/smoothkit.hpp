/**
 * @file smoothkit.hpp
 * @brief C^2 glue: quintic smoothstep, radial cutoff windows and the
 *        T-periodic phase-modulation function h.
 */
#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ucpforge {

/// Value with first and second derivative with respect to the argument.
struct Jet2 {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

/// Sup of |S'| on [0,1] for the quintic smoothstep (attained at t = 1/2).
inline constexpr double kSmoothstepMaxD1 = 1.875;
/// Sup of |S''| on [0,1], equal to 10/sqrt(3).
inline constexpr double kSmoothstepMaxD2 = 5.773502691896258;

/// S(t) = 6t^5 - 15t^4 + 10t^3, clamped outside [0,1].
inline Jet2 smoothstep_jet(double t) noexcept {
    if (t <= 0.0) return {0.0, 0.0, 0.0};
    if (t >= 1.0) return {1.0, 0.0, 0.0};
    const double t2 = t * t;
    return {t2 * t * (t * (6.0 * t - 15.0) + 10.0),
            30.0 * t2 * (t * (t - 2.0) + 1.0),
            60.0 * t * (t * (2.0 * t - 3.0) + 1.0)};
}

/// Antiderivative of S with I(0) = 0, I(1) = 1/2.
inline double smoothstep_integral(double t) noexcept {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 0.5 + (t - 1.0);
    const double t4 = t * t * t * t;
    return t4 * (t * (t - 3.0) + 2.5);
}

enum class Direction { rising, falling };

/**
 * C^2 radial window, constant outside [r_lo, r_hi).
 *
 * A rising window is 0 for r <= r_lo and 1 for r >= r_hi; falling is the
 * complement. |d1| <= 1.875/w and |d2| <= 5.7735/w^2 with w = r_hi - r_lo.
 */
inline Jet2 cutoff_jet(double r, double r_lo, double r_hi, Direction direction) {
    if (!(r_lo < r_hi)) throw std::invalid_argument("cutoff_jet: r_lo must be < r_hi");
    const double width = r_hi - r_lo;
    Jet2 s = smoothstep_jet((r - r_lo) / width);
    s.d1 /= width;
    s.d2 /= width * width;
    if (direction == Direction::falling) return {1.0 - s.value, -s.d1, -s.d2};
    return s;
}

/**
 * Parameters of the periodic phase function for one annulus layer:
 * n = j^2, k = 2j+1, period T = pi/(n+k) and lattice phi_m = m*T.
 */
struct HParams {
    int j = 10;
    int n = 100;
    int k = 21;
    double period = std::numbers::pi / 121.0;

    static HParams for_layer(int j) {
        if (j < 10) throw std::invalid_argument("HParams: layer index j must be >= 10");
        HParams p;
        p.j = j;
        p.n = j * j;
        p.k = 2 * j + 1;
        p.period = std::numbers::pi / static_cast<double>(p.n + p.k);
        return p;
    }

    double phi_m(long m) const noexcept { return static_cast<double>(m) * period; }
};

namespace detail {

// h' shape on the gap between two linear bands: ramps occupy this fraction
// of the gap at each end, the plateau sits at kHPeakOverK * k.
inline constexpr double kHRampFraction = 0.25;
inline constexpr double kHPeakOverK = 44.0 / 9.0;

}  // namespace detail

/**
 * The T-periodic C^2 function h with
 *   h(phi) = -4k (phi - phi_m) for |phi - phi_m| <= T/5,
 *   |h| <= 5kT, |h'| <= 5k, |h''| <= C k n.
 *
 * On the gap of length L = 3T/5 between bands, h' rises from -4k to the
 * plateau 44k/9 over a smoothstep ramp of length L/4, stays there, and
 * returns symmetrically; the gap integral 8kT/5 cancels the band drop.
 */
inline Jet2 meshkov_h_jet(double phi, const HParams& p) noexcept {
    const double T = p.period;
    const double k = static_cast<double>(p.k);
    const double m = std::floor((phi + 0.2 * T) / T);
    const double x = phi - m * T;  // in [-T/5, 4T/5)

    if (x <= 0.2 * T) return {-4.0 * k * x, -4.0 * k, 0.0};

    const double gap = 0.6 * T;
    const double ramp = detail::kHRampFraction * gap;
    const double rise = (detail::kHPeakOverK + 4.0) * k;  // plateau minus band slope
    const double y = x - 0.2 * T;

    if (y < ramp) {
        const Jet2 s = smoothstep_jet(y / ramp);
        return {-0.8 * k * T - 4.0 * k * y + rise * ramp * smoothstep_integral(y / ramp),
                -4.0 * k + rise * s.value, rise * s.d1 / ramp};
    }
    const double z = gap - y;  // distance to the next band
    if (z < ramp) {
        const Jet2 s = smoothstep_jet(z / ramp);
        return {0.8 * k * T + 4.0 * k * z - rise * ramp * smoothstep_integral(z / ramp),
                -4.0 * k + rise * s.value, -rise * s.d1 / ramp};
    }
    const double peak = detail::kHPeakOverK * k;
    const double h_at_ramp_end = -0.8 * k * T - 4.0 * k * ramp + rise * ramp * 0.5;
    return {h_at_ramp_end + peak * (y - ramp), peak, 0.0};
}

/// Angular offsets (relative to phi_m) where h changes smoothness class.
inline std::array<double, 4> h_breakpoints(const HParams& p) noexcept {
    const double T = p.period;
    const double ramp = detail::kHRampFraction * 0.6 * T;
    return {-0.2 * T, 0.2 * T, 0.2 * T + ramp, 0.8 * T - ramp};
}

}  // namespace ucpforge
