/**
 * @file layercore.hpp
 * @brief Closed-form evaluation of one annulus layer [rho_j, rho_j + 6 delta]
 *        in which the decay exponent moves from j^2 to (j+1)^2.
 *
 * The layer is split into four sub-annuli (offsets in units of delta):
 *   [0,2)  u = psi1 u1 + psi2 u2, u2 carries the phase modulation h
 *   [2,3)  the modulation is switched off radially
 *   [3,4)  amplitude bridge u = u3 f with f = psi + (1-psi) d r^{-4k}
 *   [4,6)  u = psi4 u4 + psi5 u5, landing on c r^{-(n+k)} e^{-i(n+k)phi}
 */
#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "field_jet.hpp"
#include "smoothkit.hpp"

namespace ucpforge {

struct LayerParams {
    int j = 10;
    int n = 100;
    int k = 21;
    double delta = 0.0;
    double rho_j = 0.0;
    HParams h;
    double log_a = 0.0;
    double log_b = 0.0;
    double log_b1 = 0.0;
    double log_c = 0.0;
    double log_d = 0.0;

    double period() const noexcept { return h.period; }
    double at(double offset) const noexcept { return rho_j + offset * delta; }
    double outer() const noexcept { return at(6.0); }
};

/// Layer constants; rho_j is the inner radius of the layer.
inline LayerParams layer_params(int j, double rho_j, double delta, double log_a) {
    if (j < 10) throw std::invalid_argument("layer_params: j must be >= 10");
    if (!(rho_j >= 1.0)) throw std::invalid_argument("layer_params: rho must be >= 1");
    if (!(delta > 0.0 && delta <= 0.1)) throw std::invalid_argument("layer_params: delta must lie in (0, 1/10]");

    LayerParams p;
    p.j = j;
    p.h = HParams::for_layer(j);
    p.n = p.h.n;
    p.k = p.h.k;
    p.delta = delta;
    p.rho_j = rho_j;
    p.log_a = log_a;
    const double k = p.k;
    p.log_b = log_a - 2.0 * k * std::log(rho_j + delta);
    p.log_d = 4.0 * k * std::log(rho_j + 3.0 * delta);
    p.log_b1 = p.log_b + p.log_d;
    p.log_c = p.log_b1 - k * std::log(rho_j + 5.0 * delta);
    return p;
}

/// Radial offsets (units of delta) where some cutoff changes smoothness class.
inline constexpr std::array<double, 17> kLayerSeamOffsets = {
    0.0, 0.1, 1.0 / 3.0, 5.0 / 3.0, 1.9, 2.0, 7.0 / 3.0, 8.0 / 3.0, 3.0,
    10.0 / 3.0, 11.0 / 3.0, 4.0, 4.1, 13.0 / 3.0, 17.0 / 3.0, 5.9, 6.0};

namespace detail {

inline void require_range(double r, double lo, double hi, const char* who) {
    const double slack = 1e-12 * hi;
    if (r < lo - slack || r > hi + slack)
        throw std::out_of_range(std::string(who) + ": radius outside its sub-annulus");
}

// -b r^{-n+2k} e^{i[(n+2k)phi + s(r) h(phi)]}, the modulated middle field.
// s = 1 gives u2 of the first sub-annulus, s = 0 gives u3.
inline FieldJet modulated_jet(const LayerParams& p, double r, double phi, const Jet2& s) {
    const double n = p.n;
    const double k = p.k;
    const double power = -n + 2.0 * k;
    const double nk2 = n + 2.0 * k;
    const Jet2 h = meshkov_h_jet(phi, p.h);
    const double sh1 = s.value * h.d1;

    FieldJet out;
    out.u = {p.log_b + power * std::log(r), std::numbers::pi + nk2 * phi + s.value * h.value};
    out.lr = {power / r, s.d1 * h.value};
    out.lphi = {0.0, nk2 + sh1};
    // (-n+2k)^2 - (n+2k)^2 = -8kn is taken exactly so no n^2 terms cancel numerically.
    const complex angular{-8.0 * k * n - 2.0 * nk2 * sh1 - sh1 * sh1, s.value * h.d2};
    const complex radial{-s.d1 * s.d1 * h.value * h.value,
                         2.0 * power * s.d1 * h.value / r + h.value * (s.d2 + s.d1 / r)};
    out.q = angular / (r * r) + radial;
    return out;
}

inline FieldJet u1_jet(const LayerParams& p, double r, double phi) {
    return monomial_jet(p.log_a, 0.0, -p.n, -p.n, r, phi);
}

inline FieldJet u4_jet(const LayerParams& p, double r, double phi) {
    return monomial_jet(p.log_b1, std::numbers::pi, -(p.n + 2 * p.k), p.n + 2 * p.k, r, phi);
}

inline FieldJet u5_jet(const LayerParams& p, double r, double phi) {
    return monomial_jet(p.log_c, 0.0, -(p.n + p.k), -(p.n + p.k), r, phi);
}

}  // namespace detail

/// First sub-annulus [rho_j, rho_j + 2 delta].
inline FieldJet eval_step_I(double r, double phi, const LayerParams& p) {
    detail::require_range(r, p.at(0.0), p.at(2.0), "eval_step_I");
    const Jet2 psi1 = cutoff_jet(r, p.at(5.0 / 3.0), p.at(1.9), Direction::falling);
    const Jet2 psi2 = cutoff_jet(r, p.at(0.1), p.at(1.0 / 3.0), Direction::rising);
    return combine_radial({{psi1, detail::u1_jet(p, r, phi)},
                           {psi2, detail::modulated_jet(p, r, phi, {1.0, 0.0, 0.0})}},
                          r);
}

/// Second sub-annulus [rho_j + 2 delta, rho_j + 3 delta].
inline FieldJet eval_step_II(double r, double phi, const LayerParams& p) {
    detail::require_range(r, p.at(2.0), p.at(3.0), "eval_step_II");
    const Jet2 psi = cutoff_jet(r, p.at(7.0 / 3.0), p.at(8.0 / 3.0), Direction::falling);
    return detail::modulated_jet(p, r, phi, psi);
}

/// Third sub-annulus [rho_j + 3 delta, rho_j + 4 delta].
inline FieldJet eval_step_III(double r, double phi, const LayerParams& p) {
    detail::require_range(r, p.at(3.0), p.at(4.0), "eval_step_III");
    const Jet2 psi = cutoff_jet(r, p.at(10.0 / 3.0), p.at(11.0 / 3.0), Direction::falling);
    if (psi.value == 0.0) return detail::u4_jet(p, r, phi);

    const double k4 = 4.0 * p.k;
    const double g = std::exp(p.log_d - k4 * std::log(r));
    const double g1 = -k4 * g / r;
    const double g2 = k4 * (k4 + 1.0) * g / (r * r);
    const Jet2 f{psi.value + (1.0 - psi.value) * g,
                 psi.d1 * (1.0 - g) + (1.0 - psi.value) * g1,
                 psi.d2 * (1.0 - g) - 2.0 * psi.d1 * g1 + (1.0 - psi.value) * g2};
    return combine_radial({{f, detail::modulated_jet(p, r, phi, {0.0, 0.0, 0.0})}}, r);
}

/// Fourth sub-annulus [rho_j + 4 delta, rho_j + 6 delta].
inline FieldJet eval_step_IV(double r, double phi, const LayerParams& p) {
    detail::require_range(r, p.at(4.0), p.at(6.0), "eval_step_IV");
    const Jet2 psi4 = cutoff_jet(r, p.at(17.0 / 3.0), p.at(5.9), Direction::falling);
    const Jet2 psi5 = cutoff_jet(r, p.at(4.1), p.at(13.0 / 3.0), Direction::rising);
    return combine_radial({{psi4, detail::u4_jet(p, r, phi)}, {psi5, detail::u5_jet(p, r, phi)}}, r);
}

/// Which sub-annulus (1..4) holds r, using half-open intervals.
inline int layer_step(double r, const LayerParams& p) noexcept {
    if (r < p.at(2.0)) return 1;
    if (r < p.at(3.0)) return 2;
    if (r < p.at(4.0)) return 3;
    return 4;
}

/// Dispatch over the four sub-annuli; r must lie in [rho_j, rho_j + 6 delta).
inline FieldJet eval_layer(double r, double phi, const LayerParams& p) {
    if (r < p.at(0.0) || r >= p.outer()) throw std::out_of_range("eval_layer: radius outside the layer");
    switch (layer_step(r, p)) {
        case 1: return eval_step_I(r, phi, p);
        case 2: return eval_step_II(r, phi, p);
        case 3: return eval_step_III(r, phi, p);
        default: return eval_step_IV(r, phi, p);
    }
}

}  // namespace ucpforge
