/**
 * @file assembly.hpp
 * @brief The global field on the plane: harmonic inner cap r^{100}, a C^2
 *        transition to r^{-100}, the chained annulus layers and the harmonic
 *        tail a_N r^{-N} e^{-iN phi}.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "field_jet.hpp"
#include "layercore.hpp"
#include "smoothkit.hpp"

namespace ucpforge {

struct AssemblyConfig {
    int n_order = 121;
    double rho = 1.0;
    int j0 = 10;
};

/// Integer square root when n is a perfect square, otherwise -1.
inline int exact_sqrt(int n) noexcept {
    if (n < 0) return -1;
    int s = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    while (s * s > n) --s;
    while ((s + 1) * (s + 1) <= n) ++s;
    return s * s == n ? s : -1;
}

enum class Region { origin, inner, cap, collar, step1, step2, step3, step4, tail };

inline std::string_view region_tag(Region r) noexcept {
    switch (r) {
        case Region::origin: return "origin";
        case Region::inner: return "inner";
        case Region::cap: return "cap";
        case Region::collar: return "collar";
        case Region::step1: return "step1";
        case Region::step2: return "step2";
        case Region::step3: return "step3";
        case Region::step4: return "step4";
        case Region::tail: return "tail";
    }
    return "unknown";
}

struct Assembly {
    AssemblyConfig config;
    int root = 11;       ///< J = sqrt(N)
    double delta = 0.0;  ///< 1/J
    int inner_n = 100;   ///< j0^2
    std::vector<LayerParams> layers;
    double log_aN = 0.0;

    double cap_lo() const noexcept { return config.rho / 4.0; }
    double cap_hi() const noexcept { return 3.0 * config.rho / 4.0; }
    double layers_begin() const noexcept { return layers.front().rho_j; }
    /// rho_J, where the tail starts.
    double layers_end() const noexcept { return layers.back().outer(); }

    /// Every radius at which the field changes formula, ascending.
    std::vector<double> seams() const {
        std::vector<double> out{cap_lo(), cap_hi()};
        for (const auto& l : layers)
            for (double off : kLayerSeamOffsets) out.push_back(l.at(off));
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
};

inline Assembly build_assembly(const AssemblyConfig& config) {
    const int root = exact_sqrt(config.n_order);
    if (root < 0)
        throw std::invalid_argument("build_assembly: N = " + std::to_string(config.n_order) +
                                    " is not a perfect square (N must equal J^2)");
    if (config.j0 != 10) throw std::invalid_argument("build_assembly: first layer index must be 10");
    if (root < config.j0 + 1)
        throw std::invalid_argument("build_assembly: sqrt(N) must be >= 11 so at least one layer exists");
    if (!(config.rho >= 1.0)) throw std::invalid_argument("build_assembly: rho must be >= 1");

    Assembly a;
    a.config = config;
    a.root = root;
    a.delta = 1.0 / root;
    a.inner_n = config.j0 * config.j0;
    double log_a = 0.0;
    double rho_j = config.rho + 6.0 * (config.j0 - 1) * a.delta;
    for (int j = config.j0; j < root; ++j) {
        a.layers.push_back(layer_params(j, rho_j, a.delta, log_a));
        log_a = a.layers.back().log_c;
        rho_j = a.layers.back().outer();  // seams shared bit-for-bit
    }
    a.log_aN = log_a;
    return a;
}

/// Index into a.layers of the layer holding r, or -1 outside [rho_{j0}, rho_J).
inline int layer_index(const Assembly& a, double r) noexcept {
    if (r < a.layers_begin() || r >= a.layers_end()) return -1;
    auto it = std::upper_bound(a.layers.begin(), a.layers.end(), r,
                               [](double x, const LayerParams& l) { return x < l.rho_j; });
    return static_cast<int>(std::distance(a.layers.begin(), it)) - 1;
}

inline Region locate(const Assembly& a, double r) noexcept {
    if (r == 0.0) return Region::origin;
    if (r < a.cap_lo()) return Region::inner;
    if (r < a.cap_hi()) return Region::cap;
    if (r < a.layers_begin()) return Region::collar;
    const int idx = layer_index(a, r);
    if (idx < 0) return Region::tail;
    switch (layer_step(r, a.layers[static_cast<std::size_t>(idx)])) {
        case 1: return Region::step1;
        case 2: return Region::step2;
        case 3: return Region::step3;
        default: return Region::step4;
    }
}

/**
 * Transition part of the inner cap on the closed interval [rho/4, 3rho/4]:
 * u = g(r) e^{-i 100 phi}, log g = 100 (1 - 2 S(s)) ln r, s = (r - rho/4)/(rho/2).
 */
inline FieldJet cap_transition_jet(const Assembly& a, double r, double phi) {
    const int n1 = a.inner_n;
    const double width = a.cap_hi() - a.cap_lo();
    const Jet2 s = smoothstep_jet((r - a.cap_lo()) / width);
    const double ln_r = std::log(r);
    const double c0 = n1 * (1.0 - 2.0 * s.value);
    const double c1 = -2.0 * n1 * s.d1 / width;
    const double c2 = -2.0 * n1 * s.d2 / (width * width);
    const double g1 = c1 * ln_r + c0 / r;                       // (log g)'
    const double g2 = c2 * ln_r + 2.0 * c1 / r - c0 / (r * r);  // (log g)''
    const double m = n1;

    FieldJet out;
    out.u = {c0 * ln_r, -m * phi};
    out.lr = {g1, 0.0};
    out.lphi = {0.0, -m};
    out.q = {g2 + g1 * g1 + g1 / r - m * m / (r * r), 0.0};
    return out;
}

/// Inner harmonic monomial r^{100} e^{-i 100 phi}.
inline FieldJet inner_monomial_jet(const Assembly& a, double r, double phi) {
    return monomial_jet(0.0, 0.0, a.inner_n, -a.inner_n, r, phi);
}

/// Collar monomial r^{-100} e^{-i 100 phi}, which the first layer continues.
inline FieldJet collar_monomial_jet(const Assembly& a, double r, double phi) {
    return monomial_jet(0.0, 0.0, -a.inner_n, -a.inner_n, r, phi);
}

/// Outer harmonic tail a_N r^{-N} e^{-i N phi}.
inline FieldJet tail_jet(const Assembly& a, double r, double phi) {
    return monomial_jet(a.log_aN, 0.0, -a.config.n_order, -a.config.n_order, r, phi);
}

/// The field for 0 <= r < rho_{j0}; r = 0 reports magnitude zero.
inline FieldJet inner_cap_jet(const Assembly& a, double r, double phi) {
    if (r == 0.0) return {};
    if (r < a.cap_lo()) return inner_monomial_jet(a, r, phi);
    if (r < a.cap_hi()) return cap_transition_jet(a, r, phi);
    return collar_monomial_jet(a, r, phi);
}

/// Global dispatch: inner cap, layers, or tail. Requires r >= 0.
inline FieldJet eval_plane(const Assembly& a, double r, double phi) {
    if (r < 0.0) throw std::invalid_argument("eval_plane: r must be >= 0");
    if (r < a.layers_begin()) return inner_cap_jet(a, r, phi);
    const int idx = layer_index(a, r);
    if (idx >= 0) return eval_layer(r, phi, a.layers[static_cast<std::size_t>(idx)]);
    return tail_jet(a, r, phi);
}

/// Cartesian convenience wrapper.
inline FieldJet eval_xy(const Assembly& a, double x, double y) {
    return eval_plane(a, std::hypot(x, y), std::atan2(y, x));
}

}  // namespace ucpforge
