/**
 * @file field_jet.hpp
 * @brief Pointwise jets of the constructed field and the algebra used to
 *        assemble them (monomials, radial cutoff products, sums).
 */
#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <utility>

#include "log_complex.hpp"
#include "smoothkit.hpp"

namespace ucpforge {

/**
 * u together with its logarithmic derivatives:
 *   lr = (d_r u)/u, lphi = (d_phi u)/u, q = (Laplacian u)/u.
 * The potential of the equation Laplacian u + W u = 0 is W = -q.
 */
struct FieldJet {
    LogComplex u;
    complex lr{};
    complex lphi{};
    complex q{};

    complex potential() const noexcept { return -q; }
};

/**
 * coef * r^power * e^{i angular phi}, with log|coef| and arg(coef) given.
 * Harmonic exactly when |power| == |angular|, in which case q is exactly 0.
 */
inline FieldJet monomial_jet(double log_coef, double coef_phase, int power, int angular,
                             double r, double phi) noexcept {
    const double p = power;
    const double m = angular;
    FieldJet out;
    out.u = {log_coef + p * std::log(r), coef_phase + m * phi};
    out.lr = {p / r, 0.0};
    out.lphi = {0.0, m};
    out.q = {(p - m) * (p + m) / (r * r), 0.0};
    return out;
}

/// One summand psi(r) * v of a field built from radial cutoffs.
struct WeightedTerm {
    Jet2 weight;
    FieldJet base;
};

/**
 * Jet of sum_i psi_i(r) v_i(r, phi) for radial weights psi_i.
 *
 * Terms with zero weight are dropped. The base with the largest |v_i| is
 * the pivot; the others enter through v_i / pivot, which stays in ordinary
 * range because the summands are comparable wherever they coexist.
 * Uses Laplacian(psi v) = psi Lap v + 2 psi' d_r v + (psi'' + psi'/r) v.
 */
inline FieldJet combine_radial(std::initializer_list<WeightedTerm> terms, double r) noexcept {
    const WeightedTerm* pivot = nullptr;
    for (const auto& t : terms) {
        if (t.weight.value == 0.0) continue;
        if (pivot == nullptr || t.base.u.log_abs > pivot->base.u.log_abs) pivot = &t;
    }
    if (pivot == nullptr) return {};

    complex sum{}, sum_r{}, sum_phi{}, sum_lap{};
    for (const auto& t : terms) {
        if (t.weight.value == 0.0) continue;
        const complex w = (&t == pivot) ? complex{1.0, 0.0} : ratio(t.base.u, pivot->base.u);
        const Jet2& psi = t.weight;
        const FieldJet& v = t.base;
        sum += w * psi.value;
        sum_r += w * (psi.d1 + psi.value * v.lr);
        sum_phi += w * (psi.value * v.lphi);
        sum_lap += w * (psi.value * v.q + 2.0 * psi.d1 * v.lr + psi.d2 + psi.d1 / r);
    }

    FieldJet out;
    const LogComplex factor = LogComplex::from(sum);
    out.u = pivot->base.u * factor;
    out.lr = sum_r / sum;
    out.lphi = sum_phi / sum;
    out.q = sum_lap / sum;
    return out;
}

}  // namespace ucpforge
