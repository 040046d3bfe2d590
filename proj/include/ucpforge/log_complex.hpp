/**
 * @file log_complex.hpp
 * @brief Complex numbers stored as (log-magnitude, phase).
 *
 * The constructed fields behave like r^{-N} with N in the hundreds, so the
 * magnitude is carried as a logarithm and only ratios of nearby values are
 * ever formed in ordinary precision.
 */
#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace ucpforge {

using complex = std::complex<double>;

/// Reduce an angle to (-pi, pi].
inline double wrap_phase(double phase) noexcept {
    double w = std::remainder(phase, 2.0 * std::numbers::pi);
    if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
    return w;
}

struct LogComplex {
    double log_abs = -std::numeric_limits<double>::infinity();
    double phase = 0.0;

    static LogComplex zero() noexcept { return {}; }

    /// Build from an ordinary complex number (zero maps to log_abs = -inf).
    static LogComplex from(complex z) noexcept {
        if (z == complex{0.0, 0.0}) return zero();
        return {std::log(std::abs(z)), std::arg(z)};
    }

    bool is_zero() const noexcept { return std::isinf(log_abs) && log_abs < 0; }

    /// Ordinary complex value; under/overflows for extreme magnitudes.
    complex value() const noexcept {
        if (is_zero()) return {0.0, 0.0};
        return std::polar(std::exp(log_abs), phase);
    }

    LogComplex normalized() const noexcept { return {log_abs, wrap_phase(phase)}; }

    friend LogComplex operator*(const LogComplex& a, const LogComplex& b) noexcept {
        return {a.log_abs + b.log_abs, a.phase + b.phase};
    }
    friend LogComplex operator/(const LogComplex& a, const LogComplex& b) noexcept {
        return {a.log_abs - b.log_abs, a.phase - b.phase};
    }
};

/// a / b as an ordinary complex number; only meaningful when |a/b| is representable.
inline complex ratio(const LogComplex& a, const LogComplex& b) noexcept {
    if (a.is_zero()) return {0.0, 0.0};
    return std::polar(std::exp(a.log_abs - b.log_abs), a.phase - b.phase);
}

/// Multiply by an ordinary complex factor.
inline LogComplex scaled(const LogComplex& a, complex factor) noexcept {
    if (factor == complex{0.0, 0.0}) return LogComplex::zero();
    return {a.log_abs + std::log(std::abs(factor)), a.phase + std::arg(factor)};
}

/// Stable log(exp(a) + exp(b)).
inline double log_add(double a, double b) noexcept {
    if (std::isinf(a) && a < 0) return b;
    if (std::isinf(b) && b < 0) return a;
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace ucpforge
