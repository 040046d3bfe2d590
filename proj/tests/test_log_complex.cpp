#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ucpforge/log_complex.hpp"

using namespace ucpforge;

TEST(LogComplex, RoundTripsOrdinaryValues) {
    const complex z{-3.0, 4.0};
    const LogComplex l = LogComplex::from(z);
    EXPECT_NEAR(l.log_abs, std::log(5.0), 1e-15);
    EXPECT_NEAR(std::abs(l.value() - z), 0.0, 1e-14);
}

TEST(LogComplex, ZeroIsMinusInfinity) {
    const LogComplex z = LogComplex::from({0.0, 0.0});
    EXPECT_TRUE(z.is_zero());
    EXPECT_EQ(z.value(), complex(0.0, 0.0));
    EXPECT_EQ(ratio(z, LogComplex::from({2.0, 0.0})), complex(0.0, 0.0));
}

TEST(LogComplex, ProductOfExtremeMagnitudesStaysFinite) {
    const LogComplex huge{1500.0, 0.3};
    const LogComplex tiny{-1499.0, -0.1};
    const LogComplex p = huge * tiny;
    EXPECT_DOUBLE_EQ(p.log_abs, 1.0);
    EXPECT_NEAR(std::abs(p.value() - std::polar(std::exp(1.0), 0.2)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(ratio(huge, huge) - complex(1.0, 0.0)), 0.0, 1e-15);
}

TEST(LogComplex, WrapPhaseRange) {
    for (double p : {-10.0, -std::numbers::pi, 0.0, std::numbers::pi, 7.0, 100.0}) {
        const double w = wrap_phase(p);
        EXPECT_GT(w, -std::numbers::pi);
        EXPECT_LE(w, std::numbers::pi);
        EXPECT_NEAR(std::remainder(w - p, 2.0 * std::numbers::pi), 0.0, 1e-12);
    }
}

TEST(LogComplex, ScaledAndLogAdd) {
    const LogComplex a{2.0, 0.5};
    const LogComplex s = scaled(a, {0.0, 2.0});
    EXPECT_NEAR(s.log_abs, 2.0 + std::log(2.0), 1e-15);
    EXPECT_NEAR(s.phase, 0.5 + std::numbers::pi / 2, 1e-15);
    EXPECT_TRUE(scaled(a, {0.0, 0.0}).is_zero());
    EXPECT_NEAR(log_add(std::log(2.0), std::log(3.0)), std::log(5.0), 1e-15);
    EXPECT_DOUBLE_EQ(log_add(-INFINITY, 4.0), 4.0);
    EXPECT_NEAR(log_add(1000.0, 1000.0), 1000.0 + std::log(2.0), 1e-12);
}
