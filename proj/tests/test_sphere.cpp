#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "ucpforge/sphere.hpp"

using namespace ucpforge;

TEST(Sphere, StereographicMap) {
    const SpherePoint o = stereo_to_sphere(0.0, 0.0);
    EXPECT_EQ(o.X, 0.0);
    EXPECT_EQ(o.Y, 0.0);
    EXPECT_EQ(o.Z, -1.0);
    const SpherePoint e = stereo_to_sphere(1.0, 0.0);
    EXPECT_NEAR(e.X, 1.0, 1e-15);
    EXPECT_NEAR(e.Z, 0.0, 1e-15);
    for (auto [x, y] : std::vector<std::pair<double, double>>{{0.3, -2.0}, {100.0, 5.0}, {-1e-3, 1e-4}}) {
        const SpherePoint p = stereo_to_sphere(x, y);
        EXPECT_NEAR(p.X * p.X + p.Y * p.Y + p.Z * p.Z, 1.0, 1e-14);
        const auto [cx, cy] = sphere_to_chart(p);
        EXPECT_NEAR(cx, x, 1e-12 * (1 + std::abs(x)));
        EXPECT_NEAR(cy, y, 1e-12 * (1 + std::abs(y)));
    }
}

TEST(Sphere, ChartRadiusMatchesGeodesicDistance) {
    for (double s : {0.01, 0.5, 2.0}) {
        const SpherePoint n = stereo_to_sphere(chart_radius(Pole::north, s), 0.0);
        EXPECT_NEAR(std::acos(n.Z), s, 1e-12);
        const SpherePoint p = stereo_to_sphere(chart_radius(Pole::south, s), 0.0);
        EXPECT_NEAR(std::acos(-p.Z), s, 1e-12);
    }
}

TEST(Sphere, ConformalFactorMatchesFlatLaplacian) {
    // Lap_S2 Y = -2 Y for the coordinate function Y.
    const double x = 0.7, y = -0.4, h = 1e-4;
    auto Ycoord = [](double a, double b) { return stereo_to_sphere(a, b).Y; };
    const double lap = (Ycoord(x + h, y) + Ycoord(x - h, y) + Ycoord(x, y + h) + Ycoord(x, y - h) - 4 * Ycoord(x, y)) / (h * h);
    EXPECT_NEAR(conformal_factor(std::hypot(x, y)) * lap, -2.0 * Ycoord(x, y), 1e-6);
}

TEST(Sphere, PotentialSupport) {
    const Assembly a = build_assembly({121, 1.0, 10});
    const double r = a.layers_end() + 0.5;
    EXPECT_EQ(sphere_potential(a, r, 0.0), complex(0.0, 0.0));
    EXPECT_EQ(sphere_potential(a, 0.1, 0.0), complex(0.0, 0.0));
    const complex w = sphere_potential(a, 0.5, 0.0);
    EXPECT_NEAR(std::abs(w), conformal_factor(0.5) * std::abs(eval_plane(a, 0.5, 0.0).q), 1e-9 * std::abs(w));
}

TEST(Sphere, PoleVanishingOrders) {
    const std::vector<double> radii{0.01, 0.0177827941, 0.0316227766, 0.0562341325, 0.1};
    const Assembly a = build_assembly({121, 1.0, 10});
    EXPECT_NEAR(pole_vanishing_order(a, Pole::north, radii), 121.0, 0.5);
    EXPECT_NEAR(pole_vanishing_order(a, Pole::south, radii), 100.0, 0.5);
    EXPECT_NEAR(pole_vanishing_order([](double, double) { return 0.0; }, Pole::north, radii), 0.0, 1e-9);
    const std::vector<double> two{0.1, 0.2};
    EXPECT_THROW(pole_vanishing_order(a, Pole::north, two), std::invalid_argument);
}

TEST(Sphere, CapNormOfOneIsCapArea) {
    const QuadratureSpec spec{256, 16, 2};
    for (double s : {0.1, 1.0, 3.0}) {
        const double area = 2.0 * std::numbers::pi * (1.0 - std::cos(s));
        EXPECT_NEAR(cap_log_norm([](double, double) { return 0.0; }, Pole::north, s, spec), 0.5 * std::log(area), 1e-8);
    }
}

TEST(Sphere, CapDoublingNearNorthPole) {
    const Assembly a = build_assembly({121, 1.0, 10});
    const auto log_abs = [&](double r, double phi) { return eval_plane(a, r, phi).u.log_abs; };
    const QuadratureSpec spec{8192, 16, 2};
    const double s = 0.02;
    const double e = (cap_log_norm(log_abs, Pole::north, 2 * s, spec) - cap_log_norm(log_abs, Pole::north, s, spec)) / std::log(2.0);
    EXPECT_NEAR(e, 122.0, 0.5);
}
