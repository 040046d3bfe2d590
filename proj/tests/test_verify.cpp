#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ucpforge/verify.hpp"

using namespace ucpforge;

namespace {
const Assembly& a121() {
    static const Assembly a = build_assembly({121, 1.0, 10});
    return a;
}
}  // namespace

TEST(FdResidual, TailIsPureTruncation) {
    const Assembly& a = a121();
    const double x = a.layers_end() + 2.0;
    const FdResidual coarse = fd_laplacian_residual(a, x, 0.3, 1e-2);
    const FdResidual fine = fd_laplacian_residual(a, x, 0.3, 5e-3);
    EXPECT_EQ(coarse.q, complex(0.0, 0.0));
    EXPECT_NEAR(coarse.residual / fine.residual, 4.0, 0.05);
}

TEST(FdResidual, HarmonicBandInStepI) {
    const Assembly& a = a121();
    const LayerParams& l = a.layers.front();
    const double r = l.at(1.0), phi = l.h.phi_m(3);
    const FdResidual f = fd_laplacian_residual(a, r * std::cos(phi), r * std::sin(phi), 1e-4 * a.delta);
    EXPECT_EQ(f.q, complex(0.0, 0.0));
    EXPECT_LT(f.residual, 1e-6);
}

TEST(FdResidual, RefusesSeamCrossingStencil) {
    const Assembly& a = a121();
    const double r = a.layers.front().at(3.0);
    EXPECT_THROW(fd_laplacian_residual(a, r, 0.0, 1e-3), std::domain_error);
    EXPECT_THROW(fd_laplacian_residual(a, 0.5, 0.0, 0.0), std::invalid_argument);
}

TEST(FdResidual, SecondOrderOnSupport) {
    const ResidualStudy s = residual_convergence(a121(), 200, 1e-2 * a121().delta, 1e-4 * a121().delta);
    EXPECT_EQ(s.ratios.size(), 200u);
    EXPECT_GE(s.median_ratio, 3.5);
    EXPECT_LE(s.median_ratio, 4.5);
    EXPECT_LE(s.max_potential_error, 1e-4);
}

TEST(FdResidual, StudyIsSeeded) {
    const ResidualStudy a = residual_convergence(a121(), 50, 1e-2 * a121().delta, 1e-4 * a121().delta, 1);
    const ResidualStudy b = residual_convergence(a121(), 50, 1e-2 * a121().delta, 1e-4 * a121().delta, 1);
    EXPECT_EQ(a.ratios, b.ratios);
}

TEST(Continuity, AllSeams) {
    const Assembly a = build_assembly({169, 1.0, 10});
    const SeamAudit audit = interface_continuity(a, 720);
    EXPECT_EQ(audit.seams.size(), 3u + 4u * a.layers.size());
    EXPECT_LE(audit.max_jump, 1e-10);
}

TEST(Continuity, DetectsAJump) {
    const Assembly& a = a121();
    const SeamJump j = audit_seam(
        2.0, 16, [&](double r, double phi) { return tail_jet(a, r, phi); },
        [&](double r, double phi) { return monomial_jet(a.log_aN + 1e-3, 0.0, -121, -121, r, phi); });
    EXPECT_GT(j.worst(), 1e-6);
}

TEST(Support, HarmonicZonesAreExactlyZero) {
    const SupportCheck c = support_check(a121(), 256);
    EXPECT_GT(c.samples, 10000);
    EXPECT_EQ(c.max_abs_w, 0.0);
}

TEST(Positivity, FieldNeverVanishesOffOrigin) {
    const PositivityCheck p = positivity_check(a121(), 300, 300);
    EXPECT_TRUE(p.all_finite);
    EXPECT_TRUE(std::isfinite(p.min_normalized));
}

TEST(Tail, SlopeEqualsMinusN) {
    EXPECT_NEAR(tail_slope(a121()), -121.0, 1e-9);
    EXPECT_NEAR(tail_slope(build_assembly({400, 1.0, 10})), -400.0, 1e-9);
}

TEST(Sup, CapIsIndependentOfN) {
    const SupReport s121 = sup_potential(a121(), 256);
    const SupReport s400 = sup_potential(build_assembly({400, 1.0, 10}), 256);
    EXPECT_NEAR(s121.cap, s400.cap, 1e-12 * s121.cap);
    EXPECT_GT(s400.layers, s121.layers);
    EXPECT_GE(s121.plane.value, s121.layers);
}

TEST(Sup, StableUnderRefinement) {
    const double coarse = sup_potential(a121(), 1024).plane.value;
    const double fine = sup_potential(a121(), 2048).plane.value;
    EXPECT_NEAR(fine / coarse, 1.0, 0.01);
}

TEST(Sup, RegionsCoverEveryLayer) {
    const Assembly a = build_assembly({196, 1.0, 10});
    const auto regions = support_regions(a);
    ASSERT_EQ(regions.size(), 1u + 2u * a.layers.size());
    EXPECT_EQ(regions[1].r_lo, a.layers_begin());
    EXPECT_EQ(regions.back().r_hi, a.layers_end());
}

TEST(Scaling, NeedsThreePerfectSquares) {
    const std::vector<int> two{121, 144};
    EXPECT_THROW(scaling_study(two, ScalingOptions{}), std::invalid_argument);
    const std::vector<int> bad{121, 144, 150};
    EXPECT_THROW(scaling_study(bad, ScalingOptions{}), std::invalid_argument);
}

TEST(Scaling, SmallSweep) {
    ScalingOptions opt;
    opt.resolution = 256;
    const std::vector<int> ns{121, 144, 169};
    const ScalingTable t = scaling_study(ns, opt);
    ASSERT_EQ(t.rows.size(), 3u);
    for (const auto& r : t.rows) {
        EXPECT_NEAR(r.pole_order_north, r.n_order, 0.5);
        EXPECT_NEAR(r.pole_order_south, 100.0, 0.5);
        EXPECT_NEAR(r.doubling_max, r.n_order + 1.0, 1.5);
    }
    EXPECT_GT(t.sup_w_layers_slope, 0.5);
    EXPECT_LT(t.doubling_fit_residual, 0.1);
}
